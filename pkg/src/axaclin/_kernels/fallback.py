"""Pure Python + numpy backend for the hot kernels.

Semantics notes shared with the compiled backend:

* Scores accumulate weight terms in ascending feature index order, so the
  closed-form linear bounds and the exhaustive completion scan perform the
  same float additions and agree bit-for-bit on every query.
* A score of exactly 0 is a negative decision everywhere.
"""

from __future__ import annotations

import numpy as np

_CHUNK_BITS = 14  # completions are scanned in chunks of 2^14


class LinearOracle:
    def __init__(self, weights, bias: float):
        self.w = [float(v) for v in weights]
        self.b = float(bias)
        self.n = len(self.w)

    def score(self, bits: int) -> float:
        s = self.b
        for i, wi in enumerate(self.w):
            if bits >> i & 1:
                s += wi
        return s

    def entails(self, mask: int, bits: int, want_positive: bool) -> bool:
        """Closed form: free features take their worst-case contribution."""
        s = self.b
        if want_positive:
            for i, wi in enumerate(self.w):
                if mask >> i & 1:
                    if bits >> i & 1:
                        s += wi
                elif wi < 0.0:
                    s += wi
            return s > 0.0
        for i, wi in enumerate(self.w):
            if mask >> i & 1:
                if bits >> i & 1:
                    s += wi
            elif wi > 0.0:
                s += wi
        return s <= 0.0

    def entails_exhaustive(self, mask: int, bits: int, want_positive: bool) -> bool:
        free = [i for i in range(self.n) if not mask >> i & 1]
        for combo in range(1 << len(free)):
            s = self.b
            x = bits
            for j, i in enumerate(free):
                if combo >> j & 1:
                    x |= 1 << i
            for i, wi in enumerate(self.w):
                if x >> i & 1:
                    s += wi
            if (s > 0.0) != want_positive:
                return False
        return True


class NNOracle:
    """One hidden rectifier layer; entailment by exhaustive completion scan."""

    def __init__(self, w_hidden, b_hidden, w_out, b_out: float):
        self.W = np.asarray(w_hidden, dtype=np.float64)
        self.hb = np.asarray(b_hidden, dtype=np.float64)
        self.v = np.asarray(w_out, dtype=np.float64)
        self.ob = float(b_out)
        self.H, self.n = self.W.shape

    def _hidden_base(self, bits: int) -> np.ndarray:
        base = self.hb.copy()
        for i in range(self.n):
            if bits >> i & 1:
                base += self.W[:, i]
        return base

    def score(self, bits: int) -> float:
        base = self._hidden_base(bits)
        return float(np.maximum(base, 0.0) @ self.v + self.ob)

    def entails(self, mask: int, bits: int, want_positive: bool) -> bool:
        free = [i for i in range(self.n) if not mask >> i & 1]
        base = self._hidden_base(bits)
        nf = len(free)
        if nf == 0:
            out = float(np.maximum(base, 0.0) @ self.v + self.ob)
            return (out > 0.0) == want_positive
        Wf = self.W[:, free].T  # (nf, H)
        total = 1 << nf
        step = 1 << min(nf, _CHUNK_BITS)
        shifts = np.arange(nf, dtype=np.uint64)
        for start in range(0, total, step):
            combos = np.arange(start, min(start + step, total), dtype=np.uint64)
            sel = ((combos[:, None] >> shifts) & 1).astype(np.float64)
            hidden = base[None, :] + sel @ Wf
            out = np.maximum(hidden, 0.0) @ self.v + self.ob
            if want_positive:
                if not np.all(out > 0.0):
                    return False
            elif np.any(out > 0.0):
                return False
        return True


def make_linear_oracle(weights, bias):
    return LinearOracle(weights, bias)


def make_nn_oracle(w_hidden, b_hidden, w_out, b_out):
    return NNOracle(w_hidden, b_hidden, w_out, b_out)


def coverage_counts(row_bits, labels, mask: int, bits: int):
    """Count (positive, negative) rows whose bits match ``bits`` on ``mask``."""
    rows = np.asarray(row_bits, dtype=np.uint64)
    labs = np.asarray(labels, dtype=np.int8)
    m = np.uint64(mask)
    b = np.uint64(bits)
    sel = (rows & m) == b
    pos = int(np.count_nonzero(sel & (labs == 1)))
    neg = int(np.count_nonzero(sel & (labs != 1)))
    return pos, neg
