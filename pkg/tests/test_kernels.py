"""Backend parity: compiled and pure-Python kernels must agree bit-for-bit.

Weights are drawn from the dyadic grid (multiples of 2^-10) so float sums
are exactly representable decisions rather than rounding races.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from axaclin._kernels import MAX_KERNEL_FEATURES, backend_name, get_backend

python_backend = get_backend("python")
try:
    compiled_backend = get_backend("compiled")
except ImportError:
    compiled_backend = None

BACKENDS = [python_backend] + ([compiled_backend] if compiled_backend else [])

needs_compiled = pytest.mark.skipif(
    compiled_backend is None, reason="compiled extension not built"
)


def dyadic(lo=-4.0, hi=4.0):
    steps = int((hi - lo) * 1024)
    return st.integers(0, steps).map(lambda k: lo + k / 1024.0)


@st.composite
def linear_query(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    w = [draw(dyadic()) for _ in range(n)]
    b = draw(dyadic())
    mask = draw(st.integers(0, (1 << n) - 1))
    bits = draw(st.integers(0, (1 << n) - 1)) & mask
    want = draw(st.booleans())
    return n, w, b, mask, bits, want


def loop_entails(n, w, b, mask, bits, want_positive):
    # Direct definition: check every completion, summing ascending.
    free = [i for i in range(n) if not (mask >> i & 1)]
    for k in range(1 << len(free)):
        filled = bits
        for j, i in enumerate(free):
            if k >> j & 1:
                filled |= 1 << i
        s = b
        for i in range(n):
            if filled >> i & 1:
                s += w[i]
        positive = s > 0.0
        if positive != want_positive:
            return False
    return True


@settings(max_examples=300, deadline=None)
@given(linear_query())
def test_linear_closed_form_equals_definition(q):
    n, w, b, mask, bits, want = q
    expect = loop_entails(n, w, b, mask, bits, want)
    for backend in BACKENDS:
        oracle = backend.make_linear_oracle(w, b)
        assert oracle.entails(mask, bits, want) == expect
        assert oracle.entails_exhaustive(mask, bits, want) == expect


@settings(max_examples=200, deadline=None)
@given(linear_query())
def test_linear_score_exact_across_backends(q):
    n, w, b, mask, bits, _ = q
    scores = {backend.make_linear_oracle(w, b).score(bits) for backend in BACKENDS}
    assert len(scores) == 1


@st.composite
def nn_query(draw, max_n=8, max_h=4):
    n = draw(st.integers(1, max_n))
    h = draw(st.integers(1, max_h))
    W = [[draw(dyadic(-2.0, 2.0)) for _ in range(n)] for _ in range(h)]
    bh = [draw(dyadic(-2.0, 2.0)) for _ in range(h)]
    v = [draw(dyadic(-2.0, 2.0)) for _ in range(h)]
    bo = draw(dyadic(-2.0, 2.0))
    mask = draw(st.integers(0, (1 << n) - 1))
    bits = draw(st.integers(0, (1 << n) - 1)) & mask
    want = draw(st.booleans())
    return n, W, bh, v, bo, mask, bits, want


def loop_nn_entails(n, W, bh, v, bo, mask, bits, want_positive):
    free = [i for i in range(n) if not (mask >> i & 1)]
    for k in range(1 << len(free)):
        filled = bits
        for j, i in enumerate(free):
            if k >> j & 1:
                filled |= 1 << i
        s = bo
        for h_idx in range(len(W)):
            z = bh[h_idx]
            for i in range(n):
                if filled >> i & 1:
                    z += W[h_idx][i]
            s += v[h_idx] * (z if z > 0.0 else 0.0)
        if (s > 0.0) != want_positive:
            return False
    return True


@settings(max_examples=150, deadline=None)
@given(nn_query())
def test_nn_exhaustive_equals_definition(q):
    n, W, bh, v, bo, mask, bits, want = q
    expect = loop_nn_entails(n, W, bh, v, bo, mask, bits, want)
    for backend in BACKENDS:
        oracle = backend.make_nn_oracle(W, bh, v, bo)
        assert oracle.entails(mask, bits, want) == expect


@settings(max_examples=150, deadline=None)
@given(nn_query())
def test_nn_score_exact_across_backends(q):
    n, W, bh, v, bo, _, bits, _ = q
    scores = {backend.make_nn_oracle(W, bh, v, bo).score(bits) for backend in BACKENDS}
    assert len(scores) == 1


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 12),
    st.lists(st.integers(0, (1 << 12) - 1), min_size=0, max_size=40),
    st.integers(0, (1 << 12) - 1),
    st.integers(0, (1 << 12) - 1),
    st.data(),
)
def test_coverage_counts_match_loop(n, raw_rows, mask_raw, bits_raw, data):
    full = (1 << n) - 1
    rows = [r & full for r in raw_rows]
    labels = [data.draw(st.integers(0, 1)) for _ in rows]
    mask = mask_raw & full
    bits = bits_raw & mask
    expect_pos = sum(
        1 for r, l in zip(rows, labels) if l == 1 and (r & mask) == bits
    )
    expect_neg = sum(
        1 for r, l in zip(rows, labels) if l == 0 and (r & mask) == bits
    )
    row_arr = np.asarray(rows, dtype=np.uint64)
    lab_arr = np.asarray(labels, dtype=np.int8)
    for backend in BACKENDS:
        assert backend.coverage_counts(row_arr, lab_arr, mask, bits) == (
            expect_pos,
            expect_neg,
        )


@needs_compiled
def test_backend_selection_reports_compiled():
    assert backend_name() in ("compiled", "python")
    assert MAX_KERNEL_FEATURES == 64


def test_tie_score_is_negative_everywhere():
    for backend in BACKENDS:
        oracle = backend.make_linear_oracle([1.0, -1.0], 0.0)
        # x = (1, 1) scores exactly 0: decided Negative.
        assert oracle.score(0b11) == 0.0
        assert oracle.entails(0b11, 0b11, False)
        assert not oracle.entails(0b11, 0b11, True)


def test_zero_weight_model_is_constant():
    for backend in BACKENDS:
        pos = backend.make_linear_oracle([0.0, 0.0, 0.0], 1.0)
        neg = backend.make_linear_oracle([0.0, 0.0, 0.0], 0.0)
        assert pos.entails(0, 0, True)
        assert neg.entails(0, 0, False)
