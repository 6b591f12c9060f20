# Compiled backend for the hot kernels.  Mirrors fallback.py exactly:
# ascending-index accumulation, ties (score == 0) decide negative.

import numpy as np

ctypedef unsigned long long u64


cdef class LinearOracle:
    cdef double[::1] w
    cdef double b
    cdef int n

    def __init__(self, weights, bias):
        self.w = np.ascontiguousarray(weights, dtype=np.float64)
        self.b = bias
        self.n = self.w.shape[0]

    cdef double _score(self, u64 bits) nogil:
        cdef double s = self.b
        cdef int i
        for i in range(self.n):
            if (bits >> i) & 1ULL:
                s += self.w[i]
        return s

    def score(self, bits):
        return self._score(bits)

    def entails(self, mask, bits, want_positive):
        cdef u64 cmask = mask
        cdef u64 cbits = bits
        cdef bint pos = want_positive
        cdef double s = self.b
        cdef int i
        with nogil:
            if pos:
                for i in range(self.n):
                    if (cmask >> i) & 1ULL:
                        if (cbits >> i) & 1ULL:
                            s += self.w[i]
                    elif self.w[i] < 0.0:
                        s += self.w[i]
            else:
                for i in range(self.n):
                    if (cmask >> i) & 1ULL:
                        if (cbits >> i) & 1ULL:
                            s += self.w[i]
                    elif self.w[i] > 0.0:
                        s += self.w[i]
        if pos:
            return s > 0.0
        return s <= 0.0

    def entails_exhaustive(self, mask, bits, want_positive):
        cdef u64 cmask = mask
        cdef u64 cbits = bits
        cdef bint pos = want_positive
        cdef int nf = 0
        cdef int[64] free
        cdef int i, j
        cdef u64 combo, x
        cdef double s
        cdef bint ok = True
        for i in range(self.n):
            if not (cmask >> i) & 1ULL:
                free[nf] = i
                nf += 1
        with nogil:
            for combo in range(1ULL << nf):
                x = cbits
                for j in range(nf):
                    if (combo >> j) & 1ULL:
                        x |= 1ULL << free[j]
                s = self._score(x)
                if (s > 0.0) != pos:
                    ok = False
                    break
        return bool(ok)


cdef class NNOracle:
    cdef double[:, ::1] W
    cdef double[::1] hb
    cdef double[::1] v
    cdef double ob
    cdef int H
    cdef int n

    def __init__(self, w_hidden, b_hidden, w_out, b_out):
        self.W = np.ascontiguousarray(w_hidden, dtype=np.float64)
        self.hb = np.ascontiguousarray(b_hidden, dtype=np.float64)
        self.v = np.ascontiguousarray(w_out, dtype=np.float64)
        self.ob = b_out
        self.H = self.W.shape[0]
        self.n = self.W.shape[1]

    cdef void _hidden_base(self, u64 bits, double* base) nogil:
        cdef int i, j
        for j in range(self.H):
            base[j] = self.hb[j]
        for i in range(self.n):
            if (bits >> i) & 1ULL:
                for j in range(self.H):
                    base[j] += self.W[j, i]

    cdef double _out_from_hidden(self, double* hidden) nogil:
        cdef double out = self.ob
        cdef int j
        for j in range(self.H):
            if hidden[j] > 0.0:
                out += hidden[j] * self.v[j]
        return out

    def score(self, bits):
        cdef u64 cbits = bits
        cdef double[64] base
        if self.H > 64:
            raise ValueError("hidden layer wider than 64 units unsupported")
        self._hidden_base(cbits, base)
        return self._out_from_hidden(base)

    def entails(self, mask, bits, want_positive):
        cdef u64 cmask = mask
        cdef u64 cbits = bits
        cdef bint pos = want_positive
        cdef double[64] base
        cdef double[64] hidden
        cdef int[64] free
        cdef int nf = 0
        cdef int i, j, k
        cdef u64 combo
        cdef double out
        cdef bint ok = True
        if self.H > 64:
            raise ValueError("hidden layer wider than 64 units unsupported")
        for i in range(self.n):
            if not (cmask >> i) & 1ULL:
                free[nf] = i
                nf += 1
        self._hidden_base(cbits, base)
        with nogil:
            for combo in range(1ULL << nf):
                for j in range(self.H):
                    hidden[j] = base[j]
                for k in range(nf):
                    if (combo >> k) & 1ULL:
                        for j in range(self.H):
                            hidden[j] += self.W[j, free[k]]
                out = self._out_from_hidden(hidden)
                if (out > 0.0) != pos:
                    ok = False
                    break
        return bool(ok)


def make_linear_oracle(weights, bias):
    return LinearOracle(weights, bias)


def make_nn_oracle(w_hidden, b_hidden, w_out, b_out):
    return NNOracle(w_hidden, b_hidden, w_out, b_out)


def coverage_counts(row_bits, labels, mask, bits):
    cdef u64[::1] rows = np.ascontiguousarray(row_bits, dtype=np.uint64)
    cdef signed char[::1] labs = np.ascontiguousarray(labels, dtype=np.int8)
    cdef u64 cmask = mask
    cdef u64 cbits = bits
    cdef Py_ssize_t i
    cdef long pos = 0
    cdef long neg = 0
    with nogil:
        for i in range(rows.shape[0]):
            if (rows[i] & cmask) == cbits:
                if labs[i] == 1:
                    pos += 1
                else:
                    neg += 1
    return pos, neg
