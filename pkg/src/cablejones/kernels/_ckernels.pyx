# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Semantics must match ``_pykernels`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

cdef extern from *:
    """
    static inline int cj_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int cj_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int cj_mul_ovf(long long a, long long b, long long *r) nogil
    int cj_sub_ovf(long long a, long long b, long long *r) nogil


def kappa_residues(long long p1, long long q1, long long p2, long long q2, long long N):
    cdef long long B = q1 - p1 * p2 * q2
    cdef long long D = p1 * p2
    cdef long long M = 4 * D * (N + 1)
    weights = np.zeros(M, dtype=np.int64)
    counts = np.zeros(M, dtype=np.int64)
    cdef int64_t[::1] w = weights
    cdef int64_t[::1] c = counts
    cdef long long k, kp, n, an, m, E, X, r, sg, base, qm
    qm = p1 * q2
    with nogil:
        k = -N
        while k <= N:
            n = p1 * k + 1
            if n != 0:
                sg = 1 if n > 0 else -1
                an = n if n > 0 else -n
                base = p2 * B * n * n
                kp = 1 - an
                while kp < an:
                    m = p2 * kp + 1
                    E = base + qm * m * m
                    X = E + 2 * D * m
                    r = X % M
                    if r < 0:
                        r += M
                    w[r] += sg * X
                    c[r] += sg
                    X = E - 2 * D * m
                    r = X % M
                    if r < 0:
                        r += M
                    w[r] -= sg * X
                    c[r] -= sg
                    kp += 2
            k += 2
    return weights, counts


def divexact_dense(const int64_t[::1] f, const int64_t[::1] g):
    """Quotient of dense coefficient arrays (lowest degree first).

    Raises ArithmeticError on a nonzero remainder, OverflowError when an
    intermediate leaves int64.
    """
    cdef Py_ssize_t lf = f.shape[0], lg = g.shape[0]
    cdef Py_ssize_t i, j
    if lg == 0 or g[lg - 1] == 0:
        raise ZeroDivisionError("divisor must have a nonzero leading coefficient")
    if lf < lg:
        for i in range(lf):
            if f[i] != 0:
                raise ArithmeticError("nonzero remainder")
        return np.zeros(0, dtype=np.int64)
    cdef Py_ssize_t lq = lf - lg + 1
    rem = np.array(f, dtype=np.int64, copy=True)
    quo = np.zeros(lq, dtype=np.int64)
    cdef int64_t[::1] r = rem
    cdef int64_t[::1] q = quo
    cdef long long lead = g[lg - 1], t, qi, prod, res
    cdef int status = 0
    with nogil:
        i = lq - 1
        while i >= 0:
            t = r[i + lg - 1]
            if t != 0:
                if t % lead != 0:
                    status = 1
                    break
                qi = t // lead
                q[i] = qi
                for j in range(lg):
                    if g[j] != 0:
                        if cj_mul_ovf(qi, g[j], &prod) or cj_sub_ovf(r[i + j], prod, &res):
                            status = 2
                            break
                        r[i + j] = res
                if status:
                    break
            i -= 1
        if status == 0:
            for i in range(lg - 1):
                if r[i] != 0:
                    status = 1
                    break
    if status == 1:
        raise ArithmeticError("nonzero remainder")
    if status == 2:
        raise OverflowError("int64 overflow in exact division")
    return quo
