"""Hot loops with a compiled backend and a numpy fallback.

The compiled extension is used when it was built; set ``CABLEJONES_PURE=1``
to force the fallback. Both backends are exposed for benchmarking.
"""

import os

from . import _pykernels as py

try:
    if os.environ.get("CABLEJONES_PURE"):
        raise ImportError("fallback forced by CABLEJONES_PURE")
    from . import _ckernels as compiled
except ImportError:
    compiled = None

_impl = compiled if compiled is not None else py
BACKEND = "cython" if compiled is not None else "numpy"

_INT64_SAFE = 2 ** 62


def kappa_residue_bound(p1, q1, p2, q2, N):
    """Upper bound on any accumulated |weight| in :func:`kappa_residues`."""
    B = q1 - p1 * p2 * q2
    nmax = p1 * N + 1
    mmax = p2 * (nmax - 1) + 1
    xmax = abs(p2 * B) * nmax ** 2 + abs(p1 * q2) * mmax ** 2 + 2 * p1 * p2 * mmax
    return 2 * xmax * (N + 1) * nmax


def kappa_residues(p1, q1, p2, q2, N):
    """Integer residue weights of dS_N/dh at h = pi*i/(N+1).

    Returns ``(weights, counts)``, int64 arrays of length ``M = 4*p1*p2*(N+1)``.
    Every term of the double sum contributes ``+-X`` to ``weights[X mod M]``
    and ``+-1`` to ``counts[X mod M]``. Falls back to Python integers when
    int64 could overflow.
    """
    if kappa_residue_bound(p1, q1, p2, q2, N) < _INT64_SAFE:
        return _impl.kappa_residues(p1, q1, p2, q2, N)
    return _kappa_residues_bigint(p1, q1, p2, q2, N)


def _kappa_residues_bigint(p1, q1, p2, q2, N):
    import numpy as np

    B = q1 - p1 * p2 * q2
    D = p1 * p2
    M = 4 * D * (N + 1)
    weights = np.zeros(M, dtype=object)
    counts = np.zeros(M, dtype=np.int64)
    for k in range(-N, N + 1, 2):
        n = p1 * k + 1
        if n == 0:
            continue
        sg = 1 if n > 0 else -1
        for kp in range(1 - abs(n), abs(n), 2):
            m = p2 * kp + 1
            E = p2 * B * n * n + p1 * q2 * m * m
            for X, s in ((E + 2 * D * m, sg), (E - 2 * D * m, -sg)):
                weights[X % M] += s * X
                counts[X % M] += s
    return weights, counts


def divexact_dense(f, g):
    """Exact quotient of dense int64 coefficient arrays; see backends."""
    return _impl.divexact_dense(f, g)
