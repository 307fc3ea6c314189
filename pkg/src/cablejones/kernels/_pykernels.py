"""numpy fallback for the compiled kernels (same signatures and results)."""

import numpy as np

_FLOAT_EXACT = 2 ** 53


def kappa_residues(p1, q1, p2, q2, N):
    B = q1 - p1 * p2 * q2
    D = p1 * p2
    M = 4 * D * (N + 1)
    weights = np.zeros(M, dtype=np.int64)
    counts = np.zeros(M, dtype=np.int64)
    nmax = p1 * N + 1
    mmax = p2 * (nmax - 1) + 1
    xmax = abs(p2 * B) * nmax * nmax + abs(p1 * q2) * mmax * mmax + 2 * D * mmax
    # bincount sums in float64; only exact while every partial sum stays below 2**53
    use_bincount = xmax * (N + 1) * nmax < _FLOAT_EXACT
    wf = np.zeros(M) if use_bincount else None
    for k in range(-N, N + 1, 2):
        n = p1 * k + 1
        if n == 0:
            continue
        sg = 1 if n > 0 else -1
        an = abs(n)
        m = p2 * np.arange(1 - an, an, 2, dtype=np.int64) + 1
        E = p2 * B * n * n + p1 * q2 * m * m
        xp = E + 2 * D * m
        xm = E - 2 * D * m
        rp = xp % M
        rm = xm % M
        if use_bincount:
            wf += np.bincount(rp, weights=sg * xp, minlength=M)
            wf -= np.bincount(rm, weights=sg * xm, minlength=M)
        else:
            np.add.at(weights, rp, sg * xp)
            np.add.at(weights, rm, -sg * xm)
        counts += sg * (np.bincount(rp, minlength=M) - np.bincount(rm, minlength=M))
    if use_bincount:
        weights = np.rint(wf).astype(np.int64)
    return weights, counts


def divexact_dense(f, g):
    f = np.asarray(f, dtype=np.int64)
    g = np.asarray(g, dtype=np.int64)
    lf, lg = len(f), len(g)
    if lg == 0 or g[-1] == 0:
        raise ZeroDivisionError("divisor must have a nonzero leading coefficient")
    if lf < lg:
        if np.any(f):
            raise ArithmeticError("nonzero remainder")
        return np.zeros(0, dtype=np.int64)
    lq = lf - lg + 1
    lead = int(g[-1])
    gmax = int(np.abs(g).max())
    limit = 2 ** 62
    r = f.copy()
    q = np.zeros(lq, dtype=np.int64)
    nz = np.nonzero(g)[0]
    gnz = g[nz]
    for i in range(lq - 1, -1, -1):
        t = int(r[i + lg - 1])
        if t == 0:
            continue
        if t % lead:
            raise ArithmeticError("nonzero remainder")
        qi = t // lead
        if abs(qi) * gmax >= limit:
            raise OverflowError("int64 overflow in exact division")
        q[i] = qi
        idx = i + nz
        seg = r[idx]
        if np.abs(seg).max() >= limit - abs(qi) * gmax:
            raise OverflowError("int64 overflow in exact division")
        r[idx] = seg - qi * gnz
    if np.any(r[: lg - 1]):
        raise ArithmeticError("nonzero remainder")
    return q
