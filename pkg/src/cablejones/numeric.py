"""High-precision complex values and exact sums over roots of unity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

DEFAULT_PREC = 128


@dataclass(frozen=True)
class ComplexHP:
    """A complex number held as two mpmath floats plus an absolute error bound."""

    re: mpmath.mpf
    im: mpmath.mpf
    err_bound: float = 0.0

    @classmethod
    def from_mpc(cls, z, err_bound=0.0):
        z = mpmath.mpc(z)
        return cls(z.real, z.imag, float(err_bound))

    def to_mpc(self):
        return mpmath.mpc(self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return mpmath.hypot(self.re, self.im)

    def close_to(self, other, tol=0.0):
        """True when the two values agree within both error bounds plus ``tol``."""
        other_err = getattr(other, "err_bound", 0.0)
        other = other.to_mpc() if isinstance(other, ComplexHP) else mpmath.mpc(other)
        return abs(self.to_mpc() - other) <= self.err_bound + other_err + tol

    def __repr__(self):
        return f"ComplexHP({mpmath.nstr(self.to_mpc(), 20)}, err<={self.err_bound:.3g})"


def fixed_root_table(M, indices, bits):
    """Rounded fixed-point values ``round(2**bits * exp(2*pi*i*j/M))`` for j in ``indices``.

    Each component is within 1 unit of the true scaled value.
    """
    re, im = [], []
    with mpmath.workprec(bits + 32):
        scale = mpmath.ldexp(1, bits)
        for j in indices:
            x = mpmath.mpf(2 * int(j)) / M
            re.append(int(mpmath.nint(scale * mpmath.cospi(x))))
            im.append(int(mpmath.nint(scale * mpmath.sinpi(x))))
    return np.array(re, dtype=object), np.array(im, dtype=object)


def root_of_unity_sum(coeffs, M, prec=DEFAULT_PREC):
    """Evaluate ``sum_r coeffs[r] * exp(2*pi*i*r/M)`` for integer coefficients.

    ``coeffs`` is a length-``M`` sequence of integers (int64 or Python int).
    The sum is reduced exactly over the integers first (``zeta**(M/2) = -1``
    when ``M`` is even), then evaluated with a baby-step/giant-step table of
    fixed-point roots, so the only rounding is in the table entries. Returns
    a :class:`ComplexHP` whose ``err_bound`` bounds that rounding.
    """
    c = np.asarray(coeffs)
    if c.dtype != object:
        c = c.astype(object)
    if len(c) != M:
        raise ValueError("need exactly M residue coefficients")
    if M % 2 == 0:
        half = M // 2
        c = c[:half] - c[half:]
    L = len(c)
    norm1 = sum(abs(int(x)) for x in c)
    if norm1 == 0:
        return ComplexHP(mpmath.mpf(0), mpmath.mpf(0), 0.0)
    bits = prec + 16
    B = max(1, math.isqrt(L - 1) + 1)
    A = -(-L // B)
    padded = np.zeros(A * B, dtype=object)
    padded[:L] = c
    grid = padded.reshape(A, B)
    baby_re, baby_im = fixed_root_table(M, range(B), bits)
    giant_re, giant_im = fixed_root_table(M, range(0, A * B, B), bits)
    inner_re = grid.dot(baby_re)
    inner_im = grid.dot(baby_im)
    tot_re = int((giant_re * inner_re - giant_im * inner_im).sum())
    tot_im = int((giant_re * inner_im + giant_im * inner_re).sum())
    with mpmath.workprec(prec):
        re = mpmath.ldexp(mpmath.mpf(tot_re), -2 * bits)
        im = mpmath.ldexp(mpmath.mpf(tot_im), -2 * bits)
    # each table entry is off by < sqrt(2) units in 2**-bits; two factors per product
    err = float(mpmath.ldexp(mpmath.mpf(4 * norm1), -bits)) + float(
        mpmath.ldexp(abs(mpmath.mpc(re, im)) + 1, -prec + 1)
    )
    return ComplexHP(re, im, err)


def root_sum_converged(coeffs, M, prec=DEFAULT_PREC, rel_tol=1e-12, max_prec=4096):
    """:func:`root_of_unity_sum` with precision doubled until two runs agree."""
    prev = root_of_unity_sum(coeffs, M, prec)
    while True:
        nxt = root_of_unity_sum(coeffs, M, 2 * prec)
        diff = abs(nxt.to_mpc() - prev.to_mpc())
        if diff <= rel_tol * abs(nxt.to_mpc()) + nxt.err_bound + prev.err_bound or 2 * prec >= max_prec:
            return nxt, 2 * prec
        prec *= 2
        prev = nxt


def mpf_from_fraction(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def fsum_complex(values):
    """Correctly rounded sum of Python complex numbers (``math.fsum`` per part)."""
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))
