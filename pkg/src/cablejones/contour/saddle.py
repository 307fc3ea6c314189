"""Phase function, sinh-ratio weights, their poles and residues, and saddle points."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import PoleHit
from ..jones import IteratedCableParams

# distance (in the argument of sinh) below which the local series branch is used
REMOVABLE_TAU = 1e-4
POLE_TAU = 1e-6


def sinhc(x):
    """``sinh(x)/x`` with the removable point at 0 handled by its Taylor series."""
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-3
    xs = x[small] ** 2
    out[small] = 1 + xs / 6 * (1 + xs / 20 * (1 + xs / 42))
    xb = x[~small]
    out[~small] = np.sinh(xb) / xb
    return out


def sinh_excess(x):
    """``(sinh(x) - x) / x**3``, stable near 0."""
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) < 0.1
    xs = x[small] ** 2
    out[small] = 1 / 6 + xs / 120 + xs ** 2 / 5040 + xs ** 3 / 362880
    xb = x[~small]
    out[~small] = (np.sinh(xb) - xb) / xb ** 3
    return out


def _nearest_zero(b, z):
    """Index ``k`` of the zero ``k*pi*i/b`` of ``sinh(b z)`` closest to ``z``, and ``b z - k pi i``."""
    bz = b * z
    k = np.rint(bz.imag / math.pi).astype(np.int64)
    return k, bz - 1j * math.pi * k


def sinh_ratio(a, b, z):
    """``sinh(a z) / sinh(b z)`` for real ``a``, ``b > 0``, overflow-free.

    Near a zero of the denominator where the numerator also vanishes the limit
    is taken through :func:`sinhc`. At a genuine pole the result is inf or nan.
    """
    z = np.asarray(z, dtype=complex)
    sgn = np.where(z.real >= 0, 1.0, -1.0)
    u = z * sgn
    # sinh(a u)/sinh(b u) = e^{(|a|-b)u} (1 - e^{-2|a|u}) / (1 - e^{-2bu}) * sign(a)
    aa = abs(a)
    with np.errstate(all="ignore"):
        out = np.exp((aa - b) * u) * (-np.expm1(-2 * aa * u)) / (-np.expm1(-2 * b * u))
    out = out * math.copysign(1.0, a)
    k, delta = _nearest_zero(b, z)
    near = np.abs(delta) < REMOVABLE_TAU
    if np.any(near):
        kn = k[near]
        # numerator vanishes too iff a*k/b is an integer
        j_exact = (a * kn) / b
        j = np.rint(j_exact).astype(np.int64)
        removable = np.abs(j_exact - j) < 1e-9
        d = delta[near] / b
        limit = (
            np.where((j + kn) % 2 == 0, 1.0, -1.0)
            * (a / b)
            * sinhc(a * d)
            / sinhc(b * d)
        )
        vals = out[near]
        vals[removable] = limit[removable]
        out[near] = vals
    return out


def _is_scalar(z):
    return np.ndim(z) == 0


def psi1(z, p1: int, strict: bool = False):
    """``sinh(2z) / sinh(2 p1 z)``."""
    scalar = _is_scalar(z)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if strict:
        _check_pole(z, [(2 * p1, lambda k: k % p1 != 0)])
    out = np.ones_like(z) if p1 == 1 else sinh_ratio(2.0, 2.0 * p1, z)
    return out[0] if scalar else out


def psi2(z, p2: int, q2: int, strict: bool = False):
    """``sinh(2z/q2) sinh(2z/p2) / sinh(2z)``."""
    scalar = _is_scalar(z)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if strict:
        _check_pole(z, [(2.0, lambda k: k % p2 != 0 and k % q2 != 0)])
    k, _ = _nearest_zero(2.0, z)
    # pair the denominator with the numerator factor that vanishes at the same point
    use_q = (k % abs(q2)) == 0
    out = np.where(
        use_q,
        sinh_ratio(2.0 / q2, 2.0, z) * np.sinh(2 * z / p2),
        sinh_ratio(2.0 / p2, 2.0, z) * np.sinh(2 * z / q2),
    )
    return out[0] if scalar else out


def _check_pole(z, rules):
    for b, genuine in rules:
        k, delta = _nearest_zero(b, z)
        for kk, dd in zip(np.atleast_1d(k), np.atleast_1d(delta)):
            if abs(dd) / b < POLE_TAU and genuine(int(kk)):
                raise PoleHit(f"simple pole at {int(kk)}*pi*i/{b:g}")


def psi1_residue(xi, p1: int) -> complex:
    return cmath.sinh(2 * xi) / (2 * p1 * cmath.cosh(2 * p1 * xi))


def psi2_residue(eta, p2: int, q2: int) -> complex:
    return cmath.sinh(2 * eta / q2) * cmath.sinh(2 * eta / p2) / (2 * cmath.cosh(2 * eta))


def psi2_regular(z, zeta, p2: int, q2: int):
    """``psi2(z) - r/(z - zeta)`` where ``zeta = n pi i/2`` is a simple pole with residue ``r``.

    Uses ``N(z) - N(zeta)`` written as products of sinh (no cancellation) and
    ``cosh(2 zeta) = +-1``.
    """
    z = np.asarray(z, dtype=complex)
    u = z - zeta
    sigma = cmath.cosh(2 * zeta).real
    a, b = 2.0 / q2, 2.0 / p2
    Nz = cmath.sinh(a * zeta) * cmath.sinh(b * zeta)
    # N(z) = (cosh((a+b)z) - cosh((a-b)z))/2;  cosh(c(zeta+u)) - cosh(c zeta) = 2 sinh(c(2zeta+u)/2) sinh(cu/2)
    diff = 0j
    for c, sgn in ((a + b, 1.0), (a - b, -1.0)):
        diff = diff + sgn * np.sinh(c * (2 * zeta + u) / 2) * (c / 4) * sinhc(c * u / 2)
    # diff == (N(z) - N(zeta)) / (2u) * 2 ... scaled so that diff/sinhc(2u) == (N(z)-N(zeta))/sinh(2u)
    term1 = diff / sinhc(2 * u)
    # N(zeta) (1/sinh(2u) - 1/(2u)) = -N(zeta) * (2u)^2 * sinh_excess(2u) / sinh(2u)
    term2 = -Nz * (2 * u) * sinh_excess(2 * u) / sinhc(2 * u)
    return (term1 + term2) / sigma


def psi2_finite_part(zeta, p2: int, q2: int) -> complex:
    return complex(psi2_regular(np.array([zeta]), zeta, p2, q2)[0])


def theta(z1, z2, params: IteratedCableParams):
    """Phase ``-2 z2^2/(p2^2 gamma pi i) - 2 (z1-z2)^2/(beta pi i) + 2 p1 z1``."""
    beta = float(params.beta)
    k2 = params.p2 * params.q2  # p2^2 gamma
    pii = math.pi * 1j
    return -2 * z2 ** 2 / (k2 * pii) - 2 * (z1 - z2) ** 2 / (beta * pii) + 2 * params.p1 * z1


def theta_over_pi_i(a1: Fraction, a2: Fraction, params: IteratedCableParams) -> Fraction:
    """``theta(a1 pi i, a2 pi i) / (pi i)`` in exact arithmetic, for rational ``a1``, ``a2``."""
    k2 = params.p2 * params.q2
    return -2 * a2 * a2 / k2 - 2 * (a1 - a2) ** 2 / params.beta + 2 * params.p1 * a1


def poly_factor(z1, z2, params: IteratedCableParams):
    """``2 z2^2/(p2^2 gamma) + 2 (z1-z2)^2/beta``."""
    return 2 * z2 ** 2 / (params.p2 * params.q2) + 2 * (z1 - z2) ** 2 / float(params.beta)


def F_N(z1, z2, N: int, params: IteratedCableParams):
    return poly_factor(z1, z2, params) * np.exp((N + 1) * theta(z1, z2, params))


def _open_range(end: int):
    return range(1, end) if end > 0 else range(end + 1, 0)


@dataclass(frozen=True)
class SaddleData:
    params: IteratedCableParams

    @property
    def w(self) -> tuple:
        p = self.params
        return (p.q1 * math.pi * 0.5j, p.p1 * p.p2 * p.q2 * math.pi * 0.5j)

    @property
    def w_exact(self) -> tuple:
        """``(w1, w2) / (pi i)`` as fractions."""
        p = self.params
        return Fraction(p.q1, 2), Fraction(p.p1 * p.p2 * p.q2, 2)

    def xi_indices(self, genuine_only: bool = True) -> list:
        p1 = self.params.p1
        return [m for m in _open_range(p1 * self.params.q1) if not genuine_only or m % p1]

    def eta_indices(self, genuine_only: bool = True) -> list:
        p = self.params
        return [
            n
            for n in _open_range(p.p1 * p.p2 * p.q2)
            if not genuine_only or (n % p.p2 and n % abs(p.q2))
        ]

    def xi(self, m: int) -> complex:
        return m * math.pi * 1j / (2 * self.params.p1)

    def eta(self, n: int) -> complex:
        return n * math.pi * 0.5j

    @property
    def xi_poles(self) -> list:
        return [self.xi(m) for m in self.xi_indices()]

    @property
    def eta_poles(self) -> list:
        return [self.eta(n) for n in self.eta_indices()]

    def zeta_exact(self, n: int) -> Fraction:
        """Critical point of ``theta(., eta_n)``, divided by ``pi i``."""
        return (self.params.p1 * self.params.beta + n) / 2

    def zeta(self, n: int) -> complex:
        return float(self.zeta_exact(n)) * math.pi * 1j

    def zeta_prime_exact(self, m: int) -> Fraction:
        """Critical point of ``theta(xi_m, .)``, divided by ``pi i``."""
        p = self.params
        return Fraction(p.p2 * p.q2 * m, 2 * p.q1)

    def zeta_prime(self, m: int) -> complex:
        return float(self.zeta_prime_exact(m)) * math.pi * 1j

    def zeta_prime_pole(self, m: int):
        """``n`` such that ``zeta'(m) = n pi i / 2`` is a genuine pole of psi2, else ``None``."""
        z2 = 2 * self.zeta_prime_exact(m)
        if z2.denominator != 1:
            return None
        n = z2.numerator
        p = self.params
        return n if (n % p.p2 and n % abs(p.q2)) else None

    def exact_phases(self) -> dict:
        """All phases ``theta/(pi i)`` at pole pairs, saddle pairs and the main critical point."""
        p = self.params
        out = {"xi_eta": [], "zeta_eta": [], "xi_zeta_prime": []}
        for m in self.xi_indices():
            for n in self.eta_indices():
                out["xi_eta"].append(theta_over_pi_i(Fraction(m, 2 * p.p1), Fraction(n, 2), p))
        for n in self.eta_indices():
            out["zeta_eta"].append(theta_over_pi_i(self.zeta_exact(n), Fraction(n, 2), p))
        for m in self.xi_indices():
            out["xi_zeta_prime"].append(
                theta_over_pi_i(Fraction(m, 2 * p.p1), self.zeta_prime_exact(m), p)
            )
        w1, w2 = self.w_exact
        out["w"] = [theta_over_pi_i(w1, w2, p)]
        return out

    def period_candidate(self, include_extended: bool = True) -> int:
        """``2 * lcm`` of the denominators of the exact phases.

        ``exp((N+1) theta)`` at every listed point is then periodic in ``N``
        with this period. With ``include_extended=False`` only the pole-pair
        and ``(zeta, eta)`` phases are used.
        """
        phases = self.exact_phases()
        keys = ["xi_eta", "zeta_eta"] + (["xi_zeta_prime", "w"] if include_extended else [])
        t = 1
        for key in keys:
            for f in phases[key]:
                t = math.lcm(t, f.denominator)
        return 2 * t
