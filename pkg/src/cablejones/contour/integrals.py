"""The double sum S_N(h), its double-integral representation, and dS_N/dh at the root of unity."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..errors import AngleOutOfBand, NotApplicable
from ..jones import IteratedCableParams, cable_jones
from ..laurent import EvalPoint, evaluate, lp_divexact, quantum_int
from .quadrature import ContourSpec, GaussianLine, GaussianPlane, QuadResult
from .saddle import poly_factor, psi1, psi2

# point budget of the 2-D rule when the angle is chosen automatically
WORK_BUDGET = 4.0e6
ANGLE_GRID = 48


def _band_ok(phi: float, arg: float) -> bool:
    return abs(2 * phi - arg) < math.pi / 2


def gaussian_line_integral(h_prime: complex, w: complex, contour: ContourSpec) -> complex:
    """``(pi h')^(-1/2) int exp(-z^2/h' - 2 z w) dz`` along the contour; equals ``exp(h' w^2)``."""
    h_prime = complex(h_prime)
    if h_prime == 0:
        raise AngleOutOfBand("h' must be nonzero")
    if not _band_ok(contour.phi, cmath.phase(h_prime)):
        raise AngleOutOfBand(
            f"phi={contour.phi:.6g} outside the band for arg(h')={cmath.phase(h_prime):.6g}"
        )
    line = GaussianLine(-1 / h_prime, -2 * complex(w), 0j, contour)
    res = line.integrate(lambda z: np.ones_like(z))
    return res.value / cmath.sqrt(math.pi * h_prime)


def s_sum(h: complex, params: IteratedCableParams, N: int) -> complex:
    """``sum_k sum_k' exp(beta n^2 h/2) exp(gamma m^2 h/2) sign(n) sinh(m h)``, ``n = p1 k + 1``, ``m = p2 k' + 1``."""
    h = complex(h)
    beta, gamma = float(params.beta), float(params.gamma)
    total = 0j
    for k in range(-N, N + 1, 2):
        n = params.p1 * k + 1
        if n == 0:
            continue
        kp = np.arange(1 - abs(n), abs(n), 2)
        m = params.p2 * kp + 1
        inner = np.sum(np.exp(gamma * m * m * h / 2) * np.sinh(m * h))
        total += math.copysign(1, n) * cmath.exp(beta * n * n * h / 2) * inner
    return complex(total)


def s_sum_from_polynomial(h: complex, params: IteratedCableParams, N: int, precision: int = 128) -> complex:
    """``(-1)^(alpha N) exp((beta+gamma) h/2) sinh((N+1) h) (J_N/[N+1])(exp(h/2))``."""
    q = lp_divexact(cable_jones(params, N), quantum_int(N + 1))
    val = complex(evaluate(q, EvalPoint.general(h, precision)))
    s = float(params.beta + params.gamma)
    sign = -1 if (params.alpha * N) % 2 else 1
    return sign * cmath.exp(s * h / 2) * cmath.sinh((N + 1) * h) * val


def _require_applicable(params):
    if not params.vc_applicable:
        raise NotApplicable("hypothesis beta*gamma>0 not satisfied")


def exponent_form(h: complex, params: IteratedCableParams, N: int):
    """Coefficients ``(a11, a12, a22, b1, b2)`` of the exponent ``-2z2^2/(p2^2 gamma h) - 2(z1-z2)^2/(beta h) + 2 p1 (N+1) z1``.

    ``a12`` is half the cross coefficient.
    """
    beta = float(params.beta)
    k2 = params.p2 * params.q2
    a = 2 / (beta * h)
    return -a, a, -2 / (k2 * h) - a, 2 * params.p1 * (N + 1), 0j


def prefactor(h: complex, params: IteratedCableParams) -> complex:
    """``1/(sqrt(pi beta h/2) sqrt(pi gamma h/2)) (1/p2) exp(-h/(2 gamma))``, one principal root per factor."""
    beta, gamma = float(params.beta), float(params.gamma)
    root = cmath.sqrt(math.pi * beta * h / 2) * cmath.sqrt(math.pi * gamma * h / 2)
    return cmath.exp(-h / (2 * gamma)) / (root * params.p2)


def angle_band(h: complex, params: IteratedCableParams) -> tuple:
    """Open interval of admissible common angles for both Gaussian factors."""
    arg = cmath.phase(complex(h) * (1 if params.beta > 0 else -1))
    return (arg - math.pi / 2) / 2, (arg + math.pi / 2) / 2


def _genuine_poles(params, reach: float):
    """Genuine poles of psi1 and psi2 with ``|Im| <= reach``."""
    p1, p2, q2 = params.p1, params.p2, abs(params.q2)
    k1 = int(reach * 2 * p1 / math.pi) + 1
    poles1 = [m * math.pi * 1j / (2 * p1) for m in range(-k1, k1 + 1) if m % p1]
    k2 = int(reach * 2 / math.pi) + 1
    poles2 = [n * math.pi * 0.5j for n in range(-k2, k2 + 1) if n % p2 and n % q2]
    return poles1, poles2


def _growth(params, phi: float):
    c = abs(math.cos(phi))
    g2 = max(0.0, 2 * (1 / abs(params.q2) + 1 / params.p2 - 1))
    return (0.0, g2 * c)


def _gfreq(params, phi: float):
    s = abs(math.sin(phi))
    return (2 * (params.p1 - 1) * s, 2 * abs(1 / abs(params.q2) + 1 / params.p2 - 1) * s + 2 * s)


def _plane(coeffs, e0, c1: ContourSpec, c2: ContourSpec) -> GaussianPlane:
    a11, a12, a22, b1, b2 = coeffs
    return GaussianPlane(a11, a12, a22, b1, b2, e0, c1, c2)


def _plane_poles(plane: GaussianPlane, params):
    tstar, W1, W2, slope = plane.layout()
    reach = (
        max(abs(plane.contour1.center), abs(plane.contour2.center))
        + abs(tstar).max()
        + W2 * (1 + abs(slope))
        + W1
        + 2
    )
    return _genuine_poles(params, reach)


def choose_angle(coeffs, params, e0=0j, center=(0j, 0j), band=None, budget=WORK_BUDGET):
    """Common angle for both lines with the smallest peak exponent whose estimated work fits ``budget``.

    The peak exponent controls cancellation in double precision, the work
    grows as the decay along the lines weakens near the band edges.
    """
    lo, hi = band
    best = None
    fallback = None
    for j in range(1, ANGLE_GRID):
        phi = lo + (hi - lo) * j / ANGLE_GRID
        c1 = ContourSpec(phi, center[0])
        c2 = ContourSpec(phi, center[1])
        plane = _plane(coeffs, e0, c1, c2)
        try:
            _, P = plane.peak()
            poles1, poles2 = _plane_poles(plane, params)
            work = plane.estimate_work(poles1=poles1, poles2=poles2, gfreq=_gfreq(params, phi))
        except (AngleOutOfBand, ArithmeticError, ValueError):
            continue
        if fallback is None or work < fallback[1]:
            fallback = (phi, work, P)
        if work <= budget and (best is None or P < best[2]):
            best = (phi, work, P)
    chosen = best or fallback
    if chosen is None:
        raise AngleOutOfBand("no admissible angle found")
    return chosen[0]


@dataclass
class IntegralResult:
    value: complex
    quad: QuadResult
    contours: tuple
    prefactor: complex

    @property
    def error(self) -> float:
        return abs(self.prefactor) * self.quad.error


def _integrate_plane(plane: GaussianPlane, params, joint=None, rel_tol=1e-10):
    poles1, poles2 = _plane_poles(plane, params)
    phi = plane.contour2.phi
    return plane.integrate(
        lambda z: psi1(z, params.p1),
        lambda z: psi2(z, params.p2, params.q2),
        joint=joint,
        poles1=poles1,
        poles2=poles2,
        growth=_growth(params, phi),
        gfreq=_gfreq(params, phi),
        rel_tol=rel_tol,
    )


def _contours(coeffs, params, band, contours):
    if contours is None:
        phi = choose_angle(coeffs, params, band=band)
        return ContourSpec(phi), ContourSpec(phi)
    c1, c2 = contours
    for c in (c1, c2):
        if not band[0] < c.phi < band[1]:
            raise AngleOutOfBand(f"phi={c.phi:.6g} outside ({band[0]:.6g}, {band[1]:.6g})")
    return c1, c2


def s_integral(h: complex, params: IteratedCableParams, N: int, contours=None, detail=False):
    """S_N(h) from its double-integral representation.

    ``contours`` is a pair of lines through the origin; when omitted a common
    angle is chosen inside the admissible band.
    """
    _require_applicable(params)
    h = complex(h)
    coeffs = exponent_form(h, params, N)
    c1, c2 = _contours(coeffs, params, angle_band(h, params), contours)
    quad = _integrate_plane(_plane(coeffs, 0j, c1, c2), params)
    pref = prefactor(h, params)
    res = IntegralResult(pref * quad.value, quad, (c1, c2), pref)
    return res if detail else res.value


def root_point(N: int) -> complex:
    return math.pi * 1j / (N + 1)


def ds_dh_prefactor(params: IteratedCableParams, N: int) -> complex:
    h0 = root_point(N)
    return prefactor(h0, params) / (h0 * h0)


def i_n_direct(params: IteratedCableParams, N: int, contours=None, detail=False):
    """``I_N = int int psi1 psi2 F_N`` over lines through the origin."""
    _require_applicable(params)
    h0 = root_point(N)
    coeffs = exponent_form(h0, params, N)
    c1, c2 = _contours(coeffs, params, angle_band(h0, params), contours)
    joint = lambda z1, z2: poly_factor(z1, z2, params)
    quad = _integrate_plane(_plane(coeffs, 0j, c1, c2), params, joint=joint)
    res = IntegralResult(quad.value, quad, (c1, c2), 1.0)
    return res if detail else res.value


def ds_dh_integral(params: IteratedCableParams, N: int, contours=None, detail=False):
    """``dS_N/dh`` at ``h = pi i/(N+1)`` through the double integral of ``psi1 psi2 F_N``."""
    res = i_n_direct(params, N, contours, detail=True)
    pref = ds_dh_prefactor(params, N)
    out = IntegralResult(pref * res.quad.value, res.quad, res.contours, pref)
    return out if detail else out.value


def ds_dh_finite_difference(params: IteratedCableParams, N: int, step: float = 1e-4) -> complex:
    """Fourth-order central difference of :func:`s_sum` at ``h = pi i/(N+1)``."""
    h0 = root_point(N)
    f = lambda d: s_sum(h0 + d, params, N)
    return (-f(2 * step) + 8 * f(step) - 8 * f(-step) + f(-2 * step)) / (12 * step)
