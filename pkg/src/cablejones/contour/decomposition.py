"""Splitting the double integral I_N into a saddle-centred double integral, two residue-weighted
single-integral sums and a double residue sum, plus leading-order estimates of each part."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ContourThroughPole
from ..jones import IteratedCableParams
from .integrals import (
    _genuine_poles,
    _growth,
    _gfreq,
    _require_applicable,
    exponent_form,
    i_n_direct,
    root_point,
)
from .lemmas import gauss_expand_2d
from .quadrature import POLE_TAU, ContourSpec, GaussianLine, GaussianPlane
from .saddle import (
    SaddleData,
    poly_factor,
    psi1,
    psi1_residue,
    psi2,
    psi2_regular,
    psi2_residue,
    theta,
)

TWO_PI_I = 2j * math.pi


def mid_band_angle(params: IteratedCableParams) -> float:
    """Steepest-descent angle at ``h = pi i/(N+1)``: ``pi/4`` for ``beta > 0``, ``-pi/4`` otherwise."""
    return math.pi / 4 if params.beta > 0 else -math.pi / 4


def poles_between(poles, phi: float, start: complex, end: complex):
    """Poles strictly between the parallel lines through ``start`` and ``end``, with orientation signs.

    The sign is +1 for a pole left of the line through ``start``: moving the
    contour from ``start`` to ``end`` then picks up ``+2 pi i Res``.
    """
    a, b = ContourSpec(phi, start), ContourSpec(phi, end)
    out = []
    for p in poles:
        sa = a.side_of(p)
        if sa == 0:
            raise ContourThroughPole(f"pole {p} lies on the contour through {start}")
        sb = b.side_of(p)
        if sb != sa and sb != 0:
            out.append((p, sa))
    return out


def _hits_pole(poles, spec: ContourSpec):
    return [p for p in poles if spec.distance(p) < POLE_TAU]


@dataclass
class LineIntegral:
    """``int g(z) exp(a2 z^2 + a1 z + a0) dz`` along a line, with the pole bookkeeping of its shifts."""

    value: complex
    residue_part: complex
    line_part: complex
    pole_part: complex = 0j
    error: float = 0.0
    nodes: int = 0


def _j_integral(sd: SaddleData, m: int, N: int, phi: float, start: complex, leading=False) -> LineIntegral:
    """``int psi2(z) F_N(xi_m, z) dz`` on the line through ``start``, evaluated on the line through the local saddle."""
    p = sd.params
    xi = sd.xi(m)
    beta = float(p.beta)
    k2 = p.p2 * p.q2
    pii = math.pi * 1j
    a2 = (N + 1) * (-2 / (k2 * pii) - 2 / (beta * pii))
    a1 = (N + 1) * (4 * xi / (beta * pii))
    a0 = (N + 1) * (-2 * xi * xi / (beta * pii) + 2 * p.p1 * xi)
    centre = sd.zeta_prime(m)
    spec = ContourSpec(phi, centre)
    reach = max(abs(start), abs(centre)) + 30
    _, poles2 = _genuine_poles(p, reach)
    collide = sd.zeta_prime_pole(m)
    others = [q for q in poles2 if abs(q - centre) > POLE_TAU] if collide is not None else poles2
    hits = _hits_pole(others, spec)
    if hits:
        raise ContourThroughPole(f"saddle line passes through {hits[0]}")
    Gq = lambda z: poly_factor(xi, z, p) * np.exp(a2 * z * z + a1 * z + a0)
    residues = sum(
        s * TWO_PI_I * psi2_residue(q, p.p2, p.q2) * complex(Gq(q))
        for q, s in poles_between(others, phi, start, centre)
    )
    line = GaussianLine(a2, a1, a0, spec)
    growth = _growth(p, phi)[1]
    gfreq = _gfreq(p, phi)[1]
    pole_part = 0j
    if collide is None:
        g = lambda z: psi2(z, p.p2, p.q2) * poly_factor(xi, z, p)
    else:
        r = psi2_residue(centre, p.p2, p.q2)
        qa = 2 / k2 + 2 / beta
        qb = -4 * xi / beta
        g = lambda z: psi2_regular(z, centre, p.p2, p.q2) * poly_factor(xi, z, p) + r * (qa * (z + centre) + qb)
        # the pole sits on the far side of the line from ``start``: half residue by the Cauchy half-line identity
        side = -spec.side_of(start)
        pole_part = r * complex(Gq(centre)) * side * math.pi * 1j
    if leading:
        lv = _saddle_term(line, g, centre, N)
        return LineIntegral(residues + lv + pole_part, residues, lv, pole_part)
    res = line.integrate(g, poles=others, growth=growth, gfreq=gfreq)
    value = residues + res.value + pole_part
    return LineIntegral(value, residues, res.value, pole_part, res.error, res.nodes[0])


def _k_integral(sd: SaddleData, n: int, N: int, phi: float, start: complex, leading=False) -> LineIntegral:
    """``int psi1(z) F_N(z, eta_n) dz`` on the line through ``start``, evaluated on the line through the local saddle."""
    p = sd.params
    eta = sd.eta(n)
    beta = float(p.beta)
    k2 = p.p2 * p.q2
    pii = math.pi * 1j
    a2 = (N + 1) * (-2 / (beta * pii))
    a1 = (N + 1) * (4 * eta / (beta * pii) + 2 * p.p1)
    a0 = (N + 1) * (-2 * eta * eta / (k2 * pii) - 2 * eta * eta / (beta * pii))
    centre = sd.zeta(n)
    spec = ContourSpec(phi, centre)
    reach = max(abs(start), abs(centre)) + 30
    poles1, _ = _genuine_poles(p, reach)
    hits = _hits_pole(poles1, spec)
    if hits:
        raise ContourThroughPole(f"saddle line passes through {hits[0]}")
    Gq = lambda z: poly_factor(z, eta, p) * np.exp(a2 * z * z + a1 * z + a0)
    residues = sum(
        s * TWO_PI_I * psi1_residue(q, p.p1) * complex(Gq(q))
        for q, s in poles_between(poles1, phi, start, centre)
    )
    line = GaussianLine(a2, a1, a0, spec)
    g = lambda z: psi1(z, p.p1) * poly_factor(z, eta, p)
    if leading:
        lv = _saddle_term(line, g, centre, N)
        return LineIntegral(residues + lv, residues, lv)
    res = line.integrate(g, poles=poles1, growth=_growth(p, phi)[0], gfreq=_gfreq(p, phi)[0])
    return LineIntegral(residues + res.value, residues, res.value, 0j, res.error, res.nodes[0])


def _saddle_term(line: GaussianLine, g, centre: complex, N: int) -> complex:
    """Leading term ``g(c) exp(E(c)) e^(i phi) sqrt(pi/alpha)`` of a line integral through its saddle ``c``."""
    e = line.contour.direction
    alpha = -line.a2 * e * e
    value = complex(np.atleast_1d(g(np.array([centre])))[0])
    expo = line.a2 * centre * centre + line.a1 * centre + line.a0
    return value * cmath.exp(expo) * e * cmath.sqrt(math.pi / alpha)


@dataclass
class Decomposition:
    double_integral: complex
    sum_over_n: complex
    sum_over_m: complex
    double_sum: complex
    direct: complex | None = None
    direct_error: float = float("nan")
    phi: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def total(self) -> complex:
        return self.double_integral + self.sum_over_n + self.sum_over_m + self.double_sum

    @property
    def rel_error(self) -> float:
        if self.direct is None:
            return float("nan")
        return abs(self.total - self.direct) / abs(self.direct)

    def as_tuple(self):
        return (self.double_integral, self.sum_over_n, self.sum_over_m, self.double_sum)

    def to_json(self) -> dict:
        c = lambda z: None if z is None else [z.real, z.imag]
        return {
            "double_integral": c(self.double_integral),
            "sum_over_n": c(self.sum_over_n),
            "sum_over_m": c(self.sum_over_m),
            "double_sum": c(self.double_sum),
            "total": c(self.total),
            "direct": c(self.direct),
            "rel_error": self.rel_error,
            "phi": self.phi,
        }


def saddle_double_integral(params: IteratedCableParams, N: int, phi: float | None = None):
    """The double integral of ``psi1 psi2 F_N`` over the lines through the critical point ``(w1, w2)``."""
    sd = SaddleData(params)
    phi = mid_band_angle(params) if phi is None else phi
    w1, w2 = sd.w
    coeffs = exponent_form(root_point(N), params, N)
    a11, a12, a22, b1, b2 = coeffs
    plane = GaussianPlane(a11, a12, a22, b1, b2, 0j, ContourSpec(phi, w1), ContourSpec(phi, w2))
    tstar, W1, W2, slope = plane.layout()
    reach = max(abs(w1), abs(w2)) + abs(tstar).max() + W2 * (1 + abs(slope)) + W1 + 2
    poles1, poles2 = _genuine_poles(params, reach)
    return plane.integrate(
        lambda z: psi1(z, params.p1),
        lambda z: psi2(z, params.p2, params.q2),
        joint=lambda z1, z2: poly_factor(z1, z2, params),
        poles1=poles1,
        poles2=poles2,
        growth=_growth(params, phi),
        gfreq=_gfreq(params, phi),
    )


def _single_sums(params, sd, N, phi, leading):
    w1, w2 = sd.w
    xi_between = poles_between(sd.xi_poles, phi, 0j, w1)
    eta_between = poles_between(sd.eta_poles, phi, 0j, w2)
    sum_m = 0j
    j_terms = {}
    for xi, s in xi_between:
        m = round(xi.imag * 2 * params.p1 / math.pi)
        j = _j_integral(sd, m, N, phi, w2, leading)
        j_terms[m] = j
        sum_m += s * TWO_PI_I * psi1_residue(xi, params.p1) * j.value
    sum_n = 0j
    k_terms = {}
    for eta, s in eta_between:
        n = round(eta.imag * 2 / math.pi)
        k = _k_integral(sd, n, N, phi, w1, leading)
        k_terms[n] = k
        sum_n += s * TWO_PI_I * psi2_residue(eta, params.p2, params.q2) * k.value
    dsum = 0j
    for xi, sm in xi_between:
        r1 = psi1_residue(xi, params.p1)
        for eta, sn in eta_between:
            r2 = psi2_residue(eta, params.p2, params.q2)
            f = poly_factor(xi, eta, params) * cmath.exp((N + 1) * theta(xi, eta, params))
            dsum += sm * sn * TWO_PI_I * TWO_PI_I * r1 * r2 * f
    return sum_n, sum_m, dsum, {"j": j_terms, "k": k_terms}


def residue_decomposition(params: IteratedCableParams, N: int, contours=None, direct=True) -> Decomposition:
    """The four parts of ``I_N`` after shifting both lines through the critical point.

    ``contours`` fixes the original lines (through the origin, common angle);
    the parts do not depend on it, but the pole signs are read off it. Each
    single integral is moved on to the line through its own saddle, with the
    residues of the poles crossed on the way. With ``direct=True`` the
    unshifted integral is computed as well.
    """
    _require_applicable(params)
    sd = SaddleData(params)
    phi = contours[0].phi if contours is not None else mid_band_angle(params)
    for c in contours or ():
        if abs(c.center) > 0:
            raise ValueError("original contours must pass through the origin")
    a_part = saddle_double_integral(params, N, phi)
    sum_n, sum_m, dsum, details = _single_sums(params, sd, N, phi, leading=False)
    details["double_integral"] = a_part
    out = Decomposition(a_part.value, sum_n, sum_m, dsum, phi=phi, details=details)
    if direct:
        d = i_n_direct(params, N, contours, detail=True)
        out.direct = d.value
        out.direct_error = d.quad.error
        out.details["direct"] = d
    return out


def saddle_double_integral_expansion(params: IteratedCableParams, terms: int = 2, phi: float | None = None):
    """Expansion of ``exp(-(N+1) theta(w)) * saddle_double_integral`` in powers of ``1/(N+1)``.

    Returns an :class:`Expansion`; its first coefficient vanishes because
    ``psi2`` has a zero at ``w2``.
    """
    sd = SaddleData(params)
    phi = mid_band_angle(params) if phi is None else phi
    w1, w2 = sd.w
    e = cmath.exp(1j * phi)
    beta = float(params.beta)
    k2 = params.p2 * params.q2
    sign = 1 if beta > 0 else -1
    F = sign * np.array([[2 / beta, -2 / beta], [-2 / beta, 2 / beta + 2 / k2]])
    alpha = sign * e * e / (math.pi * 1j)

    def g(x1, x2):
        z1, z2 = w1 + e * x1, w2 + e * x2
        return e * e * psi1(z1, params.p1) * psi2(z2, params.p2, params.q2) * poly_factor(z1, z2, params)

    radius = (math.pi / (4 * params.p1), math.pi / 4)
    return gauss_expand_2d(g, F, alpha, terms, radius=radius)


def leading_order_parts(params: IteratedCableParams, N: int) -> Decomposition:
    """Leading-order estimates of the four parts.

    Residue contributions are kept exactly; every line integral through a
    saddle is replaced by its first Gaussian term and the saddle double
    integral by the first nonvanishing term of its expansion.
    """
    _require_applicable(params)
    sd = SaddleData(params)
    phi = mid_band_angle(params)
    w1, w2 = sd.w
    expansion = saddle_double_integral_expansion(params, 2, phi)
    a_part = cmath.exp((N + 1) * theta(w1, w2, params)) * expansion.evaluate(N)
    sum_n, sum_m, dsum, details = _single_sums(params, sd, N, phi, leading=True)
    return Decomposition(a_part, sum_n, sum_m, dsum, phi=phi, details=details)
