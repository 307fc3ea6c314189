"""Gauss-Legendre panel quadrature along straight lines in the complex plane.

Every integrand handled here has the form ``g(z) * exp(E(z))`` with ``E`` a
quadratic polynomial whose real part decays along the line. The decay fixes
the truncation window analytically, the imaginary part bounds the local
oscillation frequency, and nearby poles of ``g`` grade the panels.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from ..errors import AngleOutOfBand, ContourThroughPole

# log of the neglected tail relative to the peak of the integrand
TAIL_LOG = 55.0
# GL with 16 nodes is accurate to ~1e-15 when omega * half_width <= 8
PHASE_PER_HALF_PANEL = 8.0
POLE_WIDTH_FACTOR = 0.6
POLE_TAU = 1e-6
DEFAULT_ORDER = 16
CHUNK = 128


@dataclass(frozen=True)
class ContourSpec:
    """The line ``center + t * exp(i*phi)``, ``t`` in ``[-truncation, truncation]``.

    ``truncation`` and ``nodes`` may be left as ``None`` to have them chosen
    from the integrand; ``nodes`` is then a lower bound on the node count.
    """

    phi: float
    center: complex = 0j
    truncation: float | None = None
    nodes: int | None = None

    @property
    def direction(self) -> complex:
        return cmath.exp(1j * self.phi)

    def to_t(self, z):
        return (z - self.center) * cmath.exp(-1j * self.phi)

    def side_of(self, p) -> int:
        """+1 if ``p`` lies to the left of the oriented line, -1 to the right, 0 on it."""
        s = self.to_t(p).imag
        return 0 if abs(s) < POLE_TAU else (1 if s > 0 else -1)

    def distance(self, p) -> float:
        return abs(self.to_t(p).imag)

    def shifted(self, center) -> "ContourSpec":
        return replace(self, center=complex(center))

    def to_json(self):
        return {
            "phi": self.phi,
            "center": [self.center.real, self.center.imag],
            "truncation": self.truncation,
            "nodes": self.nodes,
        }


@dataclass
class QuadResult:
    value: complex
    error: float
    nodes: tuple
    peak_log: float
    converged: bool
    window: tuple = field(default=())

    def __complex__(self):
        return self.value


@lru_cache(maxsize=16)
def gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def build_panels(lo, hi, omega, poles_t=(), hmax=1.0, min_width=1e-12):
    """Panel edges on ``[lo, hi]``.

    ``omega(t)`` bounds the phase derivative at ``t``; ``poles_t`` are
    singularities in the complex ``t`` plane, which force geometric grading.
    """
    poles_t = np.asarray(list(poles_t), dtype=complex)
    edges = [lo]
    t = lo
    while t < hi:
        w = hmax
        freq = max(omega(t), omega(min(t + hmax, hi)))
        if freq > 0:
            w = min(w, 2 * PHASE_PER_HALF_PANEL / freq)
        if poles_t.size:
            d = np.min(np.abs(poles_t - t))
            w = min(w, POLE_WIDTH_FACTOR * d)
        if w < min_width:
            raise ContourThroughPole(f"contour passes within {w:.1e} of a pole")
        t = min(t + w, hi)
        edges.append(t)
    return np.asarray(edges)


def panel_nodes(edges, n):
    x, w = gauss_legendre(n)
    a, b = edges[:-1], edges[1:]
    half = (b - a) / 2
    mid = (a + b) / 2
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return t, wt


def _refine(edges, min_nodes, n):
    if min_nodes is None or (len(edges) - 1) * n >= min_nodes:
        return edges
    k = -(-min_nodes // n)
    return np.linspace(edges[0], edges[-1], k + 1)


@dataclass(frozen=True)
class GaussianLine:
    """``exp(a2*z^2 + a1*z + a0)`` restricted to a line."""

    a2: complex
    a1: complex
    a0: complex
    contour: ContourSpec

    def coefficients(self):
        e = self.contour.direction
        c = self.contour.center
        A2 = self.a2 * e * e
        A1 = (2 * self.a2 * c + self.a1) * e
        A0 = self.a2 * c * c + self.a1 * c + self.a0
        return A2, A1, A0

    def peak(self):
        A2, A1, A0 = self.coefficients()
        if A2.real >= 0:
            raise AngleOutOfBand(f"no Gaussian decay along phi={self.contour.phi:.6g}")
        tstar = -A1.real / (2 * A2.real)
        P = A0.real - A1.real ** 2 / (4 * A2.real)
        return tstar, P

    def window(self, growth=0.0):
        A2, _, _ = self.coefficients()
        tstar, _ = self.peak()
        a = -A2.real
        L = TAIL_LOG + growth * abs(tstar)
        W = (growth + math.sqrt(growth * growth + 4 * a * L)) / (2 * a)
        return tstar - W, tstar + W

    def integrate(self, g, poles=(), growth=0.0, gfreq=0.0, order=DEFAULT_ORDER, hmax=1.0, rel_tol=1e-12):
        """``int g(z) exp(E(z)) dz`` along the line; ``g`` is vectorized over numpy arrays."""
        A2, A1, A0 = self.coefficients()
        _, P = self.peak()
        lo, hi = self.window(growth)
        T = self.contour.truncation
        tail_ok = True
        if T is not None:
            tail_ok = -T <= lo and hi <= T
            lo, hi = max(lo, -T), min(hi, T)
        poles_t = [self.contour.to_t(p) for p in poles]
        omega = lambda t: abs(2 * A2.imag * t + A1.imag) + gfreq
        edges = _refine(build_panels(lo, hi, omega, poles_t, hmax), self.contour.nodes, order)
        e = self.contour.direction
        c = self.contour.center

        def run(n):
            t, w = panel_nodes(edges, n)
            z = c + e * t
            terms = g(z) * np.exp(A2 * t * t + A1 * t + (A0 - P)) * w
            return complex(np.sum(terms)) * e, float(np.sum(np.abs(terms))), t.size

        v1, _, _ = run(order)
        v2, mag, nn = run(2 * order)
        scale = math.exp(P)
        err = (abs(v2 - v1) + 1e-15 * mag) * scale
        ok = tail_ok and abs(v2 - v1) <= rel_tol * max(abs(v2), 1e-300) + 1e-15 * mag
        return QuadResult(v2 * scale, err, (nn,), P, ok, ((lo, hi),))


@dataclass(frozen=True)
class GaussianPlane:
    """``exp(a11 z1^2 + 2 a12 z1 z2 + a22 z2^2 + b1 z1 + b2 z2 + e0)`` on a product of lines."""

    a11: complex
    a12: complex
    a22: complex
    b1: complex
    b2: complex
    e0: complex
    contour1: ContourSpec
    contour2: ContourSpec

    def coefficients(self):
        e1, e2 = self.contour1.direction, self.contour2.direction
        c1, c2 = self.contour1.center, self.contour2.center
        A = np.array(
            [[self.a11 * e1 * e1, self.a12 * e1 * e2], [self.a12 * e1 * e2, self.a22 * e2 * e2]]
        )
        B = np.array(
            [
                (2 * self.a11 * c1 + 2 * self.a12 * c2 + self.b1) * e1,
                (2 * self.a12 * c1 + 2 * self.a22 * c2 + self.b2) * e2,
            ]
        )
        E0 = (
            self.a11 * c1 * c1 + 2 * self.a12 * c1 * c2 + self.a22 * c2 * c2
            + self.b1 * c1 + self.b2 * c2 + self.e0
        )
        return A, B, E0

    def peak(self):
        A, B, E0 = self.coefficients()
        R = A.real
        if not (R[0, 0] < 0 and np.linalg.det(R) > 0):
            raise AngleOutOfBand("real part of the quadratic form is not negative definite on these lines")
        tstar = -0.5 * np.linalg.solve(R, B.real)
        P = E0.real + 0.5 * float(B.real @ tstar)
        return tstar, P

    def layout(self, growth=(0.0, 0.0)):
        """Outer (t2) window, and the inner (t1) window as a function of t2."""
        A, _, _ = self.coefficients()
        tstar, _ = self.peak()
        negR = -A.real
        cov = np.linalg.inv(negR)
        L = TAIL_LOG + growth[0] * abs(tstar[0]) + growth[1] * abs(tstar[1])
        W2 = math.sqrt(L * cov[1, 1]) + growth[1] / negR[1, 1]
        W1 = math.sqrt(L / negR[0, 0]) + growth[0] / negR[0, 0]
        slope = -negR[0, 1] / negR[0, 0]
        return tstar, W1, W2, slope

    def estimate_work(self, hmax=1.0, order=DEFAULT_ORDER, poles1=(), poles2=(), gfreq=(0.0, 0.0)):
        edges1, edges2, frac = self._edges(hmax, poles1, poles2, (0.0, 0.0), gfreq)
        return (len(edges1) - 1) * order * (len(edges2) - 1) * order * frac

    def _edges(self, hmax, poles1, poles2, growth, gfreq):
        A, B, _ = self.coefficients()
        tstar, W1, W2, slope = self.layout(growth)
        lo2, hi2 = tstar[1] - W2, tstar[1] + W2
        spread = abs(slope) * W2
        lo1, hi1 = tstar[0] - spread - W1, tstar[0] + spread + W1
        T1, T2 = self.contour1.truncation, self.contour2.truncation
        if T1 is not None:
            lo1, hi1 = max(lo1, -T1), min(hi1, T1)
        if T2 is not None:
            lo2, hi2 = max(lo2, -T2), min(hi2, T2)
        # phase gradient bounded over the effective ellipse of the Gaussian
        negR = -A.real
        cov = np.linalg.inv(negR)
        L = TAIL_LOG + growth[0] * abs(tstar[0]) + growth[1] * abs(tstar[1])
        om = []
        for j in (0, 1):
            a = 2 * A.imag[j]
            centre = abs(float(a @ tstar) + B.imag[j])
            om.append(centre + math.sqrt(max(L * float(a @ cov @ a), 0.0)) + gfreq[j])
        om1 = lambda t: om[0]
        om2 = lambda t: om[1]
        p1 = [self.contour1.to_t(p) for p in poles1]
        p2 = [self.contour2.to_t(p) for p in poles2]
        edges1 = build_panels(lo1, hi1, om1, p1, hmax)
        edges2 = build_panels(lo2, hi2, om2, p2, hmax)
        frac = min(1.0, 2 * W1 / max(hi1 - lo1, 1e-300) + 0.05)
        return edges1, edges2, frac

    def integrate(
        self,
        g1,
        g2,
        joint=None,
        poles1=(),
        poles2=(),
        growth=(0.0, 0.0),
        gfreq=(0.0, 0.0),
        order=DEFAULT_ORDER,
        hmax=1.0,
        rel_tol=1e-10,
    ):
        """Iterated quadrature of ``g1(z1) g2(z2) joint(z1, z2) exp(E)``.

        The inner window follows the conditional peak of the Gaussian, so the
        work is proportional to the area of the effective ellipse.
        """
        A, B, E0 = self.coefficients()
        tstar, W1, _, slope = self.layout(growth)
        _, P = self.peak()
        edges1, edges2, _ = self._edges(hmax, poles1, poles2, growth, gfreq)
        edges1 = _refine(edges1, self.contour1.nodes, order)
        edges2 = _refine(edges2, self.contour2.nodes, order)
        e1, e2 = self.contour1.direction, self.contour2.direction
        c1, c2 = self.contour1.center, self.contour2.center

        def run(n):
            t1, w1 = panel_nodes(edges1, n)
            t2, w2 = panel_nodes(edges2, n)
            z1 = c1 + e1 * t1
            z2 = c2 + e2 * t2
            f1 = g1(z1) * w1
            f2 = g2(z2) * w2
            # exponentiate the full form only: the separate factors can overflow
            q1 = A[0, 0] * t1 * t1 + B[0] * t1
            q2 = A[1, 1] * t2 * t2 + B[1] * t2 + (E0 - P)
            total = 0j
            mag = 0.0
            for s in range(0, t2.size, CHUNK):
                sl2 = slice(s, s + CHUNK)
                d2 = t2[sl2] - tstar[1]
                c_lo = tstar[0] + slope * d2
                i0 = np.searchsorted(t1, c_lo.min() - W1)
                i1 = np.searchsorted(t1, c_lo.max() + W1, side="right")
                if i1 <= i0:
                    continue
                T1 = t1[i0:i1, None]
                T2 = t2[None, sl2]
                expo = q1[i0:i1, None] + 2 * A[0, 1] * T1 * T2 + q2[None, sl2]
                block = f1[i0:i1, None] * np.exp(expo) * f2[None, sl2]
                if joint is not None:
                    block = block * joint(z1[i0:i1, None], z2[None, sl2])
                total += complex(np.sum(block))
                mag += float(np.sum(np.abs(block)))
            return total * e1 * e2, mag, (t1.size, t2.size)

        v1, _, _ = run(order)
        v2, mag, nn = run(2 * order)
        scale = math.exp(P)
        err = (abs(v2 - v1) + 1e-15 * mag) * scale
        ok = abs(v2 - v1) <= rel_tol * max(abs(v2), 1e-300) + 1e-15 * mag
        return QuadResult(v2 * scale, err, nn, P, ok, ((edges1[0], edges1[-1]), (edges2[0], edges2[-1])))
