"""Large-parameter expansions of Gaussian integrals, the half-line Cauchy integral, and Gaussian moments."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn

from ..errors import NotPositiveDefinite
from .quadrature import ContourSpec, GaussianLine, GaussianPlane


def taylor_coefficients(g, order: int, radius: float = 0.5, points: int = 64) -> np.ndarray:
    """``c_j = g^(j)(0)/j!`` for ``j <= order`` by the trapezoid rule on ``|x| = radius``.

    ``g`` must be analytic on a disc slightly larger than ``radius`` and
    accept numpy arrays.
    """
    points = max(points, 2 * order + 8)
    x = radius * np.exp(2j * math.pi * np.arange(points) / points)
    c = np.fft.fft(g(x)) / points
    return c[: order + 1] / radius ** np.arange(order + 1)


def taylor_coefficients_2d(g, order: int, radius=(0.5, 0.5), points: int = 32) -> np.ndarray:
    """``c[j, k] = d^(j+k) g / dx1^j dx2^k (0) / (j! k!)`` for ``j + k <= order`` (zero elsewhere)."""
    points = max(points, 2 * order + 8)
    u = np.exp(2j * math.pi * np.arange(points) / points)
    X1 = radius[0] * u[:, None]
    X2 = radius[1] * u[None, :]
    c = np.fft.fft2(g(X1 * np.ones_like(X2), X2 * np.ones_like(X1))) / points ** 2
    out = np.zeros((order + 1, order + 1), dtype=complex)
    for j in range(order + 1):
        for k in range(order + 1 - j):
            out[j, k] = c[j, k] / (radius[0] ** j * radius[1] ** k)
    return out


def gaussian_moment_1d(alpha: complex, n: int) -> complex:
    """``int exp(-alpha x^2) x^n dx`` over the real line, ``Re alpha > 0``."""
    if n % 2:
        return 0j
    m = n // 2
    return complex(gamma_fn(m + 0.5)) / complex(alpha) ** (m + 0.5)


@dataclass(frozen=True)
class Expansion:
    """``sum_m coefficients[m] * (N+1)^-(m + offset)``."""

    coefficients: tuple
    offset: float

    def evaluate(self, N: int) -> complex:
        return sum(c * (N + 1) ** -(m + self.offset) for m, c in enumerate(self.coefficients))


def gauss_expand_1d(g, alpha: complex, M: int, derivs=None, radius: float = 0.5) -> Expansion:
    """Expansion of ``int exp(-(N+1) alpha x^2) g(x) dx`` keeping ``M`` terms.

    Term ``m`` is ``g^(2m)(0)/(2m)! * int exp(-alpha x^2) x^(2m) dx * (N+1)^-(m+1/2)``.
    ``derivs`` may supply ``g^(j)(0)`` for ``j < 2M``; otherwise ``g`` is
    expanded on a circle of the given radius.
    """
    if complex(alpha).real <= 0:
        raise ValueError("Re(alpha) must be positive")
    if derivs is not None:
        c = [complex(derivs[2 * m]) / math.factorial(2 * m) for m in range(M)]
    else:
        tc = taylor_coefficients(g, 2 * M, radius)
        c = [tc[2 * m] for m in range(M)]
    return Expansion(tuple(c[m] * gaussian_moment_1d(alpha, 2 * m) for m in range(M)), 0.5)


def quadrature_1d(g, alpha: complex, N: int) -> complex:
    """``int exp(-(N+1) alpha x^2) g(x) dx`` on the real line by windowed Gauss-Legendre."""
    line = GaussianLine(-(N + 1) * complex(alpha), 0j, 0j, ContourSpec(0.0))
    return line.integrate(g, growth=1.0, hmax=0.25).value


def cauchy_half_line(alpha: complex, eps: float, N: int, below: bool = False) -> complex:
    """``int dz exp(-(N+1) alpha z^2)/z`` along the real line shifted by ``+i eps`` (``-i eps`` if ``below``)."""
    if complex(alpha).real <= 0 or eps <= 0:
        raise ValueError("need Re(alpha) > 0 and eps > 0")
    centre = -1j * eps if below else 1j * eps
    line = GaussianLine(-(N + 1) * complex(alpha), 0j, 0j, ContourSpec(0.0, centre))
    return line.integrate(lambda z: 1 / z, poles=[0j], rel_tol=1e-13).value


def _form_matrix(f) -> np.ndarray:
    F = np.asarray(f, dtype=float)
    if F.shape == (3,):
        F = np.array([[F[0], F[1] / 2], [F[1] / 2, F[2]]])
    if F.shape != (2, 2) or not np.allclose(F, F.T):
        raise ValueError("quadratic form must be a symmetric 2x2 matrix or (f11, f12_cross, f22)")
    if not (F[0, 0] > 0 and np.linalg.det(F) > 0):
        raise NotPositiveDefinite("quadratic form is not positive definite")
    return F


def gaussian_moment(f, alpha: complex, k: int, l: int) -> complex:
    """``int int exp(-alpha f(x)) x1^k x2^l dx`` from the generating function.

    ``f`` is the symmetric matrix of the form (``f(x) = x^T F x``), or the
    triple ``(f11, f12_cross, f22)`` meaning ``f11 x1^2 + f12_cross x1 x2 + f22 x2^2``.
    """
    if k < 0 or l < 0:
        raise ValueError("moment orders must be nonnegative")
    F = _form_matrix(f)
    alpha = complex(alpha)
    if alpha.real <= 0:
        raise ValueError("Re(alpha) must be positive")
    if (k + l) % 2:
        return 0j
    E0 = math.pi / (alpha * math.sqrt(np.linalg.det(F)))
    S = np.linalg.inv(F) / (2 * alpha)
    total = 0j
    for a in range(k // 2 + 1):
        b = k - 2 * a
        if b > l or (l - b) % 2:
            continue
        c = (l - b) // 2
        total += (
            (S[0, 0] / 2) ** a * S[0, 1] ** b * (S[1, 1] / 2) ** c
            / (math.factorial(a) * math.factorial(b) * math.factorial(c))
        )
    return E0 * math.factorial(k) * math.factorial(l) * total


def gauss_expand_2d(g, f, alpha: complex, M: int, derivs=None, radius=(0.5, 0.5)) -> Expansion:
    """Expansion of ``int int exp(-(N+1) alpha f(x)) g(x) dx`` keeping ``M`` terms.

    Term ``m`` is ``(N+1)^-(m+1) * sum_{k=0..2m} d^(2m) g/dx1^k dx2^(2m-k)(0) / (k!(2m-k)!) * moment(k, 2m-k)``.
    ``derivs[k][j]`` may supply ``d^(k+j) g/dx1^k dx2^j (0)``.
    """
    _form_matrix(f)
    if derivs is None:
        tc = taylor_coefficients_2d(g, 2 * M, radius)
    else:
        tc = np.zeros((2 * M + 1, 2 * M + 1), dtype=complex)
        for k in range(2 * M + 1):
            for j in range(2 * M + 1 - k):
                tc[k, j] = complex(derivs[k][j]) / (math.factorial(k) * math.factorial(j))
    coeffs = []
    for m in range(M):
        coeffs.append(sum(tc[k, 2 * m - k] * gaussian_moment(f, alpha, k, 2 * m - k) for k in range(2 * m + 1)))
    return Expansion(tuple(coeffs), 1.0)


def quadrature_2d(g, f, alpha: complex, N: int = 0, rel_tol: float = 1e-12):
    """``int int exp(-(N+1) alpha f(x)) g(x1, x2) dx`` over the real plane; returns a QuadResult."""
    F = _form_matrix(f)
    s = -(N + 1) * complex(alpha)
    plane = GaussianPlane(s * F[0, 0], s * F[0, 1], s * F[1, 1], 0j, 0j, 0j, ContourSpec(0.0), ContourSpec(0.0))
    return plane.integrate(
        lambda x: np.ones_like(x), lambda x: np.ones_like(x), joint=g, growth=(1.0, 1.0), hmax=0.25, rel_tol=rel_tol
    )


def remainder_slope(exact, expansion: Expansion, Ns) -> float:
    """Least-squares slope of ``-log|exact(N) - expansion(N)|`` against ``log(N+1)``."""
    x = np.log(np.asarray(Ns, dtype=float) + 1)
    y = np.array([-math.log(abs(exact(N) - expansion.evaluate(N))) for N in Ns])
    return float(np.polyfit(x, y, 1)[0])


def rotated_moment(f, phi: float, k: int, l: int) -> complex:
    """``int int z1^k z2^l exp(-f(z)/(pi i))`` over ``z = e^(i phi) x``, ``x`` real, through the moment formula.

    ``f`` may be positive or negative definite; the rotated Gaussian must decay.
    """
    F = np.asarray(f, dtype=float)
    if F.shape == (3,):
        F = np.array([[F[0], F[1] / 2], [F[1] / 2, F[2]]])
    sign = 1 if F[0, 0] > 0 else -1
    alpha = sign * cmath.exp(2j * phi) / (math.pi * 1j)
    return cmath.exp(1j * phi * (k + l + 2)) * gaussian_moment(sign * F, alpha, k, l)


def rotated_moment_quadrature(f, phi: float, k: int, l: int):
    """Oracle for :func:`rotated_moment` by 2-D quadrature; returns a QuadResult of the rotated integral."""
    F = np.asarray(f, dtype=float)
    if F.shape == (3,):
        F = np.array([[F[0], F[1] / 2], [F[1] / 2, F[2]]])
    s = -1 / (math.pi * 1j)
    c = ContourSpec(phi)
    plane = GaussianPlane(s * F[0, 0], s * F[0, 1], s * F[1, 1], 0j, 0j, 0j, c, c)
    return plane.integrate(
        lambda z: z ** k, lambda z: z ** l, growth=(float(k), float(l)), hmax=0.25, rel_tol=1e-12
    )
