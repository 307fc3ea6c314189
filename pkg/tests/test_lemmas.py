import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cablejones.contour.lemmas import (
    cauchy_half_line,
    gauss_expand_1d,
    gauss_expand_2d,
    gaussian_moment,
    quadrature_1d,
    quadrature_2d,
    remainder_slope,
    rotated_moment,
    rotated_moment_quadrature,
    taylor_coefficients,
    taylor_coefficients_2d,
)
from cablejones.errors import NotPositiveDefinite

finite = dict(allow_nan=False, allow_infinity=False)


def test_taylor_coefficients():
    c = taylor_coefficients(np.exp, 6)
    assert np.allclose(c, [1 / math.factorial(j) for j in range(7)], atol=1e-14)
    c2 = taylor_coefficients_2d(lambda x, y: np.exp(x + 2 * y), 3)
    assert abs(c2[1, 2] - 4 / 2) < 1e-13 and c2[2, 2] == 0


@pytest.mark.parametrize("below, want", [(False, -math.pi * 1j), (True, math.pi * 1j)])
@pytest.mark.parametrize("eps", [0.05, 0.5])
def test_half_line(below, want, eps):
    assert abs(cauchy_half_line(1.0, eps, 4, below) - want) < 1e-10


def test_half_line_rejects_bad_input():
    with pytest.raises(ValueError):
        cauchy_half_line(-1.0, 0.1, 3)


def test_expansion_1d_exact_for_polynomials():
    # for a polynomial of degree < 2M the expansion is exact
    g = lambda x: 1 + 3 * x**2 - x**3
    ex = gauss_expand_1d(g, 1.5, 2)
    for N in (0, 3, 10):
        assert abs(ex.evaluate(N) - quadrature_1d(g, 1.5, N)) < 1e-12


@pytest.mark.parametrize("M", [1, 2, 3])
def test_expansion_1d_order(M):
    Ns = [int(round(math.exp(t))) - 1 for t in np.linspace(2, 6, 9)]
    ex = gauss_expand_1d(np.cos, 1 + 0.3j, M, radius=1.0)
    slope = remainder_slope(lambda N: quadrature_1d(np.cos, 1 + 0.3j, N), ex, Ns)
    assert abs(slope - (M + 0.5)) <= 0.15


def test_expansion_2d_supplied_derivatives():
    F = [[1.0, 0.2], [0.2, 2.0]]
    g = lambda x, y: np.exp(x - y)
    derivs = [[(-1) ** j for j in range(5)] for _ in range(5)]
    a = gauss_expand_2d(g, F, 1.0, 2, derivs=derivs)
    b = gauss_expand_2d(g, F, 1.0, 2)
    assert np.allclose(a.coefficients, b.coefficients, atol=1e-12)


# each example runs a 2-D quadrature
@settings(max_examples=25)
@given(
    st.floats(0.5, 3, **finite), st.floats(-0.6, 0.6, **finite), st.floats(0.5, 3, **finite),
    st.floats(0.3, 2, **finite), st.floats(-1, 1, **finite),
    st.integers(0, 4), st.integers(0, 4),
)
def test_moments_match_quadrature(f11, c, f22, ar, ai, k, l):
    F = np.array([[f11, c * math.sqrt(f11 * f22)], [c * math.sqrt(f11 * f22), f22]])
    alpha = complex(ar, ai * ar)
    q = quadrature_2d(lambda x, y: x**k * y**l, F, alpha)
    m = gaussian_moment(F, alpha, k, l)
    assert abs(m - q.value) <= 1e-8 * max(1.0, abs(q.value))


def test_moment_triple_form_and_validation():
    assert abs(gaussian_moment((1.0, 0.0, 1.0), 1.0, 0, 0) - math.pi) < 1e-14
    with pytest.raises(NotPositiveDefinite):
        gaussian_moment([[1.0, 2.0], [2.0, 1.0]], 1.0, 0, 0)
    with pytest.raises(ValueError):
        gaussian_moment([[1.0, 0.0], [0.5, 1.0]], 1.0, 0, 0)
    assert gaussian_moment([[1.0, 0.0], [0.0, 1.0]], 1.0, 1, 0) == 0


@pytest.mark.parametrize("phi", [math.pi / 4, math.pi / 3])
def test_rotated_moment(phi):
    F = np.array([[4.0, -4.0], [-4.0, 4.0 + 1 / 3]])
    v = rotated_moment(F, phi, 1, 1)
    q = rotated_moment_quadrature(F, phi, 1, 1)
    assert abs(v - q.value) <= 1e-9 * abs(v)
