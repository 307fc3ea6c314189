import cmath
import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cablejones.errors import DivisionByZeroPoly, NotDivisible
from cablejones.laurent import ONE, ZERO, EvalPoint, LaurentPoly, evaluate, lp_divexact, quantum_int, residue_map

polys = st.dictionaries(st.integers(-30, 30), st.integers(-10**6, 10**6), max_size=8).map(LaurentPoly)
small_polys = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=4).map(LaurentPoly)


@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + ZERO == f and f * ONE == f
    assert f - f == ZERO


@given(polys, small_polys)
def test_divexact_recovers_factor(f, g):
    if g.is_zero():
        return
    assert lp_divexact(f * g, g) == f


def test_divexact_rejects_remainder():
    with pytest.raises(NotDivisible):
        lp_divexact(LaurentPoly({0: 1, 1: 1}), LaurentPoly({0: 2}))
    with pytest.raises(NotDivisible):
        lp_divexact(LaurentPoly({3: 1, 0: 2}), LaurentPoly({1: 1, 0: 1}))
    with pytest.raises(DivisionByZeroPoly):
        lp_divexact(ONE, ZERO)


def test_large_coefficients_take_sparse_path():
    big = LaurentPoly({0: 3**80, 4: -(3**79)})
    g = quantum_int(3)
    assert lp_divexact(big * g, g) == big


@pytest.mark.parametrize("m", [-4, -1, 0, 1, 2, 5])
def test_quantum_int(m):
    q = quantum_int(m)
    x = 0.3 + 0.2j
    a = cmath.exp(x)
    ref = (a ** (2 * m) - a ** (-2 * m)) / (a**2 - a**-2)
    assert abs(complex(evaluate(q, EvalPoint.general(2 * x))) - ref) < 1e-12 * max(1, abs(ref))
    assert quantum_int(-m) == -q


def test_zero_poly_degree_is_error():
    with pytest.raises(ValueError):
        ZERO.degree()


@given(polys)
def test_json_roundtrip(f):
    assert LaurentPoly.from_json(f.to_json()) == f


@given(small_polys, st.integers(0, 12))
def test_root_of_unity_evaluation_matches_mpmath(f, N):
    v = evaluate(f, EvalPoint.root_of_unity(N, 200))
    with mpmath.workprec(200):
        A = mpmath.expjpi(mpmath.mpf(1) / (2 * (N + 1)))
        ref = mpmath.fsum(c * A**e for e, c in f.items()) if f else mpmath.mpc(0)
        assert abs(v.to_mpc() - ref) <= mpmath.mpf(2) ** -180 * max(1, abs(ref))


def test_residue_map_reduces_mod_4n_plus_4():
    f = LaurentPoly({0: 1, 8: 2, -8: -1})
    assert residue_map(f, 1) == {0: 2}


def test_dense_roundtrip():
    f = LaurentPoly({-3: 2, 0: -1, 4: 7})
    lo, arr = f.to_dense()
    assert LaurentPoly.from_dense(lo, arr) == f
    assert math.isclose(abs(complex(evaluate(ONE, EvalPoint.root_of_unity(3)))), 1.0)
