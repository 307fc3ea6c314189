import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cablejones.errors import BetaZero, InvalidParams
from cablejones.jones import (
    Framing,
    IteratedCableParams,
    Method,
    cable_jones,
    cable_jones_oracle,
    d_factor,
    kappa_analytic,
    kappa_exact,
    s_at_root,
    torus_jones,
)
from cablejones.laurent import ONE, lp_divexact, quantum_int
from cablejones.skein import framing_change


def test_derived_parameters():
    p = IteratedCableParams(2, 13, 2, 3)
    assert p.alpha == 11
    assert str(p.beta) == "1/2" and str(p.gamma) == "3/2"
    assert p.sigma == 26 and p.vc_applicable
    assert not IteratedCableParams(2, 11, 2, 3).vc_applicable


@pytest.mark.parametrize(
    "args, msg",
    [((2, 4, 2, 3), "coprime"), ((0, 1, 2, 3), "p1"), ((2, 13, 1, 3), "p2"), ((2, 13, 2, 0), "q2"), ((2.0, 13, 2, 3), "integer")],
)
def test_validation(args, msg):
    with pytest.raises(InvalidParams, match=msg):
        IteratedCableParams(*args)


def test_color_zero_is_one():
    assert cable_jones(IteratedCableParams(2, 13, 2, 3), 0) == ONE
    assert torus_jones(2, 3, 0) == ONE


def test_p1_one_empty_inner_range():
    # p1 = 1, k = -1 gives p1*k + 1 = 0
    p = IteratedCableParams(1, 1, 2, 3)
    for N in range(6):
        assert cable_jones(p, N) == cable_jones_oracle(p, N)


def test_trivial_cable_is_torus_knot():
    # the (1, 0) cable is the companion itself, up to a framing change of the outer color
    p = IteratedCableParams(1, 0, 2, 3)
    for N in range(5):
        assert cable_jones_oracle(p, N) == torus_jones(2, 3, N, Framing.ZERO)


def test_oracle_negative_color():
    p = IteratedCableParams(2, 13, 2, 3)
    assert cable_jones_oracle(p, -1).is_zero()
    assert cable_jones_oracle(p, -4) == -cable_jones_oracle(p, 2)


@given(st.integers(0, 6), st.integers(-4, 4))
def test_framing_preserves_modulus_at_root(N, b):
    q = lp_divexact(torus_jones(2, 5, N), quantum_int(N + 1))
    from cablejones.laurent import EvalPoint, evaluate

    a = abs(complex(evaluate(q, EvalPoint.root_of_unity(N))))
    c = abs(complex(evaluate(q * framing_change(N, b), EvalPoint.root_of_unity(N))))
    assert math.isclose(a, c, rel_tol=1e-12, abs_tol=1e-300)


@given(st.integers(0, 200))
def test_d_factor_unit_modulus(N):
    assert abs(abs(complex(d_factor(IteratedCableParams(2, 13, 2, 3), N))) - 1) < 1e-14


def test_kappa_at_zero():
    k = kappa_exact(IteratedCableParams(2, 13, 2, 3), 0)
    assert complex(k.kappa) == 1
    assert k.method is Method.EXACT


@pytest.mark.parametrize("N", [1, 4, 9, 17])
def test_routes_agree(N):
    p = IteratedCableParams(3, 31, 2, 5)
    a, b = complex(kappa_exact(p, N).kappa), complex(kappa_analytic(p, N).kappa)
    assert abs(a - b) <= 1e-10 * abs(a)


def test_double_sum_vanishes_at_root():
    p = IteratedCableParams(2, 13, 2, 3)
    assert abs(complex(s_at_root(p, 7))) < 1e-25


def test_beta_zero_carries_sample():
    p = IteratedCableParams(1, 6, 2, 3)
    with pytest.raises(BetaZero) as exc:
        kappa_analytic(p, 5)
    ref = complex(kappa_exact(p, 5).kappa)
    assert abs(complex(exc.value.sample.kappa) - ref) < 1e-10 * abs(ref)


def test_csv_row_shape():
    row = kappa_exact(IteratedCableParams(2, 13, 2, 3), 3).csv_row()
    assert len(row) == 8 and row[5] == "exact" and row[6] == 128
