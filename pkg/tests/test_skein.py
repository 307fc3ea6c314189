import pytest
from hypothesis import given
from hypothesis import strategies as st

from cablejones.errors import InvalidParams
from cablejones.laurent import ONE, LaurentPoly, quantum_int
from cablejones.skein import (
    CableParams,
    SkeinElement,
    Thm1Params,
    cable_from_coefficients,
    cable_skein,
    e_product,
    framing_change,
    normalize_index,
    unknot_bracket,
)


@given(st.integers(-50, 50))
def test_negative_index_relation(n):
    e = SkeinElement.basis(n)
    assert e == -SkeinElement.basis(-n - 2)


def test_e_minus_one_vanishes():
    assert normalize_index(-1)[0] == 0
    assert SkeinElement.basis(-1) == SkeinElement()


def test_products():
    assert e_product(1, 1) == SkeinElement.basis(0) + SkeinElement.basis(2)
    assert e_product(0, 4) == SkeinElement.basis(4)
    assert SkeinElement.basis(2) * SkeinElement.basis(1) == SkeinElement.basis(1) + SkeinElement.basis(3)


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
def test_product_associative_and_bracket_multiplicative_on_unknot(a, b, c):
    ea, eb, ec = (SkeinElement.basis(i) for i in (a, b, c))
    assert (ea * eb) * ec == ea * (eb * ec)


def test_unknot_bracket():
    assert unknot_bracket(0) == ONE
    assert unknot_bracket(1) == LaurentPoly({2: -1, -2: -1})
    assert unknot_bracket(3) == -quantum_int(4)


@given(st.integers(0, 10), st.integers(-5, 5), st.integers(-5, 5))
def test_framing_change_composes(n, b1, b2):
    assert framing_change(n, b1) * framing_change(n, b2) == framing_change(n, b1 + b2)
    assert framing_change(0, b1) == ONE


def test_cable_example_follows_closed_form():
    # (2,3) pattern, N=1, core color 0
    got = cable_skein(CableParams(2, 3, 1, 0))
    want = SkeinElement({0: ONE, 2: LaurentPoly.monomial(12, -1)})
    assert got == want


@given(st.integers(1, 5), st.integers(-9, 9), st.integers(0, 5), st.integers(0, 3))
def test_two_cabling_forms_agree(p, q, N, s):
    import math

    if math.gcd(p, q) != 1:
        return
    c = CableParams(p, q, N, s)
    assert cable_skein(c) == cable_from_coefficients(c)


def test_thm1_division():
    t = Thm1Params.from_pq(3, 7)
    assert (t.epsilon, t.beta_res, t.alpha_prod) == (2, 1, 3)
    t = Thm1Params.from_pq(3, -7)
    assert (t.epsilon, t.beta_res) == (-3, 2)


@pytest.mark.parametrize(
    "kwargs, msg",
    [
        (dict(p=2, q=4, N=1), "coprime"),
        (dict(p=0, q=1, N=1), "positive"),
        (dict(p=2, q=3, N=-1), "nonnegative"),
        (dict(p=2, q=3, N=1, sigma=5), "sigma"),
    ],
)
def test_cable_params_validation(kwargs, msg):
    with pytest.raises(InvalidParams, match=msg):
        CableParams(**kwargs)


def test_json_roundtrip():
    e = cable_skein(CableParams(3, 2, 3, 1))
    assert SkeinElement.from_json(e.to_json()) == e
