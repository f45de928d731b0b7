from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itazrp.polyring import (
    DimensionError,
    NotDivisible,
    NotHomogeneous,
    Polynomial,
    add,
    evaluate,
    exact_div_var,
    homogeneous_degree,
    mul,
)

w1, w2, w3 = Polynomial.variables(3)
v1, v2 = Polynomial.variables(2)


def test_add_examples():
    assert add(v1 + v2, v2) == v1 + 2 * v2
    p = v1 * v2 + 3
    assert p + Polynomial.zero(2) == p
    assert str(v2**2 + v1 * v2) == "w1*w2+w2^2"


def test_mul_examples():
    assert mul(w1 + w2, w1 + w2 + w3) == Polynomial.parse("w1^2+2*w1*w2+w2^2+w1*w3+w2*w3", 3)
    assert (w1 + w3) * 1 == w1 + w3
    assert w2 * w2 == w2**2


def test_exact_division():
    assert exact_div_var(w2**2 * w3, 3) == w2**2
    assert (v1 * v2 + v2**2).div_var(2) == v1 + v2
    with pytest.raises(NotDivisible):
        (v1 + v2).div_var(2)


def test_evaluate():
    assert evaluate(v1**2 + v1 * v2 + v2**2, (1, 1)) == 3
    assert ((w1 + w2) * (w1 + w2 + w3)).evaluate((1, 1, 1)) == 6
    assert (v2**2).evaluate((1, 2)) == 4
    assert (v1 * v2).evaluate((Fraction(1, 2), 3)) == Fraction(3, 2)


def test_homogeneous_degree():
    assert homogeneous_degree(v1**2 + v1 * v2 + v2**2) == 2
    x = Polynomial.variables(4)
    assert (x[0] * x[1]**3 * x[2]**2 * x[3]**3).homogeneous_degree() == 9
    assert (v1 + v2**2).homogeneous_degree() is NotHomogeneous
    with pytest.raises(ValueError):
        Polynomial.zero(2).homogeneous_degree()


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        v1 + w1
    with pytest.raises(DimensionError):
        v1 * w1
    with pytest.raises(DimensionError):
        Polynomial(2, {(1, 0, 0): 1})


def test_no_zero_coefficients_stored():
    p = (v1 + v2) - v2
    assert p.terms == {(1, 0): 1}
    assert not (v1 - v1)


def test_text_roundtrip_and_order():
    p = (w1 + w2)**3 - 7 * w3 + 2
    text = str(p)
    assert text.startswith("w1^3+3*w1^2*w2")
    assert Polynomial.parse(text, 3) == p
    assert str(Polynomial.zero(2)) == "0"
    assert str(-v1 + v2) == "-w1+w2"


@pytest.mark.parametrize("bad", ["w1+", "2w1", "w1**2", "w4", "", "x1"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        Polynomial.parse(bad, 3)


def test_json_roundtrip():
    p = 5 * w1**2 * w3 - w2 + 12345678901234567890
    data = p.to_json()
    assert data[0] == {"exps": [2, 0, 1], "coeff": "5"}
    assert Polynomial.from_json(data, 3) == p


def test_embed():
    assert (v1 * v2).embed(3) == w1 * w2
    with pytest.raises(DimensionError):
        w1.embed(2)


exps = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(exps, st.integers(-50, 50), max_size=20).map(lambda d: Polynomial(3, d))
points = st.tuples(*[st.fractions(min_value=-3, max_value=3, max_denominator=5)] * 3)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@settings(max_examples=60, deadline=None)
@given(polys, st.integers(1, 3))
def test_division_roundtrip(p, a):
    assert (p * Polynomial.var(a, 3)).div_var(a) == p
    assert p.times_var(a) == p * Polynomial.var(a, 3)


@settings(max_examples=60, deadline=None)
@given(polys, polys, points)
def test_evaluation_is_a_homomorphism(p, q, w):
    assert (p * q).evaluate(w) == p.evaluate(w) * q.evaluate(w)
    assert (p + q).evaluate(w) == p.evaluate(w) + q.evaluate(w)
