import json
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmvp.exprcore import ContextError, ExpPoly, QuadCoeff, as_fraction, determinant

S = F(2)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)
quads = st.builds(lambda p, q: QuadCoeff(p, q, S), fractions, fractions)
keys = st.tuples(st.integers(0, 3), st.integers(-2, 2))
exppolys = st.dictionaries(keys, quads, max_size=4).map(lambda d: ExpPoly(d, S))
polys = st.dictionaries(st.tuples(st.integers(0, 4), st.just(0)), fractions, max_size=4) \
    .map(lambda d: ExpPoly(d, 0))


def test_as_fraction_uses_shortest_repr():
    assert as_fraction(0.3) == F(3, 10)
    assert as_fraction("5/7") == F(5, 7)
    with pytest.raises(ValueError):
        as_fraction(float("nan"))


def test_quadcoeff_arithmetic():
    a = QuadCoeff(1, 1, 2)
    b = QuadCoeff(1, -1, 2)
    assert a * b == QuadCoeff(-1, 0, 2)
    lam = QuadCoeff.lam(1)
    assert lam.inverse() == QuadCoeff(0, 1, 1)
    assert QuadCoeff.lam(3) ** 2 == 3
    assert (a / a) == 1
    with pytest.raises(ZeroDivisionError):
        QuadCoeff(0, 0, 2).inverse()
    with pytest.raises(ValueError):
        QuadCoeff(1, 1, 0)
    with pytest.raises(ContextError):
        QuadCoeff(1, 0, 2) + QuadCoeff(1, 0, 3)


def test_quadcoeff_norm_zero_is_not_invertible():
    # p^2 - q^2 s = 0 is impossible for s non-square, but s = 4 has lam = 2 rational
    c = QuadCoeff(2, -1, 4)
    assert c.norm() == 0
    with pytest.raises(ZeroDivisionError):
        c.inverse()


def test_ring_examples():
    xi = ExpPoly.xi()
    assert (xi + 1) * (xi - 1) == ExpPoly.poly([-1, 0, 1])
    one_plus = ExpPoly.const(QuadCoeff(1, 1, 2), 2)
    one_minus = ExpPoly.const(QuadCoeff(1, -1, 2), 2)
    assert one_plus * one_minus == ExpPoly.const(-1, 2)
    num = ExpPoly.monomial(3, 2, 2, 1)
    den = ExpPoly.monomial(QuadCoeff.lam(1), 0, 2, 1)
    assert num / den == ExpPoly.monomial(QuadCoeff(0, 3, 1), 2, 0, 1)


def test_divide_errors():
    f = ExpPoly.poly([1, 1])
    with pytest.raises(ValueError):
        f.divide_monomial(ExpPoly.poly([1, 1]))
    with pytest.raises(ValueError):
        f.divide_monomial(ExpPoly.xi())
    with pytest.raises(ContextError):
        ExpPoly.xi(1) + ExpPoly.xi(2)
    with pytest.raises(ValueError):
        ExpPoly.monomial(1, 0, 1, 0)


def test_differentiate_examples():
    s = F(3)
    lam = QuadCoeff.lam(s)
    f = ExpPoly.monomial(1, 2, 2, s)
    assert f.differentiate() == ExpPoly({(1, 2): 2, (2, 2): lam * 2}, s)
    c = F(5, 2)
    assert ExpPoly.monomial(c, 0, -1, s).differentiate() == ExpPoly.monomial(-lam * c, 0, -1, s)
    assert ExpPoly.const(5).differentiate() == 0
    assert ExpPoly.poly([0, 0, 0, 1]).differentiate(4).is_zero()


def test_antiderivative_examples():
    assert ExpPoly.xi().antiderivative() == ExpPoly.monomial(F(1, 2), 2)
    assert ExpPoly.monomial(1, 0, 1, 1).antiderivative() == ExpPoly.monomial(QuadCoeff(0, 1, 1), 0, 1, 1)
    g = ExpPoly.monomial(1, 1, 1, 1).antiderivative()
    # (xi - 1) e^{lam xi} once lam = 1 numerically
    for x in (-1.0, 0.0, 2.0):
        assert g.evaluate(x) == pytest.approx((x - 1) * math.exp(x), rel=1e-14)
    assert g.differentiate() == ExpPoly.monomial(1, 1, 1, 1)


def test_evaluate_examples():
    assert ExpPoly.monomial(2, 1).evaluate(3) == 6
    f = ExpPoly.monomial(QuadCoeff(1, 1, 1), 0, 1, 1)
    assert f.evaluate(0, 1.0) == 2
    assert ExpPoly.monomial(F(-1, 6), 0, -2, 1).evaluate(0) == pytest.approx(-1 / 6)
    with pytest.raises(ValueError):
        f.evaluate(0, 1.1)


def test_json_roundtrip_and_order():
    f = ExpPoly({(0, 1): QuadCoeff(1, F(2, 3), 2), (2, -1): 5, (1, 0): F(-1, 7)}, 2)
    text = f.to_json()
    assert ExpPoly.from_json(text) == f
    rec = json.loads(text)
    assert [(t["n"], t["m"]) for t in rec["terms"]] == sorted((t["n"], t["m"]) for t in rec["terms"])
    assert rec["context"] == {"s_den": 1, "s_num": 2}


def test_determinant_small():
    a = [[ExpPoly.const(1), ExpPoly.const(2)], [ExpPoly.const(3), ExpPoly.const(4)]]
    assert determinant(a) == -2


def test_immutability():
    f = ExpPoly.xi()
    with pytest.raises(AttributeError):
        f.s = 3
    with pytest.raises(AttributeError):
        QuadCoeff(1).p = 2


@settings(max_examples=60, deadline=None)
@given(exppolys, exppolys, exppolys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert (a - a).terms == {}


@settings(max_examples=60, deadline=None)
@given(exppolys)
def test_derivative_inverts_antiderivative(f):
    assert f.antiderivative().differentiate() == f


@settings(max_examples=60, deadline=None)
@given(polys)
def test_derivative_inverts_antiderivative_polynomial(f):
    assert f.antiderivative().differentiate() == f


@settings(max_examples=60, deadline=None)
@given(exppolys, exppolys, st.floats(-1.5, 1.5))
def test_evaluate_is_homomorphic(a, b, x):
    prod = (a * b).evaluate(x)
    ref = a.evaluate(x) * b.evaluate(x)
    assert prod == pytest.approx(ref, rel=1e-10, abs=1e-10)
    assert (a + b).evaluate(x) == pytest.approx(a.evaluate(x) + b.evaluate(x), rel=1e-10, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(exppolys)
def test_json_roundtrip_property(f):
    assert ExpPoly.from_json(f.to_json()) == f
