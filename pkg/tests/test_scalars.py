from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from formal_hecke.errors import ParseError
from formal_hecke.scalars import ONE, ZERO, Q, RationalFunction, ScalarField, pole_free_at

import oracle


def test_rational_coercion():
    assert Q(3) == Q("3")
    assert Q(Fraction(2, 3)) == Q("2/3") == Q(2, 3)
    with pytest.raises(ParseError):
        Q("two")


def test_constants_demote_to_rationals():
    F = ScalarField(("b",))
    b = F.gen("b")
    assert isinstance(b, RationalFunction)
    assert (b - b) == ZERO
    assert (b / b) == ONE
    assert not isinstance(b * b.inverse(), RationalFunction)


def test_parse_and_poles():
    F = ScalarField(("b", "mu"))
    mu = F.gen("mu")
    assert F.parse("b") == F.gen("b")
    assert F.parse("1/2") == Q(1, 2)
    theta = mu - ONE / mu
    assert pole_free_at(theta, "mu", 1)
    assert not pole_free_at(ONE / (mu - 1), "mu", 1)
    assert theta.subs({"mu": 2}) == Q(3, 2)
    with pytest.raises(ParseError):
        ScalarField(("not a name",))


fracs = st.fractions(min_value=-5, max_value=5, max_denominator=5)


@given(fracs, fracs, fracs)
def test_field_arithmetic_matches_sympy(p, q, r):
    F = ScalarField(("b",))
    b = F.gen("b")
    e = (b * Q(p) + Q(q)) * (b - Q(r)) + ONE / (b + 7)
    sb = sp.Symbol("b")
    want = (sb * sp.Rational(p) + sp.Rational(q)) * (sb - sp.Rational(r)) + 1 / (sb + 7)
    got = oracle.rat(e) if isinstance(e, RationalFunction) else sp.Rational(str(e))
    assert sp.simplify(got.subs("b", sb) - want) == 0
