"""Exact arithmetic in Q(sqrt(2))."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cahnallen.qfield import Radical2, Rational, rational_sqrt

fractions = st.fractions(
    min_value=-100, max_value=100, max_denominator=50
)
radicals = st.builds(Radical2, fractions, fractions)


def test_rational_is_reduced_with_positive_denominator():
    q = Rational(6, -8)
    assert q.numerator == -3 and q.denominator == 4
    assert math.gcd(abs(q.numerator), q.denominator) == 1
    assert Rational(2, 4) + Rational(1, 4) == Rational(3, 4)
    assert Rational(1, 3) * 3 == 1


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-1)) is None
    assert rational_sqrt(Fraction(0)) == 0


def test_radical_basic_arithmetic():
    s2 = Radical2.sqrt2()
    assert s2 * s2 == Radical2.of(2)
    assert (Radical2.of(1) + s2) * (Radical2.of(1) - s2) == Radical2.of(-1)
    assert float(s2) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert Radical2(Fraction(1, 2), Fraction(3, 4)) - Radical2(
        Fraction(1, 2), Fraction(3, 4)
    ) == Radical2.of(0)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(radicals)
def test_conjugate_identity(v):
    prod = v * v.conj()
    assert prod.s == 0
    assert prod.r == v.norm()


@settings(max_examples=200, deadline=None, derandomize=True)
@given(radicals)
def test_inverse(v):
    if not v:
        with pytest.raises(ZeroDivisionError):
            v.inverse()
    else:
        assert v * v.inverse() == Radical2.of(1)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(radicals, radicals)
def test_field_distributivity(a, b):
    c = Radical2(Fraction(2, 3), Fraction(-1, 5))
    assert (a + b) * c == a * c + b * c


def test_exact_sqrt_in_field():
    assert Radical2.of(72).sqrt() == Radical2.sqrt2(6)
    assert Radical2.of(18).sqrt() == Radical2.sqrt2(3)
    assert Radical2.of(Fraction(9, 2)).sqrt() == Radical2.sqrt2(Fraction(3, 2))
    assert Radical2.of(4).sqrt() == Radical2.of(2)
    assert Radical2.of(3).sqrt() is None
    # (1 + sqrt2)**2 = 3 + 2*sqrt2
    assert Radical2(Fraction(3), Fraction(2)).sqrt() == Radical2(
        Fraction(1), Fraction(1)
    )


@settings(max_examples=200, deadline=None, derandomize=True)
@given(radicals)
def test_sqrt_of_square_roundtrip(v):
    root = (v * v).sqrt()
    assert root is not None
    assert root * root == v * v
    assert float(root) >= 0


def test_pow_and_division():
    v = Radical2(Fraction(1), Fraction(1))
    assert v**0 == Radical2.of(1)
    assert v**3 == v * v * v
    assert v**-2 == (v * v).inverse()
    assert (Radical2.of(3) / Radical2.sqrt2()) == Radical2.sqrt2(Fraction(3, 2))


def test_text_form():
    assert str(Radical2.of(0)) == "0"
    assert str(Radical2.of(Fraction(-3, 2))) == "-3/2"
    assert str(Radical2.sqrt2()) == "sqrt2"
    assert str(Radical2.sqrt2(Fraction(-3, 2))) == "-3*sqrt2/2"
    assert str(Radical2(Fraction(1), Fraction(1))) == "1 + sqrt2"
    assert str(Radical2(Fraction(1, 2), Fraction(-1, 4))) == "1/2 - sqrt2/4"
