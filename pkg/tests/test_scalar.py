from fractions import Fraction

import pytest
from hypothesis import given

from nilherm.scalar import I, ONE, ZERO, Scalar, as_scalar

from strategies import scalars


def test_basic_arithmetic():
    a = Scalar(Fraction(1, 2), 3)
    b = Scalar(-1, Fraction(1, 4))
    assert a + b == Scalar(Fraction(-1, 2), Fraction(13, 4))
    assert a * b == Scalar(Fraction(-1, 2) - Fraction(3, 4), Fraction(1, 8) - 3)
    assert I * I == -ONE
    assert (a / b) * b == a


def test_normalization_and_hash():
    assert Scalar.raw(2, 4, 4) == Scalar(Fraction(1, 2), 1)
    assert hash(Scalar(Fraction(3, 6))) == hash(Fraction(1, 2))
    assert Scalar.raw(0, 0, 7).is_zero()


def test_parse_and_str():
    for text in ("3/4", "-2i", "1/2+3/4i", "-1-i", "i"):
        s = Scalar.parse(text)
        assert Scalar.parse(str(s)) == s
    assert Scalar.parse("1/2-3/4i") == Scalar(Fraction(1, 2), Fraction(-3, 4))
    with pytest.raises(ValueError):
        Scalar.parse("")


def test_sign_only_for_real():
    assert Scalar(-3).sign() == -1
    assert ZERO.sign() == 0
    with pytest.raises(ValueError):
        I.sign()


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_as_scalar():
    assert as_scalar(2) == Scalar(2)
    assert as_scalar(Fraction(1, 3)) == Scalar(Fraction(1, 3))


@given(scalars, scalars)
def test_field_axioms(a, b):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if not b.is_zero():
        assert (a / b) * b == a


@given(scalars)
def test_conjugation_negates_imaginary_part(a):
    assert a.conjugate().imag == -a.imag
    assert a.conjugate().conjugate() == a
    assert (a * a.conjugate()).is_real()
