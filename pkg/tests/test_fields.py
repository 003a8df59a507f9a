import pytest
from fractions import Fraction

from danielewski import GF, QQ, Scalar, parse_field_tag
from danielewski.errors import FieldMismatchError


def test_characteristics():
    assert QQ.characteristic() == 0
    assert GF(7).characteristic() == 7


def test_modulus_must_be_prime():
    with pytest.raises(ValueError):
        GF(6)
    with pytest.raises(ValueError):
        GF(1)
    GF(2147483647)  # largest prime below 2**31


def test_field_tags():
    assert QQ.tag() == "Q"
    assert GF(97).tag() == "F97"
    assert parse_field_tag("Q") == QQ
    assert parse_field_tag("F2") == GF(2)
    with pytest.raises(ValueError):
        parse_field_tag("F")
    with pytest.raises(ValueError):
        parse_field_tag("R")


def test_rational_arithmetic_is_exact():
    a = Scalar(QQ, Fraction(1, 3))
    b = Scalar(QQ, Fraction(1, 6))
    assert a + b == Fraction(1, 2)
    assert a * 3 == 1
    assert (a / b).value == 2
    assert -a == Fraction(-1, 3)
    assert a ** 3 == Fraction(1, 27)


def test_prime_field_residues_are_canonical():
    a = Scalar(GF(5), 7)
    assert a.value == 2
    assert a + 4 == 1
    assert (a / 3).value == 4  # 2 * inv(3) = 2 * 2
    assert Scalar(GF(5), -1).value == 4


def test_rational_literal_in_prime_field():
    assert Scalar(GF(5), Fraction(1, 2)).value == 3
    with pytest.raises(ZeroDivisionError):
        Scalar(GF(5), Fraction(1, 5))


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        Scalar(QQ, 1) / Scalar(QQ, 0)
    with pytest.raises(ZeroDivisionError):
        Scalar(GF(3), 1) / Scalar(GF(3), 0)


def test_field_mismatch_rejected():
    with pytest.raises(FieldMismatchError):
        Scalar(QQ, 1) + Scalar(GF(3), 1)


def test_equality_is_structural():
    assert Scalar(QQ, Fraction(2, 4)) == Scalar(QQ, Fraction(1, 2))
    assert Scalar(GF(3), 5) == Scalar(GF(3), 2)
    assert Scalar(QQ, 1) != Scalar(GF(3), 1)
    assert hash(Scalar(QQ, Fraction(2, 4))) == hash(Scalar(QQ, Fraction(1, 2)))
