from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kforms import QQ, FieldSpec, Scalar, field_arith, nth_root_of_unity
from kforms.errors import DivisionByZero, FieldMismatch, NotFound, ParseError
from kforms.scalar import is_prime


def test_parse_field_strings():
    assert FieldSpec.parse("q") == QQ
    assert FieldSpec.parse(" FP:7 ") == FieldSpec.prime(7)
    assert str(FieldSpec.parse("fp:1000003")) == "fp:1000003"
    for bad in ("fp:8", "fp:x", "r", "fp:1", ""):
        with pytest.raises(ParseError):
            FieldSpec.parse(bad)
    with pytest.raises(ValueError):
        FieldSpec.prime(2**31 + 11)


def test_is_prime_matches_trial_division():
    def slow(n):
        return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))

    assert [n for n in range(3000) if is_prime(n)] == [n for n in range(3000) if slow(n)]
    assert is_prime(2**31 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_literals_round_trip():
    F7 = FieldSpec.prime(7)
    assert F7.literal(F7.parse_literal("3/4")) == "6"
    assert F7.literal(F7("-1")) == "6"
    assert QQ.literal(QQ.parse_literal("-6/8")) == "-3/4"
    with pytest.raises(ParseError):
        QQ.parse_literal("1/0")
    with pytest.raises(ParseError):
        QQ.parse_literal("one")
    with pytest.raises(DivisionByZero):
        F7(Fraction(1, 7))


def test_scalar_wrapper():
    F = FieldSpec.prime(11)
    a, b = F.scalar(3), F.scalar(5)
    assert a + b == 8
    assert a * b == 4
    assert a / b == F.scalar(3) * b.inv()
    assert (a**-1) * a == 1
    assert str(-a) == "8"
    with pytest.raises(DivisionByZero):
        a / 0
    with pytest.raises(FieldMismatch):
        a + QQ.scalar(1)
    assert field_arith(a, b, "sub") == F.scalar(9)
    assert field_arith(a, None, "neg") == F.scalar(8)
    with pytest.raises(FieldMismatch):
        field_arith(a, Scalar(FieldSpec.prime(13), FieldSpec.prime(13)(1)), "add")


def test_roots_of_unity():
    z = nth_root_of_unity(19, 9)
    assert z**9 == 1 and z**3 != 1
    assert nth_root_of_unity(7, 1) == 1
    with pytest.raises(NotFound):
        nth_root_of_unity(7, 9)


def test_sqrt():
    F = FieldSpec.prime(10007)
    for x in range(1, 200):
        r = F.sqrt(F(x * x))
        assert r * r == F(x * x)
    non_residues = [x for x in range(2, 50) if pow(x, (10007 - 1) // 2, 10007) != 1]
    assert non_residues and all(F.sqrt(F(x)) is None for x in non_residues)
    assert QQ.sqrt(QQ(Fraction(9, 4))) == QQ(Fraction(3, 2))
    assert QQ.sqrt(QQ(2)) is None and QQ.sqrt(QQ(-4)) is None


small = st.integers(-10**6, 10**6)


@settings(max_examples=200, deadline=None)
@given(small, small, st.integers(1, 10**6), st.sampled_from([2, 3, 101, 1000003]))
def test_prime_field_arithmetic_matches_integers(a, b, c, p):
    F = FieldSpec.prime(p)
    x, y = F.scalar(a), F.scalar(b)
    assert int((x * y + x - y).value) == (a * b + a - b) % p
    if c % p:
        assert int((x / F.scalar(c)).value) == a * pow(c, p - 2, p) % p


@settings(max_examples=200, deadline=None)
@given(small, st.integers(1, 1000), small, st.integers(1, 1000))
def test_rational_arithmetic_matches_fraction(a, b, c, d):
    x, y = QQ.scalar(Fraction(a, b)), QQ.scalar(Fraction(c, d))
    expect = Fraction(a, b) * Fraction(c, d) - Fraction(a, b)
    assert QQ.literal((x * y - x).value) == str(expect)
