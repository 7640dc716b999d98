"""Wire format for exact rationals."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from monothetic.rat import format_fraction, parse_fraction


@given(st.integers(-10**12, 10**12), st.integers(1, 10**12))
def test_roundtrip(num, den):
    value = Fraction(num, den)
    assert parse_fraction(format_fraction(value)) == value


def test_explicit_denominator_always_emitted():
    assert format_fraction(Fraction(3)) == "3/1"
    assert format_fraction(Fraction(-1, 2)) == "-1/2"


def test_bare_integers_accepted():
    assert parse_fraction("7") == 7
    assert parse_fraction("-4") == -4


@pytest.mark.parametrize("bad", ["1/0", "1/-2", "a/b", "1/2/3", "", "0.5"])
def test_malformed_rejected(bad):
    with pytest.raises(ValueError):
        parse_fraction(bad)


def test_non_string_rejected():
    with pytest.raises(ValueError):
        parse_fraction(0.5)
