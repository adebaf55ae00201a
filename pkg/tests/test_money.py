from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pennytax.money import (
    Money,
    MoneyError,
    RoundingRegime,
    delta_table,
    expected_delta,
    residue_delta,
    round_bill,
    rounding_delta,
)

N5, N10, NONE = RoundingRegime.NEAREST5, RoundingRegime.NEAREST10, RoundingRegime.NONE


@pytest.mark.parametrize("bill, regime, rounded", [
    ("9.42", N5, "9.40"),
    ("9.45", N5, "9.45"),
    ("9.48", N5, "9.50"),
    ("9.42", N10, "9.40"),
    ("9.45", N10, "9.50"),
    ("9.48", N10, "9.50"),
])
def test_worked_bills(bill, regime, rounded):
    assert round_bill(Money.from_nis(bill), regime) == Money.from_nis(rounded)


def test_truth_tables():
    assert delta_table(N10) == (0, -1, -2, -3, -4, 5, 4, 3, 2, 1)
    assert delta_table(N5) == (0, -1, -2, 2, 1)
    assert delta_table(NONE) == (0,)
    for r in range(10):
        assert residue_delta(r, N10) == (-r if r <= 4 else 10 - r)


def test_expected_delta_uniform():
    # uniform last digit: (-1-2-3-4+5+4+3+2+1)/10
    assert expected_delta([Fraction(1, 10)] * 10, N10) == Fraction(1, 2)
    assert expected_delta([Fraction(1, 5)] * 5, N5) == 0


def test_money_parsing_and_arithmetic():
    m = Money.from_nis("12.34")
    assert m.agorot == 1234 and m.ending == 34
    assert str(m) == "12.34"
    assert m.to_nis() == Decimal("12.34")
    assert (m + Money(6)).agorot == 1240
    assert (m - Money(1300)).agorot == -66
    assert (m * 3).agorot == 3702
    assert -Money(5) == Money(-5)
    assert Money(1) < Money(2)
    with pytest.raises(MoneyError):
        Money.from_nis("1.005")


def test_negative_bill_rejected():
    with pytest.raises(MoneyError):
        round_bill(Money(-3), N10)


def test_parse():
    assert RoundingRegime.parse("nearest10") is N10
    with pytest.raises(ValueError):
        RoundingRegime.parse("nearest3")


@given(st.integers(0, 10**9), st.sampled_from(list(RoundingRegime)))
def test_rounded_bill_is_coin_multiple(a, regime):
    g = regime.granularity
    r = round_bill(Money(a), regime).agorot
    assert r % g == 0
    assert abs(r - a) <= g // 2
    assert round_bill(Money(r), regime).agorot == r


@given(st.integers(0, 10**9), st.integers(0, 10**6), st.sampled_from(list(RoundingRegime)))
def test_delta_depends_only_on_residue(a, k, regime):
    g = regime.granularity
    assert rounding_delta(Money(a), regime) == rounding_delta(Money(a + k * g), regime)
    assert rounding_delta(Money(a), regime).agorot == residue_delta(a % g, regime)
