"""Exact agorot arithmetic and the Israeli cash-rounding regimes.

All amounts are integers in agorot (1 NIS = 100 agorot). Nothing in this
module touches floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import total_ordering

AGOROT_PER_NIS = 100


class MoneyError(ValueError):
    """Raised for invalid money values or rounding inputs."""


@total_ordering
@dataclass(frozen=True, slots=True)
class Money:
    """A signed integer amount of agorot."""

    agorot: int

    def __post_init__(self) -> None:
        if isinstance(self.agorot, bool) or not isinstance(self.agorot, int):
            raise MoneyError(f"agorot must be an int, got {type(self.agorot).__name__}")

    @classmethod
    def from_nis(cls, value: str | int | Decimal) -> Money:
        """Parse a shekel amount such as ``"9.42"``; more than two decimals is an error."""
        try:
            d = Decimal(str(value))
        except InvalidOperation as exc:
            raise MoneyError(f"not a NIS amount: {value!r}") from exc
        scaled = d * AGOROT_PER_NIS
        if scaled != scaled.to_integral_value():
            raise MoneyError(f"{value!r} has sub-agora precision")
        return cls(int(scaled))

    def to_nis(self) -> Decimal:
        return Decimal(self.agorot) / AGOROT_PER_NIS

    @property
    def ending(self) -> int:
        """Agorot part of the price (two rightmost digits)."""
        return self.agorot % AGOROT_PER_NIS

    def __add__(self, other: Money) -> Money:
        if not isinstance(other, Money):
            return NotImplemented
        return Money(self.agorot + other.agorot)

    def __sub__(self, other: Money) -> Money:
        if not isinstance(other, Money):
            return NotImplemented
        return Money(self.agorot - other.agorot)

    def __neg__(self) -> Money:
        return Money(-self.agorot)

    def __mul__(self, k: int) -> Money:
        # scaling by a count only; Money * Money has no meaning
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return Money(self.agorot * k)

    __rmul__ = __mul__

    def __lt__(self, other: Money) -> bool:
        if not isinstance(other, Money):
            return NotImplemented
        return self.agorot < other.agorot

    def __str__(self) -> str:
        sign = "-" if self.agorot < 0 else ""
        whole, part = divmod(abs(self.agorot), AGOROT_PER_NIS)
        return f"{sign}{whole}.{part:02d}"


class RoundingRegime(enum.Enum):
    """Cash-bill rounding rule in force."""

    NEAREST5 = "nearest5"  # 1991-2008
    NEAREST10 = "nearest10"  # 2008-2014
    NONE = "none"  # card payments, or after 2014

    @property
    def granularity(self) -> int:
        return _GRANULARITY[self]

    @classmethod
    def parse(cls, text: str) -> RoundingRegime:
        try:
            return cls(text.strip().lower())
        except ValueError:
            choices = ", ".join(r.value for r in cls)
            raise MoneyError(f"unknown regime {text!r} (expected one of {choices})") from None


_GRANULARITY = {
    RoundingRegime.NEAREST5: 5,
    RoundingRegime.NEAREST10: 10,
    RoundingRegime.NONE: 1,
}


def residue_delta(residue: int, regime: RoundingRegime) -> int:
    """Rounding adjustment for a bill whose remainder modulo the granularity is ``residue``."""
    g = regime.granularity
    if not 0 <= residue < g:
        raise MoneyError(f"residue {residue} out of range for {regime.value}")
    if residue == 0:
        return 0
    if regime is RoundingRegime.NEAREST5:
        # 1,2 down; 3,4 up
        return -residue if residue <= 2 else g - residue
    # NEAREST10: 1-4 down, 5-9 up (asymmetric)
    return -residue if residue <= 4 else g - residue


def delta_table(regime: RoundingRegime) -> tuple[int, ...]:
    """Adjustment for every residue ``0..granularity-1``."""
    return tuple(residue_delta(r, regime) for r in range(regime.granularity))


def _amount(amount: Money | int) -> int:
    if isinstance(amount, Money):
        a = amount.agorot
    elif isinstance(amount, int) and not isinstance(amount, bool):
        a = amount
    else:
        raise MoneyError(f"expected Money, got {type(amount).__name__}")
    if a < 0:
        raise MoneyError(f"cannot round a negative bill ({a} agorot)")
    return a


def rounding_delta(amount: Money | int, regime: RoundingRegime) -> Money:
    """Extra agorot the consumer pays in cash; negative when the bill rounds down."""
    a = _amount(amount)
    return Money(residue_delta(a % regime.granularity, regime))


def round_bill(amount: Money | int, regime: RoundingRegime) -> Money:
    """Round a nonnegative cash bill under ``regime``."""
    a = _amount(amount)
    return Money(a + residue_delta(a % regime.granularity, regime))


def expected_delta(residue_mass: dict[int, Fraction] | list[Fraction], regime: RoundingRegime) -> Fraction:
    """Exact expected adjustment given a distribution over bill residues."""
    items = residue_mass.items() if isinstance(residue_mass, dict) else enumerate(residue_mass)
    table = delta_table(regime)
    return sum((Fraction(m) * table[r] for r, m in items), Fraction(0))
