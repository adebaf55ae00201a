"""National rounding-tax totals and the extreme cash-share scenarios.

Everything here is exact rational arithmetic; rounding to whole shekels happens
only when a table is printed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .distributions import REVENUE_SHARE_TOL, StoreProfile, StoreType

SCENARIO_TOL = Fraction(1, 10**9)


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class StoreInputs:
    """What the aggregation needs per store type: avg tax (agorot), transactions, revenue weight."""

    store_type: StoreType
    avg_tax_agorot: Fraction
    transactions: int
    revenue_share: Fraction

    @property
    def value(self) -> Fraction:
        """Total tax if every transaction were cash, in agorot."""
        return self.avg_tax_agorot * self.transactions


@dataclass(frozen=True)
class CashShareScenario:
    shares: dict[StoreType, Fraction]
    aggregate_target: Fraction


@dataclass(frozen=True)
class StoreTaxRow:
    store_type: StoreType
    avg_tax_agorot: Fraction
    transactions: int
    cash_share: Fraction
    total_agorot: Fraction

    @property
    def total_nis(self) -> Fraction:
        return self.total_agorot / 100


@dataclass(frozen=True)
class TaxTable:
    rows: tuple[StoreTaxRow, ...]

    @property
    def grand_total_agorot(self) -> Fraction:
        return sum((r.total_agorot for r in self.rows), Fraction(0))

    @property
    def grand_total_nis(self) -> Fraction:
        return self.grand_total_agorot / 100

    def row(self, store_type: StoreType) -> StoreTaxRow:
        for r in self.rows:
            if r.store_type is store_type:
                return r
        raise KeyError(store_type)


def store_inputs(profiles: Sequence[StoreProfile], avg_taxes: Mapping[StoreType, Fraction]) -> list[StoreInputs]:
    missing = {p.store_type for p in profiles} ^ set(avg_taxes)
    if missing:
        raise ScenarioError(f"store types do not line up: {sorted(s.value for s in missing)}")
    return [StoreInputs(p.store_type, Fraction(avg_taxes[p.store_type]), p.annual_transactions, p.revenue_share)
            for p in sorted(profiles, key=lambda p: p.store_type.order)]


def _check_scenario(stores: Sequence[StoreInputs], scenario: CashShareScenario) -> None:
    if set(scenario.shares) != {s.store_type for s in stores}:
        raise ScenarioError("scenario shares and stores do not line up")
    for st, s in scenario.shares.items():
        if not 0 <= s <= 1:
            raise ScenarioError(f"cash share for {st.value} outside [0, 1]")
    agg = sum((s.revenue_share * scenario.shares[s.store_type] for s in stores), Fraction(0))
    if abs(agg - scenario.aggregate_target) > SCENARIO_TOL:
        raise ScenarioError(f"revenue-weighted cash share {float(agg):.9f} != target {float(scenario.aggregate_target)}")


def tax_table(stores: Sequence[StoreInputs], scenario: CashShareScenario) -> TaxTable:
    _check_scenario(stores, scenario)
    rows = tuple(
        StoreTaxRow(s.store_type, s.avg_tax_agorot, s.transactions, scenario.shares[s.store_type],
                    s.value * scenario.shares[s.store_type])
        for s in stores
    )
    return TaxTable(rows)


def total_tax(profiles: Sequence[StoreProfile], avg_taxes: Mapping[StoreType, Fraction],
              scenario: CashShareScenario) -> TaxTable:
    """Per-store total = average tax x annual transactions x cash share."""
    return tax_table(store_inputs(profiles, avg_taxes), scenario)


def equal_shares(stores: Sequence[StoreInputs], target: Fraction) -> CashShareScenario:
    total_w = sum((s.revenue_share for s in stores), Fraction(0))
    if abs(total_w - 1) > REVENUE_SHARE_TOL:
        raise ScenarioError("equal shares need revenue shares summing to 1")
    return CashShareScenario({s.store_type: Fraction(target) for s in stores}, Fraction(target) * total_w)


def _greedy(stores: Sequence[StoreInputs], target: Fraction, maximize: bool) -> dict[StoreType, Fraction]:
    shares = {s.store_type: Fraction(0) for s in stores}
    free = [s for s in stores if s.revenue_share == 0]
    for s in free:
        # no weight in the constraint: include iff it helps the objective
        shares[s.store_type] = Fraction(1) if (s.value > 0) == maximize and s.value != 0 else Fraction(0)
    weighted = [s for s in stores if s.revenue_share > 0]
    sign = -1 if maximize else 1
    weighted.sort(key=lambda s: (sign * (s.value / s.revenue_share), s.store_type.order))
    remaining = Fraction(target)
    for s in weighted:
        if remaining <= 0:
            break
        take = min(Fraction(1), remaining / s.revenue_share)
        shares[s.store_type] = take
        remaining -= take * s.revenue_share
    return shares


def extreme_scenarios(stores: Sequence[StoreInputs], aggregate_target: Fraction
                      ) -> tuple[tuple[CashShareScenario, TaxTable], tuple[CashShareScenario, TaxTable]]:
    """Cash shares that maximise and minimise the national rounding tax.

    One linear constraint (revenue-weighted cash share equals the target) with
    box bounds, so greedy filling by value per unit of revenue weight is
    optimal and leaves at most one store strictly between 0 and 1. Equal ratios
    are filled in the fixed store order.
    """
    target = Fraction(aggregate_target)
    capacity = sum((s.revenue_share for s in stores), Fraction(0))
    if abs(capacity - 1) > REVENUE_SHARE_TOL:
        raise ScenarioError(f"revenue shares sum to {float(capacity):.12g}, not 1")
    if not 0 <= target <= capacity:
        raise ScenarioError(f"aggregate cash share {float(target)} infeasible (must lie in [0, {float(capacity)}])")
    out = []
    for maximize in (True, False):
        scenario = CashShareScenario(_greedy(stores, target, maximize), target)
        out.append((scenario, tax_table(stores, scenario)))
    return out[0], out[1]


def round_nis(x: Fraction) -> int:
    """Whole shekels, half away from zero (presentation only)."""
    q, r = divmod(abs(x), 1)
    n = int(q) + (1 if r >= Fraction(1, 2) else 0)
    return n if x >= 0 else -n
