"""Price-ending histograms, agorot-per-price statistics and the inattention penalty."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

import numpy as np

from .distributions import STORE_ORDER, PriceObservations, StoreType

GROUP_FIELDS = ("store_type", "year")


class AnalyticsError(ValueError):
    pass


def _group_keys(obs: PriceObservations, group_by: Sequence[str]) -> list[tuple]:
    for g in group_by:
        if g not in GROUP_FIELDS:
            raise AnalyticsError(f"cannot group by {g!r}")
    cols = []
    for g in group_by:
        cols.append(list(obs.store_type) if g == "store_type" else obs.year.tolist())
    return list(zip(*cols)) if cols else [()] * len(obs)


def _sort_key(key: tuple):
    return tuple(k.order if isinstance(k, StoreType) else k for k in key)


def _group_index(obs: PriceObservations, group_by: Sequence[str]) -> dict[tuple, np.ndarray]:
    keys = _group_keys(obs, group_by)
    index: dict[tuple, list[int]] = {}
    for i, k in enumerate(keys):
        index.setdefault(k, []).append(i)
    return {k: np.array(index[k]) for k in sorted(index, key=_sort_key)}


# ------------------------------------------------------------------ histograms


@dataclass(frozen=True)
class EndingHistogram:
    group_by: tuple[str, ...]
    counts: dict[tuple, np.ndarray]  # key -> int64[100]

    def keys(self) -> list[tuple]:
        return list(self.counts)

    def total(self, key: tuple) -> int:
        return int(self.counts[key].sum())

    def shares(self, key: tuple) -> list[Fraction]:
        n = self.total(key)
        return [Fraction(int(c), n) for c in self.counts[key]]

    def segment_counts(self, key: tuple) -> np.ndarray:
        return self.counts[key].reshape(10, 10).sum(axis=1)

    def segment_shares(self, key: tuple) -> list[Fraction]:
        n = self.total(key)
        return [Fraction(int(c), n) for c in self.segment_counts(key)]


def ending_histogram(observations: PriceObservations, group_by: Sequence[str] = GROUP_FIELDS) -> EndingHistogram:
    """Counts of ``price mod 100`` per group; segments are the ten 10-agora bins 00-09 ... 90-99."""
    out = {}
    for key, idx in _group_index(observations, group_by).items():
        out[key] = np.bincount(observations.price_agorot[idx] % 100, minlength=100).astype(np.int64)
    return EndingHistogram(tuple(group_by), out)


def share_in_range(hist: EndingHistogram, lo: int, hi: int) -> dict[tuple, Fraction]:
    """Share of prices with endings in ``lo..hi`` (inclusive) per group."""
    if not 0 <= lo <= hi <= 99:
        raise AnalyticsError(f"bad ending range {lo}..{hi}")
    return {k: Fraction(int(c[lo:hi + 1].sum()), int(c.sum())) for k, c in hist.counts.items()}


def last_digit_share(hist: EndingHistogram, digit: int) -> dict[tuple, Fraction]:
    """Share of prices whose last digit is ``digit`` (e.g. 9-endings) per group."""
    return {k: Fraction(int(c[digit::10].sum()), int(c.sum())) for k, c in hist.counts.items()}


UNDEFINED = None


def segment_change(hist_a: EndingHistogram, hist_b: EndingHistogram,
                   pairs: Mapping[tuple, tuple] | None = None) -> dict[tuple, list[Fraction | None]]:
    """Relative change ``(b - a) / a`` of every 10-agora segment share; ``None`` where ``a`` is zero.

    ``pairs`` maps a key of ``hist_a`` to the key of ``hist_b`` it is compared
    with; by default identical keys are matched.
    """
    if pairs is None:
        if set(hist_a.counts) != set(hist_b.counts):
            raise AnalyticsError("histograms have different groups")
        pairs = {k: k for k in hist_a.counts}
    out = {}
    for ka, kb in pairs.items():
        sa, sb = hist_a.segment_shares(ka), hist_b.segment_shares(kb)
        out[ka] = [UNDEFINED if a == 0 else (b - a) / a for a, b in zip(sa, sb)]
    return out


# ------------------------------------------------------------------ pennies per price


def tenths_half_up(x: Fraction) -> int:
    """Round a value to tenths, half away from zero, returning an integer count of tenths."""
    scaled = abs(x) * 10
    q, r = divmod(scaled, 1)
    n = int(q) + (1 if r >= Fraction(1, 2) else 0)
    return n if x >= 0 else -n


@dataclass(frozen=True)
class PennyStats:
    """Mean agorot part of prices below ``price_cap`` (``None`` = uncapped) per group."""

    price_cap: int | None
    means: dict[Hashable, Fraction]
    counts: dict[Hashable, int]

    def mean_tenths(self, key) -> int:
        return tenths_half_up(self.means[key])

    def select(self, **fixed) -> PennyStats:
        """Keep groups matching e.g. ``year=2021``; keys collapse to store type."""
        if set(fixed) - {"year"}:
            raise AnalyticsError("can only select on year")
        year = fixed["year"]
        means, counts = {}, {}
        for key, m in self.means.items():
            st, y = key
            if y == year:
                means[st] = m
                counts[st] = self.counts[key]
        if not means:
            raise AnalyticsError(f"no groups for year {year}")
        return PennyStats(self.price_cap, means, counts)

    @classmethod
    def published(cls, means: Mapping[StoreType, str | Decimal], price_cap: int | None) -> PennyStats:
        """Stats from a printed table (one decimal); counts unknown."""
        return cls(price_cap, {st: Fraction(str(v)) for st, v in means.items()}, {st: 0 for st in means})


def avg_pennies(observations: PriceObservations, price_cap: int | None,
                group_by: Sequence[str] = GROUP_FIELDS) -> PennyStats:
    """Mean of ``price mod 100`` over prices strictly below ``price_cap`` agorot, per group.

    The cap has no default: capped and uncapped samples give different answers.
    Groups with no price under the cap are dropped with a warning.
    """
    means, counts = {}, {}
    for key, idx in _group_index(observations, group_by).items():
        prices = observations.price_agorot[idx]
        if price_cap is not None:
            prices = prices[prices < price_cap]
        k = key[0] if len(key) == 1 else key
        if prices.size == 0:
            warnings.warn(f"group {key!r} has no prices below the cap; omitted", RuntimeWarning, stacklevel=2)
            continue
        means[k] = Fraction(int((prices % 100).sum()), int(prices.size))
        counts[k] = int(prices.size)
    return PennyStats(price_cap, means, counts)


# ------------------------------------------------------------------ penalty


def units_from_thousands(text: str | int | Decimal) -> int:
    """``"2,685,251.3"`` thousand units -> 2,685,251,300 units (must be a whole number of units)."""
    d = Decimal(str(text).replace(",", "")) * 1000
    if d != d.to_integral_value():
        raise AnalyticsError(f"{text!r} thousand is not a whole number of units")
    return int(d)


@dataclass(frozen=True)
class PenaltyRow:
    store_type: StoreType
    mean_after: Fraction
    mean_before: Fraction
    volume: int

    @property
    def difference(self) -> Fraction:
        return self.mean_after - self.mean_before

    @property
    def total_agorot(self) -> Fraction:
        return self.difference * self.volume

    @property
    def total_nis(self) -> Fraction:
        return self.total_agorot / 100


@dataclass(frozen=True)
class PenaltyTable:
    rows: tuple[PenaltyRow, ...]
    price_cap: int | None
    rounded: bool

    @property
    def grand_total_agorot(self) -> Fraction:
        return sum((r.total_agorot for r in self.rows), Fraction(0))

    @property
    def grand_total_nis(self) -> Fraction:
        return self.grand_total_agorot / 100

    def row(self, store_type: StoreType) -> PenaltyRow:
        for r in self.rows:
            if r.store_type is store_type:
                return r
        raise KeyError(store_type)


def inattention_penalty(stats_after: PennyStats, stats_before: PennyStats, volumes: Mapping[StoreType, int],
                        exact: bool = False) -> PenaltyTable:
    """Extra agorot paid = (mean agorot per price after - before) x units sold, per store type.

    By default means are first rounded to one decimal, as in published
    tables; ``exact=True`` uses the full-precision means. Negative
    differences are kept.
    """
    if stats_after.price_cap != stats_before.price_cap:
        raise AnalyticsError(f"price caps differ: {stats_after.price_cap} vs {stats_before.price_cap}")
    stores = [st for st in STORE_ORDER if st in stats_after.means or st in stats_before.means or st in volumes]
    rows = []
    for st in stores:
        if st not in stats_after.means or st not in stats_before.means or st not in volumes:
            raise AnalyticsError(f"{st.value}: missing before/after mean or volume")
        a, b = stats_after.means[st], stats_before.means[st]
        if not exact:
            a, b = Fraction(tenths_half_up(a), 10), Fraction(tenths_half_up(b), 10)
        rows.append(PenaltyRow(st, a, b, int(volumes[st])))
    return PenaltyTable(tuple(rows), stats_after.price_cap, not exact)


# ------------------------------------------------------------------ yearly series and plots


def yearly_series(values: Mapping[tuple, Fraction]) -> dict[StoreType, dict[int, float]]:
    out: dict[StoreType, dict[int, float]] = {}
    for (st, year), v in values.items():
        out.setdefault(st, {})[int(year)] = float(v)
    return out


def plot_series(series: Mapping[StoreType, Mapping[int, float]], path, title: str, ylabel: str,
                marker_year: int | None = 2014) -> bool:
    """Write a static line chart; returns False when matplotlib is unavailable."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return False
    fig, ax = plt.subplots(figsize=(7, 4))
    for st in STORE_ORDER:
        if st in series:
            years = sorted(series[st])
            ax.plot(years, [series[st][y] for y in years], marker="o", label=st.value)
    if marker_year is not None:
        ax.axvline(marker_year, color="grey", linestyle="--", linewidth=1)
    ax.set_title(title)
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return True
