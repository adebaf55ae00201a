"""Expected rounding tax per cash transaction: seeded Monte Carlo and an exact oracle."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._accel import HAVE_NUMBA
from .distributions import BasketSizeDistribution, EndingDistribution, StoreProfile
from .kernels import simulate_range
from .money import RoundingRegime, delta_table
from .rng import cdf_thresholds

MICRO = 10**6


@dataclass(frozen=True)
class SimulationConfig:
    n_transactions: int
    seed: int
    regime: RoundingRegime = RoundingRegime.NEAREST10

    def __post_init__(self) -> None:
        if self.n_transactions < 1:
            raise ValueError("n_transactions must be >= 1")


@dataclass(frozen=True)
class TaxEstimate:
    """Monte Carlo estimate, kept as exact integer sums of agorot deltas."""

    n: int
    total: int
    total_sq: int

    @property
    def mean(self) -> Fraction:
        return Fraction(self.total, self.n)

    @property
    def mean_micro_agorot(self) -> int:
        return round(self.mean * MICRO)

    @property
    def mean_agorot(self) -> float:
        return self.total / self.n

    @property
    def std_error(self) -> float:
        if self.n < 2:
            return 0.0
        # exact n-1 variance before the single float conversion
        var = Fraction(self.n * self.total_sq - self.total * self.total, self.n * (self.n - 1))
        return math.sqrt(var / self.n)

    def merge(self, other: TaxEstimate) -> TaxEstimate:
        return TaxEstimate(self.n + other.n, self.total + other.total, self.total_sq + other.total_sq)


def _sampling_tables(profile: StoreProfile, regime: RoundingRegime):
    g = regime.granularity
    ending_thr = cdf_thresholds(profile.endings.residue_mass(g))
    basket_thr = cdf_thresholds(profile.baskets.mass[: profile.baskets.k_max])
    deltas = np.array(delta_table(regime), dtype=np.int64)
    return basket_thr, ending_thr, deltas


def _split(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n))
    bounds = [n * i // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts)]


def simulate_rounding_tax(profile: StoreProfile, config: SimulationConfig, workers: int = 1,
                          numba: bool | None = None) -> TaxEstimate:
    """Two-stage simulation: draw a basket size, then an ending for every item.

    The bill's ending is the sum of item endings, reduced modulo the regime
    granularity (only the last digit matters under nearest-10 rounding).
    Transaction ``t`` uses the substream keyed by ``(seed, t)``, so the result
    does not depend on ``workers``.
    """
    use_nb = HAVE_NUMBA if numba is None else numba
    basket_thr, ending_thr, deltas = _sampling_tables(profile, config.regime)
    ranges = _split(config.n_transactions, workers)

    def run(bounds):
        return simulate_range(config.seed, bounds[0], bounds[1], basket_thr, ending_thr, deltas, numba=use_nb)

    if len(ranges) == 1:
        parts = [run(ranges[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            parts = list(pool.map(run, ranges))
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    return TaxEstimate(config.n_transactions, total, total_sq)


def circular_convolve(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    g = len(a)
    out = [Fraction(0)] * g
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[(i + j) % g] += x * y
    return out


def bill_residue_distributions(endings: EndingDistribution, g: int, k_max: int) -> list[list[Fraction]]:
    """``result[k-1]`` is the distribution of the k-item bill ending modulo ``g``."""
    d = list(endings.residue_mass(g))
    out = [d]
    for _ in range(k_max - 1):
        out.append(circular_convolve(out[-1], d))
    return out


def exact_rounding_tax(profile: StoreProfile, regime: RoundingRegime) -> Fraction:
    """Exact expected delta per transaction, in agorot."""
    return exact_tax(profile.endings, profile.baskets, regime)


def exact_tax(endings: EndingDistribution, baskets: BasketSizeDistribution, regime: RoundingRegime) -> Fraction:
    g = regime.granularity
    if g == 1:
        return Fraction(0)
    k_max = baskets.k_max
    if k_max > 10_000:
        raise ValueError("basket sizes above 10,000 are not supported")
    table = delta_table(regime)
    total = Fraction(0)
    for k, dist in enumerate(bill_residue_distributions(endings, g, k_max), start=1):
        pk = baskets.prob(k)
        if pk:
            total += pk * sum((m * table[r] for r, m in enumerate(dist) if m), Fraction(0))
    return total


def nis_from_agorot(x: Fraction) -> Fraction:
    return x / 100
