"""Left-digit-bias perceived price and a synthetic demand-panel generator."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .money import Money
from .panel import DemandPanel

MICRO_PER_NIS = 10**6
MICRO_PER_AGORA = 10**4


class PerceptionError(ValueError):
    pass


@dataclass(frozen=True)
class BiasParams:
    """``theta`` in [0, 1]; ``delta`` is the focal ending in agorot (0-99)."""

    theta: Fraction
    delta: int = 0

    def __post_init__(self) -> None:
        theta = Fraction(str(self.theta)) if isinstance(self.theta, float) else Fraction(self.theta)
        if not 0 <= theta <= 1:
            raise PerceptionError(f"theta {theta} outside [0, 1]")
        if not 0 <= self.delta <= 99:
            raise PerceptionError(f"focal ending {self.delta} outside 0..99 agorot")
        object.__setattr__(self, "theta", theta)


def _agorot(p: Money | int) -> int:
    a = p.agorot if isinstance(p, Money) else int(p)
    if a < 0:
        raise PerceptionError("price must be nonnegative")
    return a


def perceived_price_exact(p: Money | int, params: BiasParams) -> Fraction:
    """Perceived price in NIS as an exact rational."""
    a = _agorot(p)
    th = params.theta
    return ((1 - th) * a + th * (params.delta + (a // 100) * 100)) / 100


def perceived_price(p: Money | int, params: BiasParams) -> int:
    """Perceived price in micro-NIS (1e-6 NIS), rounded half to even when theta has many decimals.

    ``(1 - theta) * p + theta * (focal ending + whole-NIS part of p)``.
    """
    return round(perceived_price_exact(p, params) * MICRO_PER_NIS)


def perceived_exceeds_price(p: Money | int, params: BiasParams) -> bool:
    """True when the formula gives a perceived price above the true price (fractional part below the focal ending)."""
    a = _agorot(p)
    return params.theta > 0 and a % 100 < params.delta


def micro_to_nis_str(micro: int, places: int = 2) -> str:
    """Fixed-point micro-NIS rendered to ``places`` decimals, half away from zero."""
    scale = 10 ** (6 - places)
    q, r = divmod(abs(micro), scale)
    q += 1 if 2 * r >= scale else 0
    sign = "-" if micro < 0 else ""
    whole, frac = divmod(q, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def log_demand_gap(price_low: int, price_high: int, params: BiasParams, epsilon: float) -> float:
    """``ln Q(low) - ln Q(high)`` under log-linear demand in the perceived price."""
    lo = perceived_price_exact(price_low, params)
    hi = perceived_price_exact(price_high, params)
    return float(epsilon) * (np.log(float(lo)) - np.log(float(hi)))


# ------------------------------------------------------------------ generator


@dataclass(frozen=True)
class SyntheticPanelSpec:
    n_products: int
    n_stores: int
    n_weeks: int
    price_grid: Sequence[int]
    epsilon: float
    alpha: float = 2.0
    mode: str = "reduced"  # or "structural"
    beta90: float = 0.0
    beta00: float = 0.0
    beta99: float = 0.0
    bias: BiasParams | None = None
    noise_sd: float = 0.1
    seed: int = 0
    n_chains: int = 3
    n_categories: int = 4
    base_year: int = 2013
    fe_sd: float = 0.3

    def __post_init__(self) -> None:
        if self.epsilon >= 0:
            raise PerceptionError("demand must slope down (epsilon < 0)")
        if self.noise_sd < 0:
            raise PerceptionError("noise_sd must be >= 0")
        if self.mode not in ("reduced", "structural"):
            raise PerceptionError(f"unknown mode {self.mode!r}")
        if self.mode == "structural" and self.bias is None:
            raise PerceptionError("structural mode needs bias parameters")
        if min(self.n_products, self.n_stores) < 1 or self.n_weeks < 53:
            raise PerceptionError("need at least one product and store and 53 weeks (two years)")


# base-year cycle: modal 99 price three weeks in five; post-regulation cycle hits 90, 00 and two other 0-endings
_BASE_OFFSETS = np.array([0, 0, 0, 100, 50])
_POST_OFFSETS = np.array([-9, 1, 11, 101])


def week_calendar(n_weeks: int, base_year: int) -> tuple[np.ndarray, np.ndarray]:
    t = np.arange(n_weeks)
    year = base_year + t // 52
    month = 1 + (t % 52) * 12 // 52
    return year, month


def generate_panel(spec: SyntheticPanelSpec) -> DemandPanel:
    """Deterministic synthetic weekly panel.

    Each product gets a 99-ending modal price from the grid. In the base year
    the price cycles around that modal price; afterwards it cycles through the
    90-ending (mode - 9), 00-ending (mode + 1) and two other round prices, so
    all three dummies and the price elasticity are identified within every
    product-store pair. Planted fixed effects (pair, category-year,
    category-month, chain) are absorbed by the estimator.
    """
    grid = [int(p) for p in spec.price_grid if int(p) % 100 == 99]
    if not grid:
        raise PerceptionError("price grid has no 99-ending price to serve as the modal price")
    rng = np.random.default_rng(spec.seed)

    n_pairs = spec.n_products * spec.n_stores
    prod = np.repeat(np.arange(spec.n_products), spec.n_stores)
    store = np.tile(np.arange(spec.n_stores), spec.n_products)
    chain = store % spec.n_chains
    cat = prod % spec.n_categories
    mode_price = np.array(grid)[prod % len(grid)]

    year_w, month_w = week_calendar(spec.n_weeks, spec.base_year)
    n_years = int(year_w.max() - spec.base_year) + 1

    pair_fe = rng.normal(0.0, spec.fe_sd, n_pairs)
    catyear_fe = rng.normal(0.0, spec.fe_sd, (spec.n_categories, n_years))
    catmonth_fe = rng.normal(0.0, spec.fe_sd, (spec.n_categories, 12))
    chain_fe = rng.normal(0.0, spec.fe_sd, spec.n_chains)

    n = n_pairs * spec.n_weeks
    pair = np.repeat(np.arange(n_pairs), spec.n_weeks)
    t = np.tile(np.arange(spec.n_weeks), n_pairs)
    year = year_w[t]
    month = month_w[t]
    base = year == spec.base_year
    phase = t + pair
    offset = np.where(base, _BASE_OFFSETS[phase % 5], _POST_OFFSETS[phase % 4])
    price = mode_price[pair] + offset

    d99 = base & (offset == 0)
    d90 = (year == spec.base_year + 1) & (offset == -9)
    d00 = (year == spec.base_year + 1) & (offset == 1)

    c = cat[pair]
    fe = pair_fe[pair] + catyear_fe[c, year - spec.base_year] + catmonth_fe[c, month - 1] + chain_fe[chain[pair]]
    if spec.mode == "reduced":
        signal = spec.beta90 * d90 + spec.beta00 * d00 + spec.beta99 * d99 + spec.epsilon * np.log(price / 100.0)
    else:
        perceived = np.array([perceived_price(int(p), spec.bias) for p in np.unique(price)], dtype=np.float64)
        lookup = dict(zip(np.unique(price).tolist(), perceived / MICRO_PER_NIS))
        phat = np.array([lookup[p] for p in price.tolist()])
        signal = spec.epsilon * np.log(phat)
    noise = rng.normal(0.0, spec.noise_sd, n) if spec.noise_sd > 0 else np.zeros(n)
    log_q = spec.alpha + fe + signal + noise

    return DemandPanel(
        product_id=prod[pair].astype(np.int64),
        store_id=store[pair].astype(np.int64),
        chain_id=chain[pair].astype(np.int64),
        category_id=c.astype(np.int64),
        week=t.astype(np.int64),
        year=year.astype(np.int64),
        month=month.astype(np.int64),
        price_agorot=price.astype(np.float64),
        quantity=np.exp(log_q),
    )
