"""Fixed-effects OLS for the left-digit-bias demand regression and the 90-ending price-change premium.

Regressors on log quantity: D90, D00, D99 dummies anchored on each
product-store's modal 99-ending base-year price, plus log price. Fixed
effects are absorbed by alternating projections; the slope coefficients then
come from the normal equations, with cross products accumulated by
``math.fsum`` so the result does not depend on summation order. Standard
errors are classical (homoskedastic).
"""

from __future__ import annotations

import math
from decimal import ROUND_HALF_EVEN, Decimal
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ._accel import HAVE_NUMBA
from .kernels import demean_columns
from .panel import DemandPanel, MonthlyPanel

DEMEAN_TOL = 1e-10
MAX_SWEEPS = 10_000
COLLINEAR_TOL = 1e-9

FE_CHOICES = ("product_store", "cat_year", "cat_month", "chain")
DEFAULT_FE = FE_CHOICES
PREMIUM_FE_CHOICES = ("year", "month", "product", "store")


class EstimationError(ValueError):
    pass


class CollinearityError(EstimationError):
    def __init__(self, regressor: str) -> None:
        self.regressor = regressor
        super().__init__(f"design is rank deficient: '{regressor}' is collinear with earlier regressors "
                         "or absorbed by the fixed effects")


class ConvergenceError(EstimationError):
    def __init__(self, sweeps: int) -> None:
        self.sweeps = sweeps
        super().__init__(f"fixed-effect demeaning did not converge within {sweeps} sweeps")


# ------------------------------------------------------------------ generic engine


def dense_codes(*keys: np.ndarray) -> np.ndarray:
    """Dense 0..G-1 group index for the combination of key columns."""
    if len(keys) == 1:
        _, inv = np.unique(keys[0], return_inverse=True)
    else:
        _, inv = np.unique(np.stack(keys), axis=1, return_inverse=True)
    return inv.ravel().astype(np.int64)


def fe_degrees_of_freedom(codes: Sequence[np.ndarray]) -> int:
    """Parameters used by the fixed effects.

    The first grouping counts fully; each later grouping counts its groups
    minus the connected components it forms with the first one (exact for
    two groupings and for nested ones, conservative beyond that).
    """
    if not codes:
        return 1  # plain intercept
    first = codes[0]
    g1 = int(first.max()) + 1
    dof = g1
    for c in codes[1:]:
        gj = int(c.max()) + 1
        n = len(c)
        graph = coo_matrix((np.ones(n), (first, g1 + c)), shape=(g1 + gj, g1 + gj))
        n_comp, labels = connected_components(graph, directed=False)
        # components touching the second grouping
        used = np.unique(labels[g1 + np.unique(c)])
        dof += gj - len(used)
    return dof


def absorb(matrix: np.ndarray, codes: Sequence[np.ndarray], tol: float = DEMEAN_TOL,
           max_sweeps: int = MAX_SWEEPS, numba: bool | None = None) -> tuple[np.ndarray, int]:
    """Remove fixed effects from every column; with no groupings remove the overall mean."""
    if not codes:
        codes = [np.zeros(matrix.shape[0], dtype=np.int64)]
    stacked = np.stack(codes)
    try:
        return demean_columns(matrix, stacked, tol, max_sweeps, numba=HAVE_NUMBA if numba is None else numba)
    except RuntimeError:
        raise ConvergenceError(max_sweeps) from None


def _fdot(a: np.ndarray, b: np.ndarray) -> float:
    return math.fsum((a * b).tolist())


@dataclass
class OLSFit:
    names: tuple[str, ...]
    coef: np.ndarray
    se: np.ndarray
    residuals: np.ndarray
    n: int
    fe_dof: int
    sweeps: int
    intercept: float
    sigma2: float

    def coefficient(self, name: str) -> float:
        return float(self.coef[self.names.index(name)])

    def std_error(self, name: str) -> float:
        return float(self.se[self.names.index(name)])


def ols_absorbed(y: np.ndarray, X: np.ndarray, names: Sequence[str], codes: Sequence[np.ndarray],
                 tol: float = DEMEAN_TOL, max_sweeps: int = MAX_SWEEPS, numba: bool | None = None) -> OLSFit:
    n, k = X.shape
    names = tuple(names)
    data = np.column_stack([y, X])
    within, sweeps = absorb(data, codes, tol, max_sweeps, numba)
    yt, Xt = within[:, 0], within[:, 1:]

    xtx = np.empty((k, k))
    xty = np.empty(k)
    for i in range(k):
        xty[i] = _fdot(Xt[:, i], yt)
        for j in range(i + 1):
            xtx[i, j] = xtx[j, i] = _fdot(Xt[:, i], Xt[:, j])

    # rank check column by column against the raw (undemeaned) scale
    for j in range(k):
        raw = _fdot(X[:, j], X[:, j])
        if raw == 0 or xtx[j, j] <= COLLINEAR_TOL * raw:
            raise CollinearityError(names[j])
        if j:
            sub = xtx[:j, :j]
            b = np.linalg.solve(sub, xtx[:j, j])
            resid_norm = xtx[j, j] - xtx[:j, j] @ b
            if resid_norm <= COLLINEAR_TOL * xtx[j, j]:
                raise CollinearityError(names[j])

    chol = np.linalg.cholesky(xtx)
    coef = np.linalg.solve(chol.T, np.linalg.solve(chol, xty))
    resid = yt - Xt @ coef
    fe_dof = fe_degrees_of_freedom(list(codes))
    df = n - k - fe_dof
    if df <= 0:
        raise EstimationError(f"not enough observations: n={n}, parameters={k + fe_dof}")
    rss = math.fsum((resid * resid).tolist())
    sigma2 = rss / df
    inv = np.linalg.inv(xtx)
    se = np.sqrt(np.maximum(np.diag(inv) * sigma2, 0.0))
    intercept = math.fsum(y.tolist()) / n - float(np.array([math.fsum(X[:, j].tolist()) / n for j in range(k)]) @ coef)
    return OLSFit(names, coef, se, resid, n, fe_dof, sweeps, intercept, sigma2)


# ------------------------------------------------------------------ dummies and filters


def clean_price_mask(panel: DemandPanel, post_year: int) -> np.ndarray:
    """Drop averaged prices with sub-agora precision, and post-regulation prices not on a 10-agora step."""
    whole = np.isclose(panel.price_agorot, np.round(panel.price_agorot), rtol=0.0, atol=1e-9)
    ag = np.round(panel.price_agorot).astype(np.int64)
    round10 = (panel.year < post_year) | (ag % 10 == 0)
    return whole & round10


def _modal_99(prices: np.ndarray) -> int | None:
    p99 = prices[prices % 100 == 99]
    if p99.size == 0:
        return None
    values, counts = np.unique(p99, return_counts=True)
    # np.unique sorts ascending, argmax takes the first maximum: ties go to the lower price
    return int(values[np.argmax(counts)])


def find_modal_99_price(panel: DemandPanel, product_id: int, store_id: int, base_year: int) -> int | None:
    """Most frequent 99-ending base-year price of a product-store pair (ties: lower price)."""
    m = (panel.product_id == product_id) & (panel.store_id == store_id) & (panel.year == base_year)
    prices = panel.price_agorot[m]
    prices = np.round(prices[np.isclose(prices, np.round(prices), rtol=0, atol=1e-9)]).astype(np.int64)
    return _modal_99(prices)


@dataclass
class DummyAssignment:
    d99: np.ndarray
    d90: np.ndarray
    d00: np.ndarray
    mode: np.ndarray  # modal 99-ending base-year price per record, -1 when the pair has none
    keep: np.ndarray  # records surviving the price-cleaning rule
    base_year: int
    post_year: int

    def subset(self, mask: np.ndarray) -> DummyAssignment:
        return DummyAssignment(self.d99[mask], self.d90[mask], self.d00[mask], self.mode[mask], self.keep[mask],
                               self.base_year, self.post_year)


def assign_dummies(panel: DemandPanel, base_year: int = 2013, post_year: int = 2014) -> DummyAssignment:
    if base_year >= post_year:
        raise EstimationError("base year must precede the post-regulation year")
    keep = clean_price_mask(panel, post_year)
    price = np.round(panel.price_agorot).astype(np.int64)
    pair = panel.pair_codes()
    n_pairs = int(pair.max()) + 1 if len(pair) else 0
    modes = np.full(n_pairs, -1, dtype=np.int64)
    sel = keep & (panel.year == base_year) & (price % 100 == 99)
    order = np.argsort(pair[sel], kind="stable")
    sel_pair, sel_price = pair[sel][order], price[sel][order]
    bounds = np.flatnonzero(np.diff(sel_pair)) + 1
    for chunk_pair, chunk_price in zip(np.split(sel_pair, bounds), np.split(sel_price, bounds)):
        if chunk_pair.size:
            modes[chunk_pair[0]] = _modal_99(chunk_price)
    mode = modes[pair] if n_pairs else np.zeros(0, dtype=np.int64)
    has = mode >= 0
    d99 = keep & has & (panel.year == base_year) & (price == mode)
    d00 = keep & has & (panel.year == post_year) & (price == mode + 1)
    d90 = keep & has & (panel.year == post_year) & (price == mode - 9)
    return DummyAssignment(d99, d90, d00, mode, keep, base_year, post_year)


def filter_durable_prices(panel: DemandPanel, min_weeks: int) -> DemandPanel:
    """Keep records whose price holds for at least ``min_weeks`` consecutive weeks in that product-store."""
    if min_weeks < 1:
        raise EstimationError("min_weeks must be >= 1")
    if min_weeks == 1 or len(panel) == 0:
        return panel
    pair = panel.pair_codes()
    order = np.lexsort((panel.week, pair))
    p, w, pr = pair[order], panel.week[order], panel.price_agorot[order]
    new_run = np.ones(len(p), dtype=bool)
    new_run[1:] = (p[1:] != p[:-1]) | (w[1:] != w[:-1] + 1) | (pr[1:] != pr[:-1])
    run_id = np.cumsum(new_run) - 1
    run_len = np.bincount(run_id)
    keep_sorted = run_len[run_id] >= min_weeks
    keep = np.empty(len(p), dtype=bool)
    keep[order] = keep_sorted
    return panel.subset(keep)


# ------------------------------------------------------------------ demand regression


@dataclass(frozen=True)
class SampleRestriction:
    """Column presets: ``pair_rule`` is ``both-endings``, ``either-ending`` or ``None``."""

    price_cap_agorot: int | None = 2000
    pair_rule: str | None = "both-endings"
    before_year: int | None = None
    require_modal: bool = True

    def __post_init__(self) -> None:
        if self.pair_rule not in (None, "both-endings", "either-ending"):
            raise EstimationError(f"unknown restriction {self.pair_rule!r}")


TABLE2_PRESETS = {
    1: SampleRestriction(2000, "both-endings"),
    2: SampleRestriction(1000, "both-endings"),
    3: SampleRestriction(2000, "either-ending"),
    4: SampleRestriction(2000, "both-endings", before_year=2020),
}


@dataclass
class RegressionResult:
    coefficients: dict[str, float]
    standard_errors: dict[str, float]
    n_observations: int
    mean_price: float  # NIS
    theta_hat: float | None
    sweeps: int = 0
    fe: tuple[str, ...] = ()
    fe_dof: int = 0
    residuals: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.theta_hat is None and self.coefficients.get("epsilon", 0.0) < 0:
            self.theta_hat = compute_theta(self)


def compute_theta(result: RegressionResult | None = None, *, beta90: float | None = None,
                  beta00: float | None = None, epsilon: float | None = None,
                  mean_price: float | None = None) -> float:
    """Left-digit bias implied by the 90/00 discontinuity: ``(b90 - b00) / -eps * mean price``."""
    if result is not None:
        beta90 = result.coefficients["beta90"]
        beta00 = result.coefficients["beta00"]
        epsilon = result.coefficients["epsilon"]
        mean_price = result.mean_price
    if epsilon is None or epsilon >= 0:
        raise EstimationError("theta is undefined for a non-negative price elasticity")
    return (beta90 - beta00) / -epsilon * mean_price


def theta_display(theta: float) -> Decimal:
    """Two-decimal theta as published: first to three decimals, then to two, half to even both times."""
    three = Decimal(repr(float(theta))).quantize(Decimal("0.001"), ROUND_HALF_EVEN)
    return three.quantize(Decimal("0.01"), ROUND_HALF_EVEN)


def fe_codes(panel: DemandPanel, names: Iterable[str]) -> list[np.ndarray]:
    out = []
    for name in names:
        if name == "product_store":
            out.append(dense_codes(panel.product_id, panel.store_id))
        elif name == "cat_year":
            out.append(dense_codes(panel.category_id, panel.year))
        elif name == "cat_month":
            out.append(dense_codes(panel.category_id, panel.month))
        elif name == "chain":
            out.append(dense_codes(panel.chain_id))
        else:
            raise EstimationError(f"unknown fixed effect {name!r} (choices: {', '.join(FE_CHOICES)})")
    return out


def restriction_mask(panel: DemandPanel, dummies: DummyAssignment, restriction: SampleRestriction) -> np.ndarray:
    mask = dummies.keep.copy()
    if restriction.require_modal:
        mask &= dummies.mode >= 0
    if restriction.price_cap_agorot is not None:
        mask &= panel.price_agorot < restriction.price_cap_agorot
    if restriction.before_year is not None:
        mask &= panel.year < restriction.before_year
    if restriction.pair_rule is not None:
        pair = panel.pair_codes()
        n_pairs = int(pair.max()) + 1
        has90 = np.bincount(pair[mask & dummies.d90], minlength=n_pairs) > 0
        has00 = np.bincount(pair[mask & dummies.d00], minlength=n_pairs) > 0
        ok = (has90 & has00) if restriction.pair_rule == "both-endings" else (has90 | has00)
        mask &= ok[pair]
    return mask


def estimate_demand(panel: DemandPanel, dummies: DummyAssignment | None = None,
                    fixed_effects: Sequence[str] = DEFAULT_FE,
                    restriction: SampleRestriction | None = SampleRestriction(),
                    include_d99: bool = True, tol: float = DEMEAN_TOL, max_sweeps: int = MAX_SWEEPS,
                    numba: bool | None = None, keep_residuals: bool = False) -> RegressionResult:
    """OLS of log quantity on D90, D00, (D99), log price and absorbed fixed effects."""
    if dummies is None:
        dummies = assign_dummies(panel)
    mask = restriction_mask(panel, dummies, restriction) if restriction is not None else dummies.keep
    sub = panel.subset(mask)
    dm = dummies.subset(mask)
    if len(sub) == 0:
        raise EstimationError("no observations left after sample restrictions")
    if (sub.quantity <= 0).any():
        raise EstimationError("non-positive quantity in estimation sample")

    names = ["beta90", "beta00"] + (["beta99"] if include_d99 else []) + ["epsilon"]
    cols = [dm.d90.astype(float), dm.d00.astype(float)]
    if include_d99:
        cols.append(dm.d99.astype(float))
    price_nis = sub.price_agorot / 100.0
    cols.append(np.log(price_nis))
    X = np.column_stack(cols)
    y = np.log(sub.quantity)
    codes = fe_codes(sub, fixed_effects)
    fit = ols_absorbed(y, X, names, codes, tol, max_sweeps, numba)

    coefs = {nm: float(c) for nm, c in zip(names, fit.coef)}
    ses = {nm: float(s) for nm, s in zip(names, fit.se)}
    coefs["intercept"] = fit.intercept
    mean_price = math.fsum(price_nis.tolist()) / len(price_nis)
    return RegressionResult(coefs, ses, fit.n, mean_price, None, fit.sweeps, tuple(fixed_effects), fit.fe_dof,
                            fit.residuals if keep_residuals else None)


# ------------------------------------------------------------------ price-change premium


@dataclass
class PremiumResult:
    beta: float
    std_error: float
    n_observations: int
    fe: tuple[str, ...]


def price_changes(panel: MonthlyPanel) -> dict[str, np.ndarray]:
    """Month-on-month log price changes, only where the price actually changed."""
    pair = dense_codes(panel.product_id, panel.store_id)
    period = panel.period
    order = np.lexsort((period, pair))
    p, per, pr = pair[order], period[order], panel.price_agorot[order]
    prev_ok = np.zeros(len(p), dtype=bool)
    prev_ok[1:] = (p[1:] == p[:-1]) & (per[1:] == per[:-1] + 1) & (pr[1:] != pr[:-1])
    idx = np.flatnonzero(prev_ok)
    src = order[idx]
    return {
        "dlogp": np.log(pr[idx]) - np.log(pr[idx - 1]),
        "ends90": (np.round(pr[idx]).astype(np.int64) % 100 == 90).astype(float),
        "year": panel.year[src],
        "month": panel.month[src],
        "product": panel.product_id[src],
        "store": panel.store_id[src],
    }


def price_change_premium(panel: MonthlyPanel, fixed_effects: Sequence[str] = ("year", "month"),
                         tol: float = DEMEAN_TOL, max_sweeps: int = MAX_SWEEPS,
                         numba: bool | None = None) -> PremiumResult:
    """Coefficient on the 90-ending post-change dummy in a regression of log price changes."""
    ch = price_changes(panel)
    for name in fixed_effects:
        if name not in PREMIUM_FE_CHOICES:
            raise EstimationError(f"unknown fixed effect {name!r} (choices: {', '.join(PREMIUM_FE_CHOICES)})")
    if len(ch["dlogp"]) == 0:
        raise EstimationError("no month-on-month price changes in panel")
    codes = [dense_codes(ch[name]) for name in fixed_effects]
    fit = ols_absorbed(ch["dlogp"], ch["ends90"][:, None], ["ends90"], codes, tol, max_sweeps, numba)
    return PremiumResult(float(fit.coef[0]), float(fit.se[0]), fit.n, tuple(fixed_effects))
