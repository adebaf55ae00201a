import math
from decimal import Decimal

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pennytax.calibration import TABLE2
from pennytax.econometrics import (
    CollinearityError,
    ConvergenceError,
    EstimationError,
    SampleRestriction,
    absorb,
    assign_dummies,
    compute_theta,
    dense_codes,
    estimate_demand,
    fe_codes,
    fe_degrees_of_freedom,
    filter_durable_prices,
    find_modal_99_price,
    ols_absorbed,
    price_change_premium,
    restriction_mask,
    theta_display,
)
from pennytax.panel import DemandPanel, MonthlyPanel
from pennytax.perception import SyntheticPanelSpec, generate_panel


def dummy_matrix(codes):
    blocks = [np.eye(int(c.max()) + 1)[c] for c in codes]
    return np.column_stack(blocks) if blocks else np.ones((len(codes[0]) if codes else 0, 1))


def dummy_ols(y, X, codes):
    """Reference fit with every fixed effect as an explicit dummy column."""
    D = dummy_matrix(codes) if codes else np.ones((len(y), 1))
    Z = np.column_stack([X, D])
    coef, *_ = np.linalg.lstsq(Z, y, rcond=None)
    resid = y - Z @ coef
    rank_d = np.linalg.matrix_rank(D)
    df = len(y) - X.shape[1] - rank_d
    sigma2 = resid @ resid / df
    # covariance of the X block: (X' M_D X)^-1
    P = D @ np.linalg.pinv(D)
    MX = X - P @ X
    cov = sigma2 * np.linalg.inv(MX.T @ MX)
    return coef[: X.shape[1]], np.sqrt(np.diag(cov)), rank_d


def small_panel(seed, noise=0.1, **kw):
    spec = dict(n_products=5, n_stores=4, n_weeks=104, price_grid=[999, 1299, 549], epsilon=-0.7,
                beta90=0.03, beta00=0.02, beta99=0.01, noise_sd=noise, seed=seed)
    spec.update(kw)
    return generate_panel(SyntheticPanelSpec(**spec))


def test_absorption_matches_dummy_ols(accel):
    rng = np.random.default_rng(3)
    n = 300
    codes = [rng.integers(0, 12, n), rng.integers(0, 5, n), rng.integers(0, 3, n)]
    codes = [dense_codes(c) for c in codes]
    X = rng.normal(size=(n, 2))
    y = X @ [1.5, -0.5] + dummy_matrix(codes) @ rng.normal(size=20) + rng.normal(0, 0.3, n)
    fit = ols_absorbed(y, X, ["a", "b"], codes, numba=accel)
    ref_coef, ref_se, rank_d = dummy_ols(y, X, codes)
    assert np.allclose(fit.coef, ref_coef, rtol=0, atol=1e-8)
    if fit.fe_dof == rank_d:
        assert np.allclose(fit.se, ref_se, rtol=0, atol=1e-8)


def test_demand_panel_matches_dummy_ols():
    panel = small_panel(7)
    d = assign_dummies(panel)
    mask = restriction_mask(panel, d, SampleRestriction())
    sub, dm = panel.subset(mask), d.subset(mask)
    res = estimate_demand(panel, d)
    X = np.column_stack([dm.d90, dm.d00, dm.d99, np.log(sub.price_agorot / 100)]).astype(float)
    codes = fe_codes(sub, ("product_store", "cat_year", "cat_month", "chain"))
    ref_coef, ref_se, rank_d = dummy_ols(np.log(sub.quantity), X, codes)
    assert res.fe_dof == rank_d
    for i, name in enumerate(["beta90", "beta00", "beta99", "epsilon"]):
        assert res.coefficients[name] == pytest.approx(ref_coef[i], abs=1e-8)
        assert res.standard_errors[name] == pytest.approx(ref_se[i], abs=1e-8)


def test_no_fe_is_plain_ols():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(50, 2))
    y = 1 + X @ [2.0, 3.0] + rng.normal(0, 0.1, 50)
    fit = ols_absorbed(y, X, ["a", "b"], [])
    Z = np.column_stack([np.ones(50), X])
    ref = np.linalg.lstsq(Z, y, rcond=None)[0]
    assert np.allclose(fit.coef, ref[1:], atol=1e-10)
    assert fit.intercept == pytest.approx(ref[0], abs=1e-10)
    assert fit.fe_dof == 1


def test_noise_free_recovery(accel):
    res = estimate_demand(small_panel(1, noise=0.0), numba=accel)
    for name, truth in (("beta90", 0.03), ("beta00", 0.02), ("beta99", 0.01), ("epsilon", -0.7)):
        assert abs(res.coefficients[name] - truth) < 1e-8


def test_absorb_is_idempotent():
    rng = np.random.default_rng(5)
    codes = [dense_codes(rng.integers(0, 7, 200)), dense_codes(rng.integers(0, 4, 200))]
    once, _ = absorb(rng.normal(size=(200, 2)), codes)
    twice, sweeps = absorb(once, codes)
    assert np.array_equal(once, twice) and sweeps == 0


def test_numba_numpy_absorption_identical():
    rng = np.random.default_rng(9)
    codes = [dense_codes(rng.integers(0, 30, 2000)), dense_codes(rng.integers(0, 9, 2000))]
    m = rng.normal(size=(2000, 3))
    a, sa = absorb(m, codes, numba=False)
    try:
        b, sb = absorb(m, codes, numba=True)
    except RuntimeError:
        pytest.skip("numba unavailable")
    assert sa == sb and np.allclose(a, b, rtol=0, atol=1e-12)


def test_convergence_cap():
    rng = np.random.default_rng(2)
    codes = [dense_codes(rng.integers(0, 40, 500)), dense_codes(rng.integers(0, 40, 500))]
    with pytest.raises(ConvergenceError):
        absorb(rng.normal(size=(500, 1)), codes, max_sweeps=1)


def test_collinearity_names_regressor():
    rng = np.random.default_rng(4)
    x = rng.normal(size=40)
    X = np.column_stack([x, 2 * x])
    with pytest.raises(CollinearityError, match="b"):
        ols_absorbed(rng.normal(size=40), X, ["a", "b"], [])
    # a regressor constant within groups vanishes after absorption
    g = dense_codes(np.repeat(np.arange(8), 5))
    with pytest.raises(CollinearityError, match="z"):
        ols_absorbed(rng.normal(size=40), np.repeat(rng.normal(size=8), 5)[:, None], ["z"], [g])


def test_fe_dof_two_way_is_rank():
    rng = np.random.default_rng(8)
    for _ in range(5):
        codes = [dense_codes(rng.integers(0, 10, 60)), dense_codes(rng.integers(0, 6, 60))]
        assert fe_degrees_of_freedom(codes) == np.linalg.matrix_rank(dummy_matrix(codes))


def _hand_panel(prices, years, weeks=None, product=None, store=None):
    n = len(prices)
    z = np.zeros(n, dtype=np.int64)
    return DemandPanel(
        product_id=z if product is None else np.asarray(product), store_id=z if store is None else np.asarray(store),
        chain_id=z, category_id=z, week=np.arange(n) if weeks is None else np.asarray(weeks),
        year=np.asarray(years), month=np.ones(n, dtype=np.int64),
        price_agorot=np.asarray(prices, dtype=float), quantity=np.ones(n))


def test_dummy_assignment_by_hand():
    prices = [999, 999, 1099, 1099, 990, 1000, 1010, 995, 1000.5]
    years = [2013] * 4 + [2014] * 5
    p = _hand_panel(prices, years)
    d = assign_dummies(p)
    # tie between 999 and 1099 goes to the lower price
    assert find_modal_99_price(p, 0, 0, 2013) == 999
    assert d.d99.tolist() == [True, True, False, False, False, False, False, False, False]
    assert d.d90.tolist() == [False] * 4 + [True, False, False, False, False]
    assert d.d00.tolist() == [False] * 5 + [True, False, False, False]
    # 9.95 after the regulation and an averaged 10.005 are dropped
    assert d.keep.tolist() == [True] * 7 + [False, False]


def test_pair_without_99_price_is_excluded():
    p = _hand_panel([1000, 990], [2013, 2014])
    d = assign_dummies(p)
    assert (d.mode == -1).all()
    assert not restriction_mask(p, d, SampleRestriction()).any()


def test_cap_before_pair_rule():
    # the only 90-ending record sits above the cap, so the pair fails the both-endings rule
    prices = [2099, 2099, 2090, 2100]
    p = _hand_panel(prices, [2013, 2013, 2014, 2014])
    d = assign_dummies(p)
    assert not restriction_mask(p, d, SampleRestriction(price_cap_agorot=2100)).any()
    assert restriction_mask(p, d, SampleRestriction(price_cap_agorot=None)).sum() == 4
    # under 2095 only the 90-ending record is left, which the either-ending rule accepts
    assert restriction_mask(p, d, SampleRestriction(2095, "either-ending")).tolist() == [False, False, True, False]


def test_durable_price_filter():
    p = _hand_panel([999, 999, 999, 1099, 999], [2013] * 5)
    assert len(filter_durable_prices(p, 3)) == 3
    assert len(filter_durable_prices(p, 1)) == 5
    with pytest.raises(EstimationError):
        filter_durable_prices(p, 0)


def test_theta_from_published_coefficients():
    expected = {1: 0.215, 2: 0.305, 3: 0.686, 4: 0.109}
    for col, (b90, b00, eps, pbar, printed, _) in TABLE2.items():
        th = compute_theta(beta90=b90, beta00=b00, epsilon=eps, mean_price=pbar)
        assert round(th, 3) == expected[col]
        assert theta_display(th) == Decimal(f"{printed:.2f}")


def test_theta_undefined_for_positive_elasticity():
    with pytest.raises(EstimationError):
        compute_theta(beta90=0.1, beta00=0.0, epsilon=0.2, mean_price=10.0)


@settings(max_examples=100)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-3, -0.01), st.floats(0.1, 100), st.floats(0.5, 2))
def test_theta_scales_with_mean_price(b90, b00, eps, p, k):
    a = compute_theta(beta90=b90, beta00=b00, epsilon=eps, mean_price=p)
    b = compute_theta(beta90=b90, beta00=b00, epsilon=eps, mean_price=k * p)
    assert math.isclose(b, k * a, rel_tol=1e-12, abs_tol=1e-12)


def test_empty_sample_raises():
    p = small_panel(1, noise=0.0)
    with pytest.raises(EstimationError):
        estimate_demand(p, restriction=SampleRestriction(price_cap_agorot=100))


def test_price_change_premium_recovers_planted_gap():
    rng = np.random.default_rng(12)
    rows = []
    for prod in range(40):
        for store in range(5):
            price = 1000.0
            for t in range(36):
                year, month = 2015 + t // 12, 1 + t % 12
                if rng.random() < 0.3:
                    new = float(rng.choice([990, 1090, 1190, 900, 1000, 1100, 1200]))
                    if new != price:
                        price = new
                rows.append((prod, store, store % 2, prod % 3, year, month, price))
    arr = np.array(rows)
    panel = MonthlyPanel(*(arr[:, j].astype(np.int64) for j in range(6)), arr[:, 6])
    res = price_change_premium(panel)
    assert res.n_observations > 500
    assert np.isfinite(res.beta) and res.std_error > 0
    with pytest.raises(EstimationError):
        price_change_premium(panel, ("week",))


def test_theta_display_is_two_stage_half_even():
    assert theta_display(0.21492) == Decimal("0.22")
    assert theta_display(0.30466) == Decimal("0.30")
    assert theta_display(0.1) == Decimal("0.10")
