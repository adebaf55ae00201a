from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pennytax.econometrics import assign_dummies
from pennytax.money import Money
from pennytax.perception import (
    BiasParams,
    PerceptionError,
    SyntheticPanelSpec,
    generate_panel,
    log_demand_gap,
    micro_to_nis_str,
    perceived_exceeds_price,
    perceived_price,
    perceived_price_exact,
)


def test_worked_examples():
    p = Money.from_nis("9.99")
    assert perceived_price(p, BiasParams(Fraction(1))) == 9_000_000
    assert perceived_price(p, BiasParams(Fraction(1, 5))) == 9_792_000
    assert micro_to_nis_str(perceived_price(p, BiasParams(Fraction(1, 5)))) == "9.79"
    assert perceived_price(p, BiasParams(Fraction(0))) == 9_990_000


def test_float_theta_is_read_as_decimal():
    assert BiasParams(0.2).theta == Fraction(1, 5)


def test_focal_ending_above_fraction():
    params = BiasParams(Fraction(1, 2), delta=50)
    assert perceived_exceeds_price(910, params)
    assert perceived_price_exact(910, params) == Fraction(930, 100)
    assert not perceived_exceeds_price(990, params)
    assert not perceived_exceeds_price(910, BiasParams(Fraction(0), delta=50))


def test_parameter_checks():
    with pytest.raises(PerceptionError):
        BiasParams(Fraction(3, 2))
    with pytest.raises(PerceptionError):
        BiasParams(Fraction(1, 2), delta=100)
    with pytest.raises(PerceptionError):
        perceived_price(-1, BiasParams(Fraction(1, 2)))


def test_micro_rendering():
    assert micro_to_nis_str(9_795_000) == "9.80"
    assert micro_to_nis_str(-1_005_000) == "-1.01"
    assert micro_to_nis_str(1_234_567, 4) == "1.2346"


def test_log_demand_gap_sign():
    # 9.90 looks much cheaper than 10.00 when theta is large
    gap = log_demand_gap(990, 1000, BiasParams(Fraction(9, 10)), -0.7)
    assert gap > 0
    assert log_demand_gap(990, 1000, BiasParams(Fraction(0)), -0.7) == pytest.approx(-0.7 * np.log(0.99))


thetas = st.fractions(min_value=0, max_value=1, max_denominator=1000)


@settings(max_examples=300)
@given(st.integers(0, 10**6), thetas, thetas, st.integers(0, 99))
def test_affine_in_theta(a, t1, t2, delta):
    # straight line through theta=0 and theta=1, checked by finite differences
    f = lambda t: float(perceived_price_exact(a, BiasParams(t, delta)))  # noqa: E731
    slope = f(Fraction(1)) - f(Fraction(0))
    assert abs(f(t1) - (f(Fraction(0)) + float(t1) * slope)) <= 1e-9 * max(1.0, abs(f(t1)))
    if t1 != t2:
        fd = (f(t2) - f(t1)) / float(t2 - t1)
        assert abs(fd - slope) <= 1e-9 * max(1.0, abs(slope)) + 1e-9 / abs(float(t2 - t1))


@given(st.integers(0, 10**6), thetas)
def test_perceived_between_floor_and_price(a, t):
    v = perceived_price_exact(a, BiasParams(t))
    assert Fraction(a // 100) <= v <= Fraction(a, 100)


def _spec(**kw):
    base = dict(n_products=4, n_stores=3, n_weeks=104, price_grid=[999, 1299], epsilon=-0.7,
                beta90=0.03, beta00=0.02, noise_sd=0.0, seed=1)
    base.update(kw)
    return SyntheticPanelSpec(**base)


def test_generator_is_deterministic_and_identified():
    a, b = generate_panel(_spec()), generate_panel(_spec())
    assert np.array_equal(a.quantity, b.quantity)
    d = assign_dummies(a)
    assert d.d90.any() and d.d00.any() and d.d99.any()
    post = a.year == 2014
    assert (a.price_agorot[post] % 10 == 0).all()
    assert len(a) == 4 * 3 * 104


def test_generator_structural_mode():
    panel = generate_panel(_spec(mode="structural", bias=BiasParams(Fraction(1, 2))))
    assert np.isfinite(panel.quantity).all() and (panel.quantity > 0).all()


def test_generator_rejects_bad_specs():
    with pytest.raises(PerceptionError):
        _spec(epsilon=0.1)
    with pytest.raises(PerceptionError):
        generate_panel(_spec(price_grid=[1000]))
    with pytest.raises(PerceptionError):
        _spec(mode="structural")
    with pytest.raises(PerceptionError):
        _spec(n_weeks=30)
