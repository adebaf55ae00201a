from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import brute_force_tax, integer_masses, random_profile
from pennytax.calibration import CV, SG, SM
from pennytax.distributions import BasketSizeDistribution, EndingDistribution, StoreProfile, StoreType
from pennytax.money import RoundingRegime
from pennytax.roundingtax import (
    SimulationConfig,
    TaxEstimate,
    bill_residue_distributions,
    circular_convolve,
    exact_rounding_tax,
    exact_tax,
    simulate_rounding_tax,
)

N10, N5, NONE = RoundingRegime.NEAREST10, RoundingRegime.NEAREST5, RoundingRegime.NONE


def _profile(endings, baskets):
    return StoreProfile(StoreType.CONVENIENCE_STORES, endings, baskets, 1, Fraction(1))


def test_convolution_matches_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(10):
        p = random_profile(rng, k_max=4)
        for regime in (N10, N5):
            assert exact_rounding_tax(p, regime) == brute_force_tax(p.endings, p.baskets, regime)


def test_single_item_nine_ending():
    p = _profile(EndingDistribution.from_dict({99: 1}), BasketSizeDistribution.point(1))
    assert exact_rounding_tax(p, N10) == 1
    # two 99-endings: bill ends in 8, rounds up by 2
    p2 = _profile(p.endings, BasketSizeDistribution.point(2))
    assert exact_rounding_tax(p2, N10) == 2


def test_uniform_endings_any_basket():
    p = _profile(EndingDistribution.uniform(100), BasketSizeDistribution.from_dict({1: "0.3", 7: "0.7"}))
    assert exact_rounding_tax(p, N10) == Fraction(1, 2)
    assert exact_rounding_tax(p, N5) == 0
    assert exact_rounding_tax(p, NONE) == 0


def test_residue_distributions_normalized():
    d = EndingDistribution.from_dict({99: "0.7", 50: "0.3"})
    for dist in bill_residue_distributions(d, 10, 12):
        assert sum(dist) == 1
    assert circular_convolve([Fraction(1), 0], [0, Fraction(1)]) == [0, 1]


def test_calibrated_oracle_values(calib):
    # frozen exact values for the bundled calibration (agorot per transaction)
    got = {st: round(float(exact_rounding_tax(calib[st], N10)), 4) for st in (SM, SG, CV)}
    assert got == {SM: 0.7474, SG: 0.6758, CV: 0.5838}


def test_estimate_statistics():
    est = TaxEstimate(4, 2, 10)  # deltas e.g. {-1, 3, -1, 1}
    assert est.mean == Fraction(1, 2)
    # sample variance (10 - 4 * 0.25) / 3 = 3
    assert est.std_error == pytest.approx((3 / 4) ** 0.5)
    assert est.merge(TaxEstimate(1, 1, 1)) == TaxEstimate(5, 3, 11)


def test_numba_and_numpy_paths_agree(calib):
    cfg = SimulationConfig(20_000, 99)
    for p in calib.values():
        a = simulate_rounding_tax(p, cfg, numba=False)
        try:
            b = simulate_rounding_tax(p, cfg, numba=True)
        except RuntimeError:
            pytest.skip("numba unavailable")
        assert a == b


@pytest.mark.parametrize("workers", [2, 3, 8])
def test_worker_count_invariance(calib, workers):
    cfg = SimulationConfig(30_001, 5)
    p = calib[SG]
    assert simulate_rounding_tax(p, cfg, workers=workers) == simulate_rounding_tax(p, cfg, workers=1)


def test_prefix_property(calib):
    # transaction t always uses substream t, so totals add over disjoint ranges
    p = calib[CV]
    whole = simulate_rounding_tax(p, SimulationConfig(10_000, 3))
    assert whole.n == 10_000
    assert simulate_rounding_tax(p, SimulationConfig(10_000, 3)) == whole
    assert simulate_rounding_tax(p, SimulationConfig(10_000, 4)) != whole


def test_simulation_close_to_oracle(calib):
    for p in calib.values():
        est = simulate_rounding_tax(p, SimulationConfig(200_000, 17))
        assert abs(float(est.mean - exact_rounding_tax(p, N10))) < 4 * est.std_error


def test_none_regime_is_zero(calib):
    est = simulate_rounding_tax(calib[SM], SimulationConfig(1000, 1, NONE))
    assert est.total == 0 and est.total_sq == 0


def test_config_validation():
    with pytest.raises(ValueError):
        SimulationConfig(0, 1)


def test_basket_limit():
    b = BasketSizeDistribution([Fraction(0)] * 10_000 + [Fraction(1)])
    with pytest.raises(ValueError):
        exact_tax(EndingDistribution.uniform(10), b, N10)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=10, max_size=10).filter(any),
       st.lists(st.integers(0, 9), min_size=1, max_size=3).filter(any))
def test_exact_is_bounded_and_matches_enumeration(ew, bw):
    e = EndingDistribution(integer_masses(ew))
    b = BasketSizeDistribution(integer_masses(bw))
    val = exact_tax(e, b, N10)
    assert -4 <= val <= 5
    assert val == brute_force_tax(e, b, N10)
