"""Random store profiles with exact rational masses."""

from fractions import Fraction
from itertools import product

import numpy as np

from pennytax.distributions import BasketSizeDistribution, EndingDistribution, StoreProfile, StoreType
from pennytax.money import RoundingRegime, residue_delta


def integer_masses(weights):
    total = int(sum(weights))
    return [Fraction(int(w), total) for w in weights]


def random_profile(rng: np.random.Generator, k_max: int = 8, modulus: int = 100) -> StoreProfile:
    w = rng.integers(0, 40, modulus)
    # a few heavy endings mimic 9- and 0-ending clusters
    w[rng.integers(0, modulus, 3)] += rng.integers(50, 400, 3)
    kmax = int(rng.integers(1, k_max + 1))
    b = rng.integers(1, 20, kmax)
    return StoreProfile(StoreType.SMALL_GROCERIES, EndingDistribution(integer_masses(w)),
                        BasketSizeDistribution(integer_masses(b)), 1000, Fraction(1))


def brute_force_tax(endings: EndingDistribution, baskets: BasketSizeDistribution, regime: RoundingRegime) -> Fraction:
    """Enumerate every tuple of item endings mod g."""
    g = regime.granularity
    res = endings.residue_mass(g)
    total = Fraction(0)
    for k in range(1, baskets.k_max + 1):
        pk = baskets.prob(k)
        if not pk:
            continue
        for items in product(range(g), repeat=k):
            p = Fraction(1)
            for r in items:
                p *= res[r]
            if p:
                total += pk * p * residue_delta(sum(items) % g, regime)
    return total
