"""Counter-based random streams built on SplitMix64.

Every simulated transaction ``t`` gets its own stream whose starting state is
a hash of ``(seed, t)``, so draws never depend on how transactions are split
across workers. Constants are the published SplitMix64 ones (Steele, Lea and
Flood, 2014), which keeps seeds portable to any language with 64-bit
unsigned arithmetic.

A uniform draw is the top 53 bits of one output word; categorical draws
compare it against integer cumulative thresholds scaled to ``2**53``, so no
floating point is involved in sampling.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MUL1 = 0xBF58476D1CE4E5B9
MIX_MUL2 = 0x94D049BB133111EB
# multiplier that spreads transaction counters before they meet the seed key
COUNTER_MUL = 0xD1B54A32D192ED03
UNIFORM_BITS = 53
UNIFORM_SCALE = 1 << UNIFORM_BITS


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_MUL1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MUL2) & MASK64
    return z ^ (z >> 31)


def seed_key(seed: int) -> int:
    return mix64(seed & MASK64)


def stream_state(seed: int, counter: int) -> int:
    """Initial state of the substream for ``counter`` under ``seed``."""
    return mix64(seed_key(seed) ^ ((counter * COUNTER_MUL) & MASK64))


class SplitMix64:
    """Plain-Python stream; the reference the vectorised kernels are checked against."""

    def __init__(self, seed: int, counter: int = 0) -> None:
        self.state = stream_state(seed, counter)

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def next_u53(self) -> int:
        return self.next_u64() >> (64 - UNIFORM_BITS)

    def random(self) -> float:
        return self.next_u53() / UNIFORM_SCALE

    def choice_index(self, thresholds: Sequence[int]) -> int:
        u = self.next_u53()
        for i, c in enumerate(thresholds):
            if u < c:
                return i
        raise AssertionError("thresholds must end at 2**53")


def cdf_thresholds(masses: Sequence[Fraction]) -> np.ndarray:
    """Integer cumulative thresholds ``floor(CDF * 2**53)``; the last one is exactly ``2**53``."""
    out = np.empty(len(masses), dtype=np.int64)
    acc = Fraction(0)
    for i, m in enumerate(masses):
        acc += m
        out[i] = (acc * UNIFORM_SCALE).__floor__()
    out[-1] = UNIFORM_SCALE
    return out


# numpy versions operate on uint64 arrays; wraparound is the intended modular arithmetic
_G = np.uint64(GOLDEN_GAMMA)
_M1 = np.uint64(MIX_MUL1)
_M2 = np.uint64(MIX_MUL2)
_CM = np.uint64(COUNTER_MUL)
_S30, _S27, _S31, _S11 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(64 - UNIFORM_BITS)


def mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def stream_states(seed: int, counters: np.ndarray) -> np.ndarray:
    key = np.uint64(seed_key(seed))
    with np.errstate(over="ignore"):
        return mix64_array(key ^ (counters.astype(np.uint64) * _CM))


def advance(states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Step every stream once; returns ``(new_states, u53_draws)``."""
    with np.errstate(over="ignore"):
        states = states + _G
        draws = (mix64_array(states) >> _S11).astype(np.int64)
    return states, draws
