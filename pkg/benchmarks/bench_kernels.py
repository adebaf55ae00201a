"""Time the numba kernels against the pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--n 1000000] [--repeat 3]

Both paths must give identical answers; the script checks that before
reporting timings.
"""

import argparse
import time

import numpy as np

from pennytax._accel import HAVE_NUMBA
from pennytax.calibration import calibration_profiles
from pennytax.econometrics import dense_codes
from pennytax.kernels import demean_columns
from pennytax.roundingtax import SimulationConfig, simulate_rounding_tax


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def bench_simulation(n, repeat):
    rows = []
    for profile in calibration_profiles():
        cfg = SimulationConfig(n, seed=1)
        t_np, r_np = best_of(lambda: simulate_rounding_tax(profile, cfg, numba=False), repeat)
        simulate_rounding_tax(profile, SimulationConfig(1000, 1), numba=True)  # compile
        t_nb, r_nb = best_of(lambda: simulate_rounding_tax(profile, cfg, numba=True), repeat)
        assert r_np == r_nb, "numba and numpy simulations disagree"
        rows.append((f"simulate {profile.store_type.value}", t_np, t_nb))
    return rows


def bench_demeaning(n, repeat):
    rng = np.random.default_rng(0)
    codes = np.stack([dense_codes(rng.integers(0, n // 100, n)), dense_codes(rng.integers(0, 50, n)),
                      dense_codes(rng.integers(0, 12, n))])
    matrix = rng.normal(size=(n, 4))
    t_np, (a, _) = best_of(lambda: demean_columns(matrix, codes, 1e-10, 10_000, numba=False), repeat)
    demean_columns(matrix[:100], codes[:, :100], 1e-10, 10_000, numba=True)  # compile
    t_nb, (b, _) = best_of(lambda: demean_columns(matrix, codes, 1e-10, 10_000, numba=True), repeat)
    assert np.allclose(a, b, rtol=0, atol=1e-12), "numba and numpy demeaning disagree"
    return [(f"demean 3-way FE, n={n:,}", t_np, t_nb)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1_000_000, help="transactions per store type")
    ap.add_argument("--panel-n", type=int, default=200_000, help="rows in the demeaning benchmark")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not available (or PENNYTAX_NO_NUMBA is set); nothing to compare")
    rows = bench_simulation(args.n, args.repeat) + bench_demeaning(args.panel_n, args.repeat)
    width = max(len(r[0]) for r in rows)
    print(f"{'kernel'.ljust(width)}  {'numpy s':>9}  {'numba s':>9}  {'speedup':>7}")
    for name, t_np, t_nb in rows:
        print(f"{name.ljust(width)}  {t_np:9.3f}  {t_nb:9.3f}  {t_np / t_nb:6.1f}x")


if __name__ == "__main__":
    main()
