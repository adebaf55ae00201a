"""Hot loops: Monte Carlo transaction simulation and fixed-effect demeaning.

Each kernel has a numba version and a numpy version. They consume random
draws in the same order, so for the simulator both return identical integer
sums; the choice is made by ``pennytax._accel`` (env ``PENNYTAX_NO_NUMBA``).
"""

from __future__ import annotations

import numpy as np

from . import rng as _rng
from ._accel import HAVE_NUMBA, njit

# ------------------------------------------------------------------ simulation


@njit(cache=True, nogil=True)
def _mix64_nb(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True, nogil=True)
def _pick(thresholds, u):
    # first index with u < thresholds[i]; thresholds are short, a scan beats bisection
    i = 0
    while u >= thresholds[i]:
        i += 1
    return i


@njit(cache=True, nogil=True)
def _simulate_range_nb(key, start, stop, basket_thr, ending_thr, deltas):
    g = deltas.shape[0]
    gamma = np.uint64(0x9E3779B97F4A7C15)
    cmul = np.uint64(0xD1B54A32D192ED03)
    shift = np.uint64(11)
    total = 0
    total_sq = 0
    for t in range(start, stop):
        s = _mix64_nb(key ^ (np.uint64(t) * cmul))
        s += gamma
        k = _pick(basket_thr, np.int64(_mix64_nb(s) >> shift)) + 1
        acc = 0
        for _ in range(k):
            s += gamma
            acc += _pick(ending_thr, np.int64(_mix64_nb(s) >> shift))
        d = deltas[acc % g]
        total += d
        total_sq += d * d
    return total, total_sq


_CHUNK = 1 << 16


def _simulate_range_np(key, start, stop, basket_thr, ending_thr, deltas):
    g = deltas.shape[0]
    cm = np.uint64(_rng.COUNTER_MUL)
    total = 0
    total_sq = 0
    for lo in range(start, stop, _CHUNK):
        hi = min(stop, lo + _CHUNK)
        t = np.arange(lo, hi, dtype=np.uint64)
        with np.errstate(over="ignore"):
            states = _rng.mix64_array(np.uint64(key) ^ (t * cm))
        states, u = _rng.advance(states)
        k = np.searchsorted(basket_thr, u, side="right") + 1
        acc = np.zeros(len(t), dtype=np.int64)
        for j in range(int(k.max())):
            states, u = _rng.advance(states)
            r = np.searchsorted(ending_thr, u, side="right")
            acc += np.where(k > j, r, 0)
        d = deltas[acc % g].astype(np.int64)
        total += int(d.sum())
        total_sq += int((d * d).sum())
    return total, total_sq


def simulate_range(seed: int, start: int, stop: int, basket_thr: np.ndarray, ending_thr: np.ndarray,
                   deltas: np.ndarray, numba: bool = HAVE_NUMBA) -> tuple[int, int]:
    """Sum and sum of squares of rounding deltas for transactions ``start..stop-1``."""
    key = _rng.seed_key(seed)
    if numba and HAVE_NUMBA:
        tot, sq = _simulate_range_nb(np.uint64(key), start, stop, basket_thr, ending_thr, deltas)
        return int(tot), int(sq)
    return _simulate_range_np(key, start, stop, basket_thr, ending_thr, deltas)


# ------------------------------------------------------------------ demeaning


@njit(cache=True, nogil=True)
def _max_cell_mean_nb(col, codes, n_groups, counts):
    best = 0.0
    for d in range(codes.shape[0]):
        sums = np.zeros(n_groups[d])
        for i in range(col.shape[0]):
            sums[codes[d, i]] += col[i]
        for gi in range(n_groups[d]):
            if counts[d, gi] > 0:
                m = abs(sums[gi] / counts[d, gi])
                if m > best:
                    best = m
    return best


@njit(cache=True, nogil=True)
def _demean_column_nb(col, codes, n_groups, counts, tol, max_sweeps):
    n_dims = codes.shape[0]
    for sweep in range(max_sweeps):
        if _max_cell_mean_nb(col, codes, n_groups, counts) <= tol:
            return sweep
        for d in range(n_dims):
            sums = np.zeros(n_groups[d])
            for i in range(col.shape[0]):
                sums[codes[d, i]] += col[i]
            for gi in range(n_groups[d]):
                if counts[d, gi] > 0:
                    sums[gi] /= counts[d, gi]
            for i in range(col.shape[0]):
                col[i] -= sums[codes[d, i]]
    if _max_cell_mean_nb(col, codes, n_groups, counts) <= tol:
        return max_sweeps
    return -1


def _cell_means_np(col, code, n, count):
    sums = np.bincount(code, weights=col, minlength=n)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(count > 0, sums / np.maximum(count, 1), 0.0)


def _demean_column_np(col, codes, n_groups, counts, tol, max_sweeps):
    n_dims = codes.shape[0]

    def worst():
        return max(np.abs(_cell_means_np(col, codes[d], n_groups[d], counts[d, : n_groups[d]])).max(initial=0.0)
                   for d in range(n_dims))

    for sweep in range(max_sweeps):
        if worst() <= tol:
            return sweep
        for d in range(n_dims):
            col -= _cell_means_np(col, codes[d], n_groups[d], counts[d, : n_groups[d]])[codes[d]]
    return max_sweeps if worst() <= tol else -1


def demean_columns(matrix: np.ndarray, codes: np.ndarray, tol: float, max_sweeps: int,
                   numba: bool = HAVE_NUMBA) -> tuple[np.ndarray, int]:
    """Alternating projections over the fixed-effect groupings in ``codes``.

    ``codes`` is ``(n_dims, n_obs)`` of dense group indices. Returns the
    demeaned copy of ``matrix`` (columns are variables) and the largest sweep
    count used; raises ``RuntimeError`` if any column fails to converge.
    """
    out = np.array(matrix, dtype=np.float64, order="F", copy=True)
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    n_dims = codes.shape[0]
    if n_dims == 0:
        return out, 0
    n_groups = np.array([int(codes[d].max()) + 1 for d in range(n_dims)], dtype=np.int64)
    counts = np.zeros((n_dims, int(n_groups.max())), dtype=np.float64)
    for d in range(n_dims):
        counts[d, : n_groups[d]] = np.bincount(codes[d], minlength=n_groups[d])
    kernel = _demean_column_nb if (numba and HAVE_NUMBA) else _demean_column_np
    used = 0
    for j in range(out.shape[1]):
        col = np.ascontiguousarray(out[:, j])
        sweeps = kernel(col, codes, n_groups, counts, tol, max_sweeps)
        if sweeps < 0:
            raise RuntimeError(f"fixed-effect demeaning did not converge after {max_sweeps} sweeps")
        out[:, j] = col
        used = max(used, int(sweeps))
    return out, used
