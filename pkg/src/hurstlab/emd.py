"""Empirical mode decomposition for pre-analysis denoising.

Sifting peels off intrinsic mode functions (IMFs) from fast to slow:
each iteration subtracts the mean of the upper and lower extremum
envelopes (natural cubic splines, end effects tamed by mirroring two
extrema beyond each boundary) until Huang's SD criterion is met and the
extrema/zero-crossing counts balance. Denoising drops the first,
highest-frequency IMFs and keeps the rest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DataError, NumericError
from .signal_io import SignalSeries

__all__ = ["ImfSet", "find_extrema", "sift", "decompose", "denoise"]

DEFAULT_SD_THRESHOLD = 0.3
DEFAULT_MAX_SIFT_ITERS = 100
MIN_DECOMPOSE_LENGTH = 16


@dataclass(frozen=True)
class ImfSet:
    """Ordered IMFs (highest frequency first) plus the leftover trend."""

    imfs: tuple[np.ndarray, ...]
    residual: np.ndarray

    def reconstruct(self) -> np.ndarray:
        total = self.residual.copy()
        for imf in self.imfs:
            total += imf
        return total


def _as_samples(x) -> np.ndarray:
    if isinstance(x, SignalSeries):
        return x.samples
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise DataError(f"expected a 1-D series, got shape {arr.shape}")
    return arr


def find_extrema(x) -> tuple[np.ndarray, np.ndarray]:
    """Indices of strictly interior local maxima and minima.

    Equal-valued plateaus count once, at the floor of their midpoint.
    """
    samples = _as_samples(x)
    if samples.size < 3:
        raise DataError(f"extremum search needs at least 3 samples, got {samples.size}")
    diff = np.diff(samples)
    change = np.flatnonzero(diff != 0)
    if change.size == 0:
        empty = np.array([], dtype=np.intp)
        return empty, empty
    # Runs of equal values: starts/ends are sample indices, vals one per run.
    starts = np.concatenate(([0], change + 1))
    ends = np.concatenate((change, [samples.size - 1]))
    vals = samples[starts]
    sign = np.sign(np.diff(vals))
    max_runs = np.flatnonzero((sign[:-1] > 0) & (sign[1:] < 0)) + 1
    min_runs = np.flatnonzero((sign[:-1] < 0) & (sign[1:] > 0)) + 1
    maxima = (starts[max_runs] + ends[max_runs]) // 2
    minima = (starts[min_runs] + ends[min_runs]) // 2
    return maxima.astype(np.intp), minima.astype(np.intp)


def _zero_crossings(x: np.ndarray) -> int:
    signs = np.sign(x)
    signs = signs[signs != 0]
    if signs.size < 2:
        return 0
    return int(np.count_nonzero(signs[:-1] != signs[1:]))


def _balance_ok(x: np.ndarray) -> bool:
    maxima, minima = find_extrema(x)
    return abs((maxima.size + minima.size) - _zero_crossings(x)) <= 1


def _envelope(x: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Natural cubic spline through extrema, mirror-extended twice per side."""
    n = x.size
    take = min(2, positions.size)
    left = -positions[:take][::-1]
    right = 2 * (n - 1) - positions[-take:][::-1]
    knots = np.concatenate((left, positions, right))
    values = np.concatenate((x[positions[:take]][::-1], x[positions], x[positions[-take:]][::-1]))
    spline = CubicSpline(knots, values, bc_type="natural")
    return spline(np.arange(n, dtype=np.float64))


def sift(x, sd_threshold: float = DEFAULT_SD_THRESHOLD, max_iters: int = DEFAULT_MAX_SIFT_ITERS):
    """Extract one IMF by iterated envelope-mean subtraction.

    Stops once the standard-deviation measure between consecutive sifts,
    sum((h_prev - h)^2 / h_prev^2), falls below sd_threshold and the
    extrema/zero-crossing counts differ by at most one, or after
    max_iters passes. If the iteration cap is hit on an unbalanced
    iterate, the most recent balanced one is returned instead.

    Raises
    ------
    NumericError
        If the input has fewer than 2 maxima or 2 minima: the component
        is monotone or trend-only, so the decomposition is complete.
    """
    samples = _as_samples(x)
    maxima, minima = find_extrema(samples)
    if maxima.size < 2 or minima.size < 2:
        raise NumericError(
            "insufficient extrema: monotone or trend-only component, decomposition complete"
        )
    h = samples.astype(np.float64, copy=True)
    last_balanced: np.ndarray | None = None
    balanced = False
    for _ in range(max_iters):
        upper = _envelope(h, maxima)
        lower = _envelope(h, minima)
        mean_env = 0.5 * (upper + lower)
        denom = h * h
        sd = float(np.sum(mean_env * mean_env / (denom + 1e-12 * denom.max() + 1e-300)))
        h = h - mean_env
        maxima, minima = find_extrema(h)
        balanced = abs((maxima.size + minima.size) - _zero_crossings(h)) <= 1
        if balanced:
            last_balanced = h
        if sd < sd_threshold and balanced:
            return h
        if maxima.size < 2 or minima.size < 2:
            break  # over-sifted into a trend; return what we have
    if not balanced and last_balanced is not None:
        return last_balanced
    return h


def decompose(x, max_imfs: int | None = None, sd_threshold: float = DEFAULT_SD_THRESHOLD,
              max_iters: int = DEFAULT_MAX_SIFT_ITERS) -> ImfSet:
    """Full decomposition: x = sum(imfs) + residual (exact by construction).

    Stops when the residual can no longer support envelopes (fewer than
    two maxima or two minima) or when max_imfs is reached.
    """
    samples = _as_samples(x)
    if samples.size < MIN_DECOMPOSE_LENGTH:
        raise DataError(
            f"decomposition needs at least {MIN_DECOMPOSE_LENGTH} samples, got {samples.size}"
        )
    imfs: list[np.ndarray] = []
    residual = samples.astype(np.float64, copy=True)
    while max_imfs is None or len(imfs) < max_imfs:
        maxima, minima = find_extrema(residual)
        if maxima.size < 2 or minima.size < 2:
            break
        imf = sift(residual, sd_threshold, max_iters)
        imfs.append(imf)
        residual = residual - imf
    return ImfSet(tuple(imfs), residual)


def denoise(x: SignalSeries, drop_count: int = 1, sd_threshold: float = DEFAULT_SD_THRESHOLD,
            max_iters: int = DEFAULT_MAX_SIFT_ITERS) -> SignalSeries:
    """Remove the first drop_count IMFs (the conventional noise carriers).

    drop_count=0 returns the signal unchanged. Dropping at least as many
    IMFs as the signal yields would erase it entirely and is an error.
    """
    if drop_count < 0:
        raise ValueError(f"drop_count must be >= 0, got {drop_count}")
    if drop_count == 0:
        return SignalSeries(x.samples.copy(), x.sample_rate, x.label)
    decomposition = decompose(x, max_imfs=drop_count + 1, sd_threshold=sd_threshold,
                              max_iters=max_iters)
    if len(decomposition.imfs) <= drop_count:
        raise NumericError(
            f"dropping {drop_count} IMF(s) would remove the entire signal "
            f"(only {len(decomposition.imfs)} extractable)"
        )
    cleaned = x.samples.copy()
    for imf in decomposition.imfs[:drop_count]:
        cleaned -= imf
    return SignalSeries(cleaned, x.sample_rate, x.label)
