"""Detrended fluctuation analysis of amplitude series.

The pipeline: build the accumulated-deviation profile, split it into
non-overlapping segments at power-of-two scales, remove a least-squares
polynomial trend per segment, average the residual variances into the
q-th order fluctuation function, and read the scaling exponent h(q) off
the slope of log2 F_q(s) versus log2 s. h(2) is the Hurst exponent; the
fractal dimension follows as 2 - h.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DataError, NumericError
from .signal_io import SignalSeries

__all__ = [
    "DfaConfig",
    "Profile",
    "TrendFit",
    "FluctuationCurve",
    "HurstEstimate",
    "CorrelationClass",
    "profile",
    "scales",
    "segment_fit",
    "segment_variance",
    "fluctuation_function",
    "fluctuation_curve",
    "fit_hurst",
    "hurst",
    "hurst_spectrum",
    "fractal_dimension",
    "classify_correlation",
    "DEFAULT_Q_GRID",
]

MIN_SCALES = 4
MIN_SEGMENTS_PER_SCALE = 4

# Generalized-exponent grid: integers and halves in [-5, 5] without 0,
# where the moment average is undefined.
DEFAULT_Q_GRID = tuple(q / 2.0 for q in range(-10, 11) if q != 0)


class CorrelationClass(Enum):
    ANTI_PERSISTENT = "anti-persistent"
    UNCORRELATED = "uncorrelated"
    PERSISTENT = "persistent"


@dataclass(frozen=True)
class DfaConfig:
    """Scale scheme and detrending settings.

    Scales are the powers of two within [s_min, min(s_max, n/4)]; the n/4
    cap keeps at least four segments per scale. Fewer than four surviving
    scales refuse the fit. bidirectional=True additionally takes segments
    counted from the series tail (2*N_s segments per scale) instead of
    discarding the remainder.
    """

    s_min: int = 16
    s_max: int = 1024
    poly_order: int = 1
    q: float = 2.0
    bidirectional: bool = False

    def __post_init__(self):
        if self.s_min < 4:
            raise ValueError(f"s_min must be >= 4, got {self.s_min}")
        if self.s_min >= self.s_max:
            raise ValueError(f"need s_min < s_max, got {self.s_min} >= {self.s_max}")
        if self.poly_order < 1:
            raise ValueError(f"poly_order must be >= 1, got {self.poly_order}")
        if self.q == 0:
            raise ValueError("q must be nonzero: the 1/q exponent is undefined at q=0")


@dataclass(frozen=True)
class Profile:
    """Accumulated deviations from the mean; the series DFA detrends."""

    values: np.ndarray

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class TrendFit:
    """Least-squares polynomial trend of one profile segment."""

    coefficients: tuple[float, ...]  # highest degree first, length poly_order + 1
    segment_index: int
    scale: int


@dataclass(frozen=True)
class FluctuationCurve:
    """(scale, F_q) pairs surviving the zero-fluctuation drop rule."""

    points: tuple[tuple[int, float], ...]
    q: float
    dropped_points: int = 0

    def __post_init__(self):
        s_values = [s for s, _ in self.points]
        if any(f < 0 for _, f in self.points):
            raise ValueError("fluctuation values must be non-negative")
        if any(b <= a for a, b in zip(s_values, s_values[1:])):
            raise ValueError("scales must be strictly increasing")

    def scales(self) -> np.ndarray:
        return np.array([s for s, _ in self.points], dtype=np.float64)

    def fluctuations(self) -> np.ndarray:
        return np.array([f for _, f in self.points], dtype=np.float64)


@dataclass(frozen=True)
class HurstEstimate:
    """Fitted scaling exponent with its log-log fit diagnostics."""

    h: float
    intercept: float
    r_squared: float
    q: float
    scales_used: tuple[int, ...]
    dropped_points: int = 0


def _as_samples(x) -> np.ndarray:
    if isinstance(x, SignalSeries):
        return x.samples
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise DataError(f"expected a 1-D series, got shape {arr.shape}")
    return arr


def _profile_values(p) -> np.ndarray:
    return p.values if isinstance(p, Profile) else np.asarray(p, dtype=np.float64)


def profile(x) -> Profile:
    """Accumulated deviation series X(i) = sum_{k<=i} (x(k) - mean(x)).

    Accepts a SignalSeries or any 1-D array-like. The terminal value is
    zero up to rounding because the deviations sum to zero.
    """
    samples = _as_samples(x)
    if samples.size < 2:
        raise DataError(f"profile needs at least 2 samples, got {samples.size}")
    if not np.all(np.isfinite(samples)):
        raise DataError("profile input contains non-finite samples")
    values = np.cumsum(samples - samples.mean())
    return Profile(values)


def scales(config: DfaConfig, n: int) -> list[int]:
    """Power-of-two scales usable for a series of length n.

    The top scale is capped at n / 4 so every scale keeps at least
    four segments; fewer than four surviving scales is an error.
    """
    cap = min(config.s_max, n // MIN_SEGMENTS_PER_SCALE)
    out: list[int] = []
    s = 1
    while s <= cap:
        if s >= config.s_min:
            out.append(s)
        s *= 2
    if len(out) < MIN_SCALES:
        raise DataError(
            f"series of length {n} admits only {len(out)} scale(s) in "
            f"[{config.s_min}, {cap}]; at least {MIN_SCALES} are required"
        )
    return out


def _design_matrix(s: int, order: int) -> np.ndarray:
    # Centered/scaled abscissa keeps the basis well conditioned; the
    # fitted values are invariant to this reparametrization.
    i = np.arange(1, s + 1, dtype=np.float64)
    t = (i - i.mean()) / s
    return np.vander(t, order + 1, increasing=False)


def _segment_matrix(values: np.ndarray, s: int, bidirectional: bool) -> np.ndarray:
    n_seg = values.size // s
    segs = values[: n_seg * s].reshape(n_seg, s)
    if bidirectional:
        tail = values[values.size - n_seg * s :].reshape(n_seg, s)
        segs = np.vstack([segs, tail])
    return segs


def _segment_variances(values: np.ndarray, s: int, order: int, bidirectional: bool = False) -> np.ndarray:
    """Detrended variance F^2(s, v) of every segment at one scale."""
    segs = _segment_matrix(values, s, bidirectional)
    q_basis, _ = np.linalg.qr(_design_matrix(s, order))
    resid = segs - (segs @ q_basis) @ q_basis.T
    return np.mean(resid * resid, axis=1)


def segment_fit(p, s: int, v: int, poly_order: int = 1) -> TrendFit:
    """Least-squares polynomial trend of segment v (1-indexed) at scale s."""
    values = _profile_values(p)
    n_seg = values.size // s
    if not 1 <= v <= n_seg:
        raise DataError(f"segment index {v} out of range 1..{n_seg} at scale {s}")
    seg = values[(v - 1) * s : v * s]
    i = np.arange(1, s + 1, dtype=np.float64)
    coeffs = np.polyfit(i, seg, poly_order)
    return TrendFit(tuple(float(c) for c in coeffs), segment_index=v, scale=s)


def segment_variance(p, s: int, v: int, poly_order: int = 1) -> float:
    """Mean squared detrending residual of segment v (1-indexed) at scale s."""
    values = _profile_values(p)
    fit = segment_fit(p, s, v, poly_order)
    seg = values[(v - 1) * s : v * s]
    i = np.arange(1, s + 1, dtype=np.float64)
    resid = seg - np.polyval(fit.coefficients, i)
    return float(np.mean(resid * resid))


def _fluctuation_from_variances(variances: np.ndarray, q: float) -> float:
    if q == 0:
        raise ValueError("q must be nonzero: the 1/q exponent is undefined at q=0")
    if q < 0 and not np.any(variances > 0):
        raise NumericError("all segment variances are zero; negative-q average blows up")
    with np.errstate(divide="ignore"):
        moment = np.mean(variances ** (q / 2.0))
        return float(moment ** (1.0 / q))


def fluctuation_function(p, s: int, q: float = 2.0, poly_order: int = 1) -> float:
    """q-th order fluctuation F_q(s) = {mean_v [F^2(s,v)]^(q/2)}^(1/q).

    q=2 is plain DFA (root mean of the segment variances). q=0 is
    rejected; so is q<0 when every segment variance vanishes.
    """
    values = _profile_values(p)
    if values.size // s < 1:
        raise DataError(f"scale {s} exceeds profile length {values.size}")
    variances = _segment_variances(values, s, poly_order)
    return _fluctuation_from_variances(variances, q)


def fluctuation_curve(x, config: DfaConfig = DfaConfig()) -> FluctuationCurve:
    """F_q(s) across the scale scheme, dropping unusable zero points.

    Zero fluctuations cannot enter the log-log fit; they are dropped and
    counted, and more than half dropped is an error.
    """
    samples = _as_samples(x)
    scheme = scales(config, samples.size)
    prof_values = profile(samples).values
    points: list[tuple[int, float]] = []
    dropped = 0
    for s in scheme:
        variances = _segment_variances(prof_values, s, config.poly_order, config.bidirectional)
        f = _fluctuation_from_variances(variances, config.q)
        if f > 0.0 and np.isfinite(f):
            points.append((s, f))
        else:
            dropped += 1
    if dropped > len(scheme) // 2:
        raise NumericError(
            f"{dropped} of {len(scheme)} fluctuation points are zero; "
            "the series is too regular for a log-log fit"
        )
    return FluctuationCurve(tuple(points), q=config.q, dropped_points=dropped)


def fit_hurst(curve: FluctuationCurve) -> HurstEstimate:
    """Ordinary least squares of log2 F on log2 s; the slope is h(q)."""
    if len(curve.points) < MIN_SCALES:
        raise NumericError(
            f"fit refused: {len(curve.points)} usable points, need {MIN_SCALES}"
        )
    f = curve.fluctuations()
    if np.any(f <= 0):
        raise NumericError("fit refused: non-positive fluctuation value")
    log_s = np.log2(curve.scales())
    log_f = np.log2(f)
    slope, intercept = np.polyfit(log_s, log_f, 1)
    fitted = slope * log_s + intercept
    ss_res = float(np.sum((log_f - fitted) ** 2))
    ss_tot = float(np.sum((log_f - log_f.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return HurstEstimate(
        h=float(slope),
        intercept=float(intercept),
        r_squared=float(min(max(r_squared, 0.0), 1.0)),
        q=curve.q,
        scales_used=tuple(int(s) for s, _ in curve.points),
        dropped_points=curve.dropped_points,
    )


def hurst(x, config: DfaConfig = DfaConfig()) -> HurstEstimate:
    """Full pipeline: profile, fluctuation curve, log-log fit."""
    return fit_hurst(fluctuation_curve(x, config))


def hurst_spectrum(x, config: DfaConfig = DfaConfig(), q_grid=DEFAULT_Q_GRID) -> list[HurstEstimate]:
    """Generalized h(q) over a grid of nonzero moments.

    Segment variances are computed once per scale and reused across q.
    """
    samples = _as_samples(x)
    scheme = scales(config, samples.size)
    prof_values = profile(samples).values
    per_scale = [
        _segment_variances(prof_values, s, config.poly_order, config.bidirectional)
        for s in scheme
    ]
    estimates = []
    for q in q_grid:
        points = []
        dropped = 0
        for s, variances in zip(scheme, per_scale):
            f = _fluctuation_from_variances(variances, q)
            if f > 0.0 and np.isfinite(f):
                points.append((s, f))
            else:
                dropped += 1
        if dropped > len(scheme) // 2:
            raise NumericError(f"too many zero fluctuation points at q={q}")
        curve = FluctuationCurve(tuple(points), q=q, dropped_points=dropped)
        estimates.append(fit_hurst(curve))
    return estimates


def fractal_dimension(h: float) -> float:
    """Fractal dimension of a series with Hurst exponent h: 2 - h."""
    return 2.0 - h


def classify_correlation(h: float, band: float = 0.02) -> CorrelationClass:
    """Persistence class of h against 0.5 with a +-band dead zone."""
    if band < 0:
        raise ValueError(f"band must be >= 0, got {band}")
    if abs(h - 0.5) <= band:
        return CorrelationClass.UNCORRELATED
    if h > 0.5:
        return CorrelationClass.PERSISTENT
    return CorrelationClass.ANTI_PERSISTENT
