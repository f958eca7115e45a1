"""Deterministic generators of signals with known scaling behavior.

All randomness flows through NumPy's PCG64 generator seeded explicitly, so
identical parameters reproduce identical series on any platform. Fractional
Gaussian noise is drawn exactly (circulant embedding of its closed-form
autocovariance) and is therefore an independent reference for the
fluctuation-analysis estimator.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .signal_io import SignalSeries

__all__ = [
    "GeneratorKind",
    "GeneratorSpec",
    "white_noise",
    "fgn",
    "fgn_autocovariance",
    "random_walk",
    "sine",
    "generate",
]


class GeneratorKind(Enum):
    WHITE_NOISE = "white"
    FGN = "fgn"
    SINE = "sine"
    RANDOM_WALK = "walk"


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters pinning down one synthetic series."""

    kind: GeneratorKind
    n: int
    seed: int = 0
    hurst: float | None = None
    freq: float | None = None
    rate: int | None = None
    amplitude: float = 1.0


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def white_noise(n: int, seed: int = 0) -> SignalSeries:
    """I.i.d. standard Gaussian samples (PCG64, ziggurat normals)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    samples = _rng(seed).standard_normal(n)
    return SignalSeries(samples, sample_rate=0, label=f"white-noise[n={n},seed={seed}]")


def fgn_autocovariance(hurst: float, lags: np.ndarray) -> np.ndarray:
    """Closed-form autocovariance of unit-variance fractional Gaussian noise.

    gamma(k) = 0.5 * (|k+1|^(2H) - 2|k|^(2H) + |k-1|^(2H))
    """
    k = np.abs(np.asarray(lags, dtype=np.float64))
    two_h = 2.0 * hurst
    return 0.5 * ((k + 1.0) ** two_h - 2.0 * k**two_h + np.abs(k - 1.0) ** two_h)


def fgn(hurst: float, n: int, seed: int = 0) -> SignalSeries:
    """Fractional Gaussian noise with exact correlation structure.

    Uses circulant embedding of the autocovariance (Davies-Harte): the
    covariance of the returned series equals fgn_autocovariance exactly,
    in distribution. If the embedding has a materially negative
    eigenvalue the generator falls back to approximate spectral synthesis.

    Parameters
    ----------
    hurst : float
        Target Hurst exponent, strictly inside (0, 1).
    n : int
        Number of samples, at least 16.
    seed : int
        PRNG seed; the map (hurst, n, seed) -> samples is pure.
    """
    if not 0.0 < hurst < 1.0:
        raise ValueError(f"hurst must lie in (0, 1), got {hurst}")
    if n < 16:
        raise ValueError(f"n must be >= 16, got {n}")

    half = 1 << (n - 1).bit_length()  # power of two >= n
    m = 2 * half
    gamma = fgn_autocovariance(hurst, np.arange(half + 1))
    circ = np.concatenate([gamma, gamma[-2:0:-1]])  # length m, symmetric
    eig = np.fft.fft(circ).real

    floor = -1e-8 * eig.max()
    if eig.min() < floor:
        samples = _spectral_fgn(hurst, n, seed)
    else:
        eig = np.clip(eig, 0.0, None)
        rng = _rng(seed)
        v_ends = rng.standard_normal(2)
        a = rng.standard_normal(half - 1)
        b = rng.standard_normal(half - 1)
        w = np.empty(m, dtype=np.complex128)
        w[0] = np.sqrt(eig[0] / m) * v_ends[0]
        w[half] = np.sqrt(eig[half] / m) * v_ends[1]
        w[1:half] = np.sqrt(eig[1:half] / (2.0 * m)) * (a + 1j * b)
        w[half + 1 :] = np.conj(w[1:half][::-1])
        samples = np.fft.fft(w).real[:n]
    return SignalSeries(samples, sample_rate=0, label=f"fgn[h={hurst},n={n},seed={seed}]")


def _spectral_fgn(hurst: float, n: int, seed: int) -> np.ndarray:
    """Approximate fGn via frequency-domain shaping, PSD ~ f^(1-2H)."""
    rng = _rng(seed)
    spec = np.fft.rfft(rng.standard_normal(n))
    freqs = np.fft.rfftfreq(n)
    gain = np.zeros_like(freqs)
    gain[1:] = freqs[1:] ** ((1.0 - 2.0 * hurst) / 2.0)
    shaped = np.fft.irfft(spec * gain, n)
    return shaped / shaped.std()


def random_walk(n: int, seed: int = 0) -> SignalSeries:
    """Cumulative sum of white noise (integrated uncorrelated increments)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    steps = _rng(seed).standard_normal(n)
    return SignalSeries(np.cumsum(steps), sample_rate=0, label=f"random-walk[n={n},seed={seed}]")


def sine(freq: float, rate: int, n: int, amplitude: float = 1.0) -> SignalSeries:
    """Pure tone amplitude*sin(2*pi*freq*i/rate); freq must be below Nyquist."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    if not 0.0 < freq < rate / 2.0:
        raise ValueError(f"freq must satisfy 0 < freq < rate/2 = {rate / 2}, got {freq}")
    i = np.arange(n, dtype=np.float64)
    samples = amplitude * np.sin(2.0 * np.pi * freq * i / rate)
    return SignalSeries(samples, sample_rate=int(rate), label=f"sine[f={freq},rate={rate}]")


def generate(spec: GeneratorSpec) -> SignalSeries:
    """Dispatch a GeneratorSpec to the matching generator."""
    if spec.kind is GeneratorKind.WHITE_NOISE:
        return white_noise(spec.n, spec.seed)
    if spec.kind is GeneratorKind.FGN:
        if spec.hurst is None:
            raise ValueError("fgn generation requires a hurst value")
        return fgn(spec.hurst, spec.n, spec.seed)
    if spec.kind is GeneratorKind.RANDOM_WALK:
        return random_walk(spec.n, spec.seed)
    if spec.kind is GeneratorKind.SINE:
        if spec.freq is None or spec.rate is None:
            raise ValueError("sine generation requires freq and rate")
        return sine(spec.freq, spec.rate, spec.n, spec.amplitude)
    raise ValueError(f"unknown generator kind: {spec.kind}")
