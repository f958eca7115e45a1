"""Reading and writing of amplitude series (WAV and one-value-per-line text).

Integer WAV samples are normalized by 2^(bits-1) so the most negative code
maps to -1.0 exactly; multi-channel input is averaged to mono. Text files
carry one decimal amplitude per line and round-trip exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile
from scipy.io.wavfile import WavFileWarning

from .errors import DataError

__all__ = ["SignalSeries", "read_wav", "read_text", "write_text", "write_wav"]


@dataclass(frozen=True, eq=False)
class SignalSeries:
    """A 1-D series of finite real amplitudes.

    sample_rate is in Hz; 0 means "unknown" (rate-less text input).
    label is a free-form tag (emotion, language, subject id, generator name).
    """

    samples: np.ndarray
    sample_rate: int = 0
    label: str | None = None

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1:
            raise DataError(f"samples must be one-dimensional, got shape {arr.shape}")
        if arr.size == 0:
            raise DataError("signal has no samples")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise DataError(f"non-finite sample at index {bad}")
        if self.sample_rate < 0:
            raise DataError(f"sample_rate must be >= 0, got {self.sample_rate}")
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.size

    def with_samples(self, samples: np.ndarray) -> "SignalSeries":
        """New series with replaced samples, keeping rate and label."""
        return SignalSeries(samples, self.sample_rate, self.label)


# Divisors for integer PCM, per sample dtype scipy hands back. 24-bit data
# arrives upshifted inside int32, so 2^31 is the right divisor there too.
_PCM_DIVISOR = {
    np.dtype(np.int16): 32768.0,
    np.dtype(np.int32): 2147483648.0,
}


def read_wav(path: str | Path, label: str | None = None) -> SignalSeries:
    """Load a RIFF/WAVE file as a normalized mono SignalSeries.

    Supports PCM (8/16/24/32-bit integer) and IEEE-float encodings.
    Integer samples are divided by 2^(bits-1); float samples are clipped
    to [-1, 1]. Multi-channel frames are averaged to mono.
    """
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"no such file: {p}")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WavFileWarning)
            rate, data = wavfile.read(str(p))
    except ValueError as exc:
        raise DataError(f"unsupported wav encoding in {p}: {exc}") from exc
    except Exception as exc:  # truncated / non-RIFF files
        raise DataError(f"not a readable wav file: {p}: {exc}") from exc
    if data.size == 0:
        raise DataError(f"wav file has a zero-length data chunk: {p}")

    if data.dtype == np.uint8:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    elif data.dtype in _PCM_DIVISOR:
        samples = data.astype(np.float64) / _PCM_DIVISOR[data.dtype]
    elif data.dtype in (np.float32, np.float64):
        samples = np.clip(data.astype(np.float64), -1.0, 1.0)
    else:
        raise DataError(f"unsupported wav sample type {data.dtype} in {p}")

    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    return SignalSeries(samples, sample_rate=int(rate), label=label)


def read_text(path: str | Path, label: str | None = None) -> SignalSeries:
    """Load a text file with one decimal amplitude per line.

    Blank lines are skipped; an unparsable or non-finite line fails with
    its line number. The resulting series has sample_rate 0 (unknown).
    """
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"no such file: {p}")
    values: list[float] = []
    with open(p, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text:
                continue
            try:
                value = float(text)
            except ValueError as exc:
                raise DataError(f"{p}: cannot parse line {lineno}: {text!r}") from exc
            if not math.isfinite(value):
                raise DataError(f"{p}: non-finite amplitude on line {lineno}: {text!r}")
            values.append(value)
    if not values:
        raise DataError(f"{p}: no amplitudes found")
    return SignalSeries(np.asarray(values), sample_rate=0, label=label)


def write_text(series: SignalSeries, path: str | Path) -> None:
    """Write one amplitude per line (LF endings, shortest exact decimal form)."""
    if len(series) == 0:
        raise DataError("refusing to write an empty series")
    p = Path(path)
    lines = "\n".join(repr(float(v)) for v in series.samples)
    with open(p, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(lines + "\n")


def write_wav(series: SignalSeries, path: str | Path, sample_rate: int | None = None) -> None:
    """Write a mono 16-bit PCM WAV; amplitudes are clipped to [-1, 1] first."""
    rate = series.sample_rate if sample_rate is None else int(sample_rate)
    if rate <= 0:
        raise DataError("a positive sample rate is required to write wav")
    clipped = np.clip(series.samples, -1.0, 1.0)
    pcm = np.round(clipped * 32767.0).astype(np.int16)
    wavfile.write(str(path), rate, pcm)
