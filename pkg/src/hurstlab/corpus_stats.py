"""Corpus-level aggregation: histograms of per-file Hurst exponents.

A corpus of estimates is binned into a frequency histogram; the center
of the peak bin (the modal Hurst) stands in as the representative value
for that emotion and language, and the histogram support bounds the
range used later for emotion tagging.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dfa import HurstEstimate
from .errors import DataError

__all__ = ["HurstHistogram", "EmotionBaseline", "histogram", "modal_hurst",
           "build_baseline", "histogram_to_csv", "baseline_to_document",
           "baseline_from_document", "DEFAULT_MIN_CORPUS"]

DEFAULT_MIN_CORPUS = 10
_MAX_AUTO_BINS = 10_000
_MAX_BINS = 1_000_000


@dataclass(frozen=True)
class HurstHistogram:
    """Frequency histogram over a set of Hurst exponents."""

    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    bin_width: float
    modal_value: float
    n: int


@dataclass(frozen=True)
class EmotionBaseline:
    """Modal Hurst and support range for one emotion in one language."""

    emotion: str
    language: str
    modal_h: float
    h_range: tuple[float, float]
    n: int
    bin_width: float

    def contains(self, h: float) -> bool:
        return self.h_range[0] <= h <= self.h_range[1]


def _auto_bin_width(values: np.ndarray) -> float:
    """Freedman-Diaconis width, or range/sqrt(n) when the IQR collapses.

    A vanishing IQR (exactly zero, or so small that it would explode the
    bin count) falls back to the range-based width.
    """
    n = values.size
    spread = float(values.max() - values.min())
    q25, q75 = np.percentile(values, [25.0, 75.0])
    iqr = q75 - q25
    if iqr > 0:
        width = 2.0 * iqr * n ** (-1.0 / 3.0)
        if spread / width <= _MAX_AUTO_BINS:
            return width
    return spread / math.sqrt(n)


def histogram(values, bin_width: float | None = None) -> HurstHistogram:
    """Bin values into [edge, edge + width) bins, the last bin closed.

    bin_width=None selects the Freedman-Diaconis width from the data.
    Identical values collapse to a single degenerate bin whose center is
    that value.
    """
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size < 2:
        raise DataError(f"histogram needs at least 2 values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DataError("histogram input contains non-finite values")
    if bin_width is not None and bin_width <= 0:
        raise ValueError(f"bin_width must be positive, got {bin_width}")

    lo = float(arr.min())
    hi = float(arr.max())
    if hi == lo:
        # Degenerate corpus: a single zero-width bin centered on the value.
        return HurstHistogram(
            bin_edges=(lo, lo), counts=(int(arr.size),), bin_width=0.0,
            modal_value=lo, n=int(arr.size),
        )
    width = _auto_bin_width(arr) if bin_width is None else float(bin_width)

    n_bins = max(1, math.ceil((hi - lo) / width - 1e-9))
    if n_bins > _MAX_BINS:
        raise ValueError(
            f"bin_width {width} over range [{lo}, {hi}] would need {n_bins} bins"
        )
    edges = lo + width * np.arange(n_bins + 1)
    edges[-1] = max(edges[-1], hi)  # guard against rounding shortfall
    counts, _ = np.histogram(arr, bins=edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    modal = float(centers[int(np.argmax(counts))])  # argmax ties break low
    return HurstHistogram(
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        bin_width=width,
        modal_value=modal,
        n=int(arr.size),
    )


def modal_hurst(hist: HurstHistogram) -> float:
    """Center of the maximal-count bin; ties resolve to the lower bin."""
    edges = np.asarray(hist.bin_edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return float(centers[int(np.argmax(hist.counts))])


def build_baseline(per_file_estimates, emotion: str, language: str,
                   bin_width: float | None = None,
                   min_corpus: int = DEFAULT_MIN_CORPUS) -> EmotionBaseline:
    """Histogram a corpus of estimates and record its modal Hurst.

    Corpora below min_corpus files are allowed with a warning; fewer
    than 2 estimates cannot form a histogram at all.
    """
    values = [e.h if isinstance(e, HurstEstimate) else float(e) for e in per_file_estimates]
    if len(values) < 2:
        raise DataError(f"baseline needs at least 2 estimates, got {len(values)}")
    if len(values) < min_corpus:
        warnings.warn(
            f"corpus for {emotion}/{language} has only {len(values)} estimates "
            f"(floor {min_corpus}); the baseline may be unstable",
            stacklevel=2,
        )
    hist = histogram(values, bin_width)
    return EmotionBaseline(
        emotion=emotion,
        language=language,
        modal_h=hist.modal_value,
        h_range=(hist.bin_edges[0], hist.bin_edges[-1]),
        n=hist.n,
        bin_width=hist.bin_width,
    )


def baseline_to_document(baseline: EmotionBaseline, created_at: str) -> dict:
    """JSON-ready persistence form of a baseline."""
    return {
        "emotion": baseline.emotion,
        "language": baseline.language,
        "modal_h": baseline.modal_h,
        "h_low": baseline.h_range[0],
        "h_high": baseline.h_range[1],
        "n": baseline.n,
        "bin_width": baseline.bin_width,
        "created_at": created_at,
    }


def baseline_from_document(doc: dict) -> EmotionBaseline:
    """Rebuild a baseline from its persisted document."""
    try:
        return EmotionBaseline(
            emotion=str(doc["emotion"]),
            language=str(doc["language"]),
            modal_h=float(doc["modal_h"]),
            h_range=(float(doc["h_low"]), float(doc["h_high"])),
            n=int(doc["n"]),
            bin_width=float(doc["bin_width"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed baseline document: {exc}") from exc


def histogram_to_csv(hist: HurstHistogram, path: str | Path) -> None:
    """Write plot-ready rows of bin_center,count."""
    edges = np.asarray(hist.bin_edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["bin_center", "count"])
        for center, count in zip(centers, hist.counts):
            writer.writerow([repr(float(center)), count])
