"""Hurst-exponent analysis of audio and time series.

Detrended fluctuation analysis with optional EMD denoising, synthetic
reference generators, corpus histogram statistics and screening logic,
all wired together by the `hurstlab` command-line tool.
"""

from .corpus_stats import EmotionBaseline, HurstHistogram, build_baseline, histogram, modal_hurst
from .dfa import (
    CorrelationClass,
    DfaConfig,
    FluctuationCurve,
    HurstEstimate,
    Profile,
    classify_correlation,
    fit_hurst,
    fluctuation_curve,
    fluctuation_function,
    fractal_dimension,
    hurst,
    hurst_spectrum,
    profile,
    scales,
    segment_variance,
)
from .emd import ImfSet, decompose, denoise, find_extrema, sift
from .errors import DataError, HurstlabError, NumericError, UsageError
from .screening import (
    ControlElement,
    MonitorHistory,
    Role,
    SeverityConfig,
    SeverityLevel,
    build_control_elements,
    classify_emotion,
    monitor_update,
    severity,
)
from .signal_io import SignalSeries, read_text, read_wav, write_text, write_wav
from .synth import GeneratorKind, GeneratorSpec, fgn, generate, random_walk, sine, white_noise

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "SignalSeries", "read_wav", "read_text", "write_text", "write_wav",
    "ImfSet", "find_extrema", "sift", "decompose", "denoise",
    "DfaConfig", "Profile", "FluctuationCurve", "HurstEstimate", "CorrelationClass",
    "profile", "scales", "segment_variance", "fluctuation_function",
    "fluctuation_curve", "fit_hurst", "hurst", "hurst_spectrum",
    "fractal_dimension", "classify_correlation",
    "GeneratorKind", "GeneratorSpec", "white_noise", "fgn", "random_walk", "sine", "generate",
    "HurstHistogram", "EmotionBaseline", "histogram", "modal_hurst", "build_baseline",
    "Role", "SeverityLevel", "ControlElement", "SeverityConfig", "MonitorHistory",
    "classify_emotion", "severity", "monitor_update", "build_control_elements",
    "HurstlabError", "UsageError", "DataError", "NumericError",
]
