"""Screening logic: control elements, emotion tagging, severity, alarms.

Two baselined bands (a normal-population center H +- delta and a
diseased-population one) partition the Hurst axis into severity levels:
inside the normal band nothing is flagged, inside the diseased band the
onset level fires, and the space between splits by proximity to the
diseased center into a proneness level and a prognosis level. A monitor
over repeated observations raises an alarm when enough consecutive
flagged values creep toward the diseased center.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum, IntEnum

import numpy as np

from .corpus_stats import EmotionBaseline, histogram
from .dfa import HurstEstimate
from .errors import DataError, NumericError

__all__ = [
    "Role",
    "SeverityLevel",
    "ControlElement",
    "SeverityConfig",
    "Observation",
    "MonitorHistory",
    "classify_emotion",
    "severity",
    "monitor_update",
    "build_control_elements",
    "controls_to_json",
    "controls_from_json",
    "history_to_json",
    "history_from_json",
]

SCHEMA_VERSION = 1


class Role(Enum):
    NORMAL = "normal"
    DISEASED = "diseased"


class SeverityLevel(IntEnum):
    """Ordered so that "flagged at all" reads as >= SEVERITY1."""

    NONE = 0
    SEVERITY1 = 1  # prone: outside the normal band
    SEVERITY2 = 2  # onset: inside the diseased band
    SEVERITY3 = 3  # prognosis zone: approaching the diseased band


@dataclass(frozen=True)
class ControlElement:
    """A baselined H +- delta band for one population."""

    center_h: float
    delta: float
    role: Role
    n: int = 0

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not 0.0 < self.center_h < 2.0:
            raise ValueError(f"center_h must lie in (0, 2), got {self.center_h}")

    @property
    def low(self) -> float:
        return self.center_h - self.delta

    @property
    def high(self) -> float:
        return self.center_h + self.delta


@dataclass(frozen=True)
class SeverityConfig:
    """Knobs of the severity partition.

    proneness_multiplier widens the normal band before anything is
    flagged; approach_fraction sets how close to the diseased center
    (as a fraction of the center gap) counts as the prognosis zone;
    alarm_threshold is the run length of flagged observations needed
    for an alarm.
    """

    proneness_multiplier: float = 1.0
    approach_fraction: float = 0.3
    alarm_threshold: int = 3

    def __post_init__(self):
        if self.proneness_multiplier < 1.0:
            raise ValueError("proneness_multiplier must be >= 1")
        if not 0.0 < self.approach_fraction < 1.0:
            raise ValueError("approach_fraction must lie in (0, 1)")
        if self.alarm_threshold < 1:
            raise ValueError("alarm_threshold must be >= 1")


@dataclass(frozen=True)
class Observation:
    timestamp: float
    h: float
    severity: SeverityLevel


@dataclass(frozen=True)
class MonitorHistory:
    """Append-only record of one subject's screening observations."""

    observations: tuple[Observation, ...] = field(default_factory=tuple)

    def __post_init__(self):
        stamps = [o.timestamp for o in self.observations]
        if any(b <= a for a, b in zip(stamps, stamps[1:])):
            raise ValueError("observation timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.observations)


def classify_emotion(h: float, baselines: list[EmotionBaseline]) -> str | None:
    """Tag h with the emotion whose baselined range contains it.

    Containment in exactly one range wins outright; overlapping matches
    resolve to the nearest modal value, with exact ties (and no match at
    all) returning None.
    """
    if not baselines:
        raise DataError("at least one baseline is required")
    hits = [b for b in baselines if b.contains(h)]
    if not hits:
        return None
    if len(hits) == 1:
        return hits[0].emotion
    distances = [abs(h - b.modal_h) for b in hits]
    best = min(distances)
    winners = [b for b, d in zip(hits, distances) if d == best]
    if len(winners) > 1:
        return None
    return winners[0].emotion


def _effective_bands(normal: ControlElement, diseased: ControlElement,
                     cfg: SeverityConfig) -> tuple[float, float, float, float]:
    norm_half = cfg.proneness_multiplier * normal.delta
    n_lo, n_hi = normal.center_h - norm_half, normal.center_h + norm_half
    d_lo, d_hi = diseased.low, diseased.high
    if max(n_lo, d_lo) <= min(n_hi, d_hi):
        raise NumericError(
            "normal and diseased bands overlap; the baselines are not "
            "separable and screening would be unreliable"
        )
    return n_lo, n_hi, d_lo, d_hi


def severity(h: float, normal: ControlElement, diseased: ControlElement,
             cfg: SeverityConfig = SeverityConfig()) -> SeverityLevel:
    """Exactly one severity level for any h under a separable configuration."""
    if normal.role is not Role.NORMAL or diseased.role is not Role.DISEASED:
        raise ValueError("control elements must be passed as (normal, diseased)")
    n_lo, n_hi, d_lo, d_hi = _effective_bands(normal, diseased, cfg)
    if n_lo <= h <= n_hi:
        return SeverityLevel.NONE
    if d_lo <= h <= d_hi:
        return SeverityLevel.SEVERITY2
    gap = abs(normal.center_h - diseased.center_h)
    if abs(h - diseased.center_h) <= cfg.approach_fraction * gap:
        return SeverityLevel.SEVERITY3
    return SeverityLevel.SEVERITY1


def monitor_update(history: MonitorHistory, observation: tuple[float, float],
                   normal: ControlElement, diseased: ControlElement,
                   cfg: SeverityConfig = SeverityConfig()) -> tuple[MonitorHistory, bool]:
    """Append one (timestamp, h) observation and evaluate the alarm rule.

    The alarm fires when the latest alarm_threshold observations are all
    flagged (severity >= 1) and their distances to the diseased center
    are non-increasing, i.e. the subject keeps drifting toward onset.
    """
    timestamp, h = float(observation[0]), float(observation[1])
    if history.observations and timestamp <= history.observations[-1].timestamp:
        raise DataError(
            f"timestamp {timestamp} is not later than the last recorded "
            f"{history.observations[-1].timestamp}"
        )
    level = severity(h, normal, diseased, cfg)
    updated = MonitorHistory(history.observations + (Observation(timestamp, h, level),))

    window = updated.observations[-cfg.alarm_threshold:]
    alarm = False
    if len(window) == cfg.alarm_threshold:
        flagged = all(o.severity >= SeverityLevel.SEVERITY1 for o in window)
        dists = [abs(o.h - diseased.center_h) for o in window]
        approaching = all(b <= a for a, b in zip(dists, dists[1:]))
        alarm = flagged and approaching
    return updated, alarm


def build_control_elements(normal_corpus, diseased_corpus,
                           min_corpus: int = 10,
                           delta_mode: str = "support",
                           std_multiplier: float = 2.0,
                           bin_width: float | None = None) -> tuple[ControlElement, ControlElement]:
    """Baseline (normal, diseased) control elements from Hurst corpora.

    The center is the modal Hurst of the corpus histogram; delta is half
    the histogram support width, or std_multiplier times the standard
    deviation with delta_mode="std". Overlapping resulting bands mean
    the populations are not separable and raise an error.
    """
    if delta_mode not in ("support", "std"):
        raise ValueError(f"delta_mode must be 'support' or 'std', got {delta_mode!r}")

    def element(estimates, role: Role) -> ControlElement:
        values = [e.h if isinstance(e, HurstEstimate) else float(e) for e in estimates]
        if len(values) < min_corpus:
            raise DataError(
                f"{role.value} corpus has {len(values)} estimates; "
                f"at least {min_corpus} are required"
            )
        hist = histogram(values, bin_width)
        if delta_mode == "std":
            delta = std_multiplier * float(np.std(values))
        else:
            delta = 0.5 * (hist.bin_edges[-1] - hist.bin_edges[0])
        if delta <= 0:
            raise NumericError(f"{role.value} corpus is degenerate (zero spread)")
        return ControlElement(center_h=hist.modal_value, delta=delta, role=role, n=len(values))

    normal = element(normal_corpus, Role.NORMAL)
    diseased = element(diseased_corpus, Role.DISEASED)
    if max(normal.low, diseased.low) <= min(normal.high, diseased.high):
        raise NumericError(
            "normal and diseased control bands overlap; screening on these "
            "corpora would be unreliable"
        )
    return normal, diseased


def controls_to_json(normal: ControlElement, diseased: ControlElement) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "normal": {"center_h": normal.center_h, "delta": normal.delta,
                   "role": normal.role.value, "n": normal.n},
        "diseased": {"center_h": diseased.center_h, "delta": diseased.delta,
                     "role": diseased.role.value, "n": diseased.n},
    }
    return json.dumps(doc, indent=2) + "\n"


def controls_from_json(text: str) -> tuple[ControlElement, ControlElement]:
    doc = json.loads(text)
    try:
        if doc["schema_version"] != SCHEMA_VERSION:
            raise DataError(f"unsupported controls schema_version: {doc['schema_version']}")
        out = []
        for key in ("normal", "diseased"):
            entry = doc[key]
            out.append(ControlElement(
                center_h=float(entry["center_h"]), delta=float(entry["delta"]),
                role=Role(entry["role"]), n=int(entry.get("n", 0)),
            ))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed controls document: {exc}") from exc
    return out[0], out[1]


def history_to_json(history: MonitorHistory) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "observations": [
            {"timestamp": o.timestamp, "h": o.h, "severity": int(o.severity)}
            for o in history.observations
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def history_from_json(text: str) -> MonitorHistory:
    doc = json.loads(text)
    try:
        if doc["schema_version"] != SCHEMA_VERSION:
            raise DataError(f"unsupported history schema_version: {doc['schema_version']}")
        obs = tuple(
            Observation(float(o["timestamp"]), float(o["h"]), SeverityLevel(int(o["severity"])))
            for o in doc["observations"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed history document: {exc}") from exc
    return MonitorHistory(obs)
