import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurstlab import synth
from hurstlab.corpus_stats import EmotionBaseline
from hurstlab.dfa import hurst
from hurstlab.errors import DataError, NumericError
from hurstlab.screening import (
    ControlElement,
    MonitorHistory,
    Role,
    SeverityConfig,
    SeverityLevel,
    build_control_elements,
    classify_emotion,
    controls_from_json,
    controls_to_json,
    history_from_json,
    history_to_json,
    monitor_update,
    severity,
)

NORMAL = ControlElement(center_h=0.60, delta=0.05, role=Role.NORMAL, n=60)
DISEASED = ControlElement(center_h=0.35, delta=0.07, role=Role.DISEASED, n=40)
CFG = SeverityConfig(approach_fraction=0.3)


def baseline(emotion, low, high, modal):
    return EmotionBaseline(emotion=emotion, language="synthetic", modal_h=modal,
                           h_range=(low, high), n=30, bin_width=0.05)


class TestControlElement:
    def test_invariants(self):
        with pytest.raises(ValueError, match="delta"):
            ControlElement(0.5, 0.0, Role.NORMAL)
        with pytest.raises(ValueError, match="center_h"):
            ControlElement(2.5, 0.1, Role.NORMAL)
        with pytest.raises(ValueError, match="center_h"):
            ControlElement(0.0, 0.1, Role.NORMAL)

    def test_band_properties(self):
        assert NORMAL.low == pytest.approx(0.55)
        assert NORMAL.high == pytest.approx(0.65)


class TestSeverity:
    def test_inside_normal_band(self):
        assert severity(0.61, NORMAL, DISEASED, CFG) is SeverityLevel.NONE

    def test_inside_diseased_band(self):
        assert severity(0.36, NORMAL, DISEASED, CFG) is SeverityLevel.SEVERITY2

    def test_between_bands_far_from_diseased(self):
        # distance to the diseased center is 0.15 > 0.3 * 0.25 = 0.075
        assert severity(0.50, NORMAL, DISEASED, CFG) is SeverityLevel.SEVERITY1

    def test_prognosis_zone(self):
        # outside both bands but within 0.075 of the diseased center
        assert severity(0.425 - 1e-9, NORMAL, DISEASED, CFG) is SeverityLevel.SEVERITY3

    def test_outside_far_side(self):
        assert severity(0.9, NORMAL, DISEASED, CFG) is SeverityLevel.SEVERITY1
        assert severity(0.05, NORMAL, DISEASED, CFG) is SeverityLevel.SEVERITY1
        # below the diseased band but within the approach zone
        assert severity(0.277, NORMAL, DISEASED, CFG) is SeverityLevel.SEVERITY3

    def test_total_and_single_valued_on_grid(self):
        for k in range(1, 200):
            level = severity(0.01 * k, NORMAL, DISEASED, CFG)
            assert isinstance(level, SeverityLevel)

    def test_overlapping_bands_rejected(self):
        wide_normal = ControlElement(0.60, 0.20, Role.NORMAL)
        with pytest.raises(NumericError, match="overlap"):
            severity(0.5, wide_normal, DISEASED, CFG)

    def test_role_order_enforced(self):
        with pytest.raises(ValueError, match="normal, diseased"):
            severity(0.5, DISEASED, NORMAL, CFG)

    def test_proneness_multiplier_widens_normal_band(self):
        cfg = SeverityConfig(proneness_multiplier=1.4, approach_fraction=0.3)
        # 0.53 is outside the 0.05 band but inside the widened 0.07 one
        assert severity(0.53, NORMAL, DISEASED, CFG) is SeverityLevel.SEVERITY1
        assert severity(0.53, NORMAL, DISEASED, cfg) is SeverityLevel.NONE

    def test_band_edges_inclusive(self):
        assert severity(0.55, NORMAL, DISEASED, CFG) is SeverityLevel.NONE
        assert severity(0.65, NORMAL, DISEASED, CFG) is SeverityLevel.NONE
        assert severity(0.28, NORMAL, DISEASED, CFG) is SeverityLevel.SEVERITY2
        assert severity(0.42, NORMAL, DISEASED, CFG) is SeverityLevel.SEVERITY2

    @settings(max_examples=100, deadline=None)
    @given(st.floats(min_value=0.001, max_value=1.999, allow_nan=False))
    def test_totality_property(self, h):
        assert severity(h, NORMAL, DISEASED, CFG) in list(SeverityLevel)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SeverityConfig(proneness_multiplier=0.5)
        with pytest.raises(ValueError):
            SeverityConfig(approach_fraction=1.0)
        with pytest.raises(ValueError):
            SeverityConfig(alarm_threshold=0)


class TestClassifyEmotion:
    ANGER = baseline("anger", 0.2, 0.45, 0.35)
    SAD = baseline("sad", 0.55, 0.8, 0.65)

    def test_unique_containment(self):
        assert classify_emotion(0.35, [self.ANGER, self.SAD]) == "anger"
        assert classify_emotion(0.6, [self.ANGER, self.SAD]) == "sad"

    def test_no_containment(self):
        assert classify_emotion(0.50, [self.ANGER, self.SAD]) is None

    def test_overlap_nearest_modal(self):
        a = baseline("a", 0.3, 0.55, 0.4)
        b = baseline("b", 0.45, 0.7, 0.6)
        assert classify_emotion(0.47, [a, b]) == "a"
        assert classify_emotion(0.53, [a, b]) == "b"

    def test_overlap_equidistant_tie(self):
        a = baseline("a", 0.3, 0.55, 0.4)
        b = baseline("b", 0.45, 0.7, 0.6)
        assert classify_emotion(0.50, [a, b]) is None

    def test_permutation_invariance(self):
        order_one = classify_emotion(0.35, [self.ANGER, self.SAD])
        order_two = classify_emotion(0.35, [self.SAD, self.ANGER])
        assert order_one == order_two == "anger"

    def test_empty_baselines(self):
        with pytest.raises(DataError):
            classify_emotion(0.5, [])


class TestMonitorUpdate:
    def observe(self, history, ts, h):
        return monitor_update(history, (ts, h), NORMAL, DISEASED, CFG)

    def test_alarm_on_monotone_approach(self):
        # severities S1,S1,S1 with distances to the diseased center
        # 0.15, 0.12, 0.10
        history = MonitorHistory()
        history, alarm = self.observe(history, 1.0, 0.50)
        assert not alarm
        history, alarm = self.observe(history, 2.0, 0.47)
        assert not alarm
        history, alarm = self.observe(history, 3.0, 0.45)
        assert alarm
        assert [o.severity for o in history.observations] == [SeverityLevel.SEVERITY1] * 3

    def test_short_run_no_alarm(self):
        history = MonitorHistory()
        history, _ = self.observe(history, 1.0, 0.60)   # None
        history, _ = self.observe(history, 2.0, 0.61)   # None
        history, alarm = self.observe(history, 3.0, 0.50)  # S1
        assert not alarm

    def test_moving_away_no_alarm(self):
        history = MonitorHistory()
        history, _ = self.observe(history, 1.0, 0.45)
        history, _ = self.observe(history, 2.0, 0.47)
        history, alarm = self.observe(history, 3.0, 0.50)
        assert not alarm

    def test_out_of_order_timestamp(self):
        history, _ = self.observe(MonitorHistory(), 5.0, 0.5)
        with pytest.raises(DataError, match="not later"):
            self.observe(history, 5.0, 0.5)
        with pytest.raises(DataError, match="not later"):
            self.observe(history, 4.0, 0.5)

    def test_history_immutable_and_grows_by_one(self):
        history = MonitorHistory()
        updated, _ = self.observe(history, 1.0, 0.5)
        assert len(history) == 0
        assert len(updated) == 1
        again, _ = self.observe(updated, 2.0, 0.47)
        assert len(updated) == 1
        assert len(again) == 2
        assert again.observations[:1] == updated.observations

    def test_severity2_in_window_still_counts_as_flagged(self):
        history = MonitorHistory()
        history, _ = self.observe(history, 1.0, 0.50)    # S1, dist 0.15
        history, _ = self.observe(history, 2.0, 0.44)    # S3 (within 0.075... check) dist 0.09
        history, alarm = self.observe(history, 3.0, 0.40)  # S2, dist 0.05
        assert alarm


class TestBuildControlElements:
    def test_synthetic_corpora(self):
        normal_values = [hurst(synth.fgn(0.65, 2**12, seed=s)).h for s in range(15)]
        diseased_values = [hurst(synth.fgn(0.40, 2**12, seed=50 + s)).h for s in range(15)]
        normal, diseased = build_control_elements(normal_values, diseased_values)
        assert normal.role is Role.NORMAL and diseased.role is Role.DISEASED
        assert normal.center_h > diseased.center_h
        assert normal.low > diseased.high  # separable bands

    def test_identical_corpora_overlap(self):
        values = list(np.linspace(0.4, 0.6, 12))
        with pytest.raises(NumericError, match="overlap"):
            build_control_elements(values, values)

    def test_small_corpus_rejected(self):
        with pytest.raises(DataError, match="at least 10"):
            build_control_elements([0.6] * 5, [0.4] * 15)

    def test_degenerate_corpus(self):
        with pytest.raises(NumericError, match="degenerate"):
            build_control_elements([0.6] * 12, list(np.linspace(0.3, 0.4, 12)))

    def test_std_delta_mode(self):
        normal_values = list(np.linspace(0.6, 0.7, 20))
        diseased_values = list(np.linspace(0.30, 0.40, 20))
        normal, _ = build_control_elements(normal_values, diseased_values,
                                           delta_mode="std", std_multiplier=2.0)
        assert normal.delta == pytest.approx(2.0 * np.std(normal_values))

    def test_bad_delta_mode(self):
        with pytest.raises(ValueError):
            build_control_elements([0.6] * 12, [0.4] * 12, delta_mode="mad")


class TestPersistence:
    def test_controls_roundtrip(self):
        text = controls_to_json(NORMAL, DISEASED)
        normal, diseased = controls_from_json(text)
        assert normal == NORMAL
        assert diseased == DISEASED
        doc = json.loads(text)
        assert doc["schema_version"] == 1

    def test_controls_version_mismatch(self):
        doc = json.loads(controls_to_json(NORMAL, DISEASED))
        doc["schema_version"] = 99
        with pytest.raises(DataError, match="schema_version"):
            controls_from_json(json.dumps(doc))

    def test_controls_malformed(self):
        with pytest.raises(DataError, match="malformed"):
            controls_from_json('{"schema_version": 1, "normal": {}}')

    def test_history_roundtrip(self):
        history = MonitorHistory((
            *(),
        ))
        history, _ = monitor_update(history, (1.0, 0.5), NORMAL, DISEASED, CFG)
        history, _ = monitor_update(history, (2.0, 0.47), NORMAL, DISEASED, CFG)
        back = history_from_json(history_to_json(history))
        assert back == history

    def test_history_version_mismatch(self):
        with pytest.raises(DataError, match="schema_version"):
            history_from_json('{"schema_version": 2, "observations": []}')

    def test_history_timestamps_validated(self):
        text = ('{"schema_version": 1, "observations": ['
                '{"timestamp": 2.0, "h": 0.5, "severity": 1},'
                '{"timestamp": 1.0, "h": 0.5, "severity": 1}]}')
        with pytest.raises(ValueError, match="strictly increasing"):
            history_from_json(text)
