"""Tier-1 vitals triage: threshold alerting and the vascular risk score.

An alert fires when one criterion (systolic >= limit, heart rate >= limit,
or SpO2 <= limit) holds on `consecutive_required` consecutive samples; the
decision reports the first firing sample index and the criterion name. The
monitor is incremental, so feeding a stream sample-by-sample matches the
batch decision by construction.

The vascular classifier sees (systolic, diastolic, heart_rate, 100 - spo2),
orienting every feature so that larger means riskier; trained with
nonnegative weights this makes the risk score monotone in each direction.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from strokescreen.errors import StrokeScreenError
from strokescreen.svm import SvmModel, predict_probability

__all__ = [
    "VitalsError",
    "VitalsSample",
    "ThresholdPolicy",
    "AlertDecision",
    "ThresholdMonitor",
    "evaluate_stream",
    "vascular_features",
    "vascular_confidence",
    "parse_vitals_csv",
    "format_vitals_csv",
    "CSV_HEADER",
]

CSV_HEADER = "timestamp_ms,systolic,diastolic,heart_rate,spo2"

CRITERIA = ("systolic", "heart_rate", "spo2")


class VitalsError(StrokeScreenError):
    pass


@dataclass(frozen=True)
class VitalsSample:
    timestamp_ms: int
    systolic: float
    diastolic: float
    heart_rate: float
    spo2: float

    def validate(self) -> None:
        if not 40 <= self.systolic <= 300:
            raise VitalsError(f"systolic {self.systolic} outside [40, 300]")
        if not 20 <= self.diastolic < self.systolic:
            raise VitalsError(
                f"diastolic {self.diastolic} outside [20, systolic {self.systolic})"
            )
        if not 20 <= self.heart_rate <= 250:
            raise VitalsError(f"heart_rate {self.heart_rate} outside [20, 250]")
        if not 50 <= self.spo2 <= 100:
            raise VitalsError(f"spo2 {self.spo2} outside [50, 100]")


@dataclass(frozen=True)
class ThresholdPolicy:
    systolic_alert: float = 180.0
    heart_rate_alert: float = 100.0
    spo2_alert: float = 92.0
    consecutive_required: int = 3

    def __post_init__(self):
        if min(self.systolic_alert, self.heart_rate_alert, self.spo2_alert) <= 0:
            raise VitalsError("alert thresholds must be positive")
        if self.consecutive_required < 1:
            raise VitalsError("consecutive_required must be >= 1")


@dataclass(frozen=True)
class AlertDecision:
    fired: bool
    index: int | None = None
    reason: str | None = None


class ThresholdMonitor:
    """Online evaluator; one instance owns one stream."""

    def __init__(self, policy: ThresholdPolicy):
        self.policy = policy
        self._counts = dict.fromkeys(CRITERIA, 0)
        self._last_ts: int | None = None
        self._index = -1
        self.fired: AlertDecision | None = None

    def _breaches(self, sample: VitalsSample) -> dict[str, bool]:
        return {
            "systolic": sample.systolic >= self.policy.systolic_alert,
            "heart_rate": sample.heart_rate >= self.policy.heart_rate_alert,
            "spo2": sample.spo2 <= self.policy.spo2_alert,
        }

    def push(self, sample: VitalsSample) -> AlertDecision | None:
        """Validate and absorb one sample; returns the alert the first time it fires."""
        sample.validate()
        if self._last_ts is not None and sample.timestamp_ms <= self._last_ts:
            raise VitalsError(
                f"timestamps must strictly increase at sample {self._index + 1}: "
                f"{sample.timestamp_ms} after {self._last_ts}"
            )
        self._last_ts = sample.timestamp_ms
        self._index += 1
        for name, hit in self._breaches(sample).items():
            self._counts[name] = self._counts[name] + 1 if hit else 0
        if self.fired is None:
            for name in CRITERIA:  # fixed priority for same-sample ties
                if self._counts[name] >= self.policy.consecutive_required:
                    self.fired = AlertDecision(True, self._index, name)
                    return self.fired
        return None

    def reset_counts(self) -> None:
        self._counts = dict.fromkeys(CRITERIA, 0)
        self.fired = None


def evaluate_stream(policy: ThresholdPolicy, samples) -> AlertDecision:
    """Batch decision over a full stream; first firing index wins."""
    monitor = ThresholdMonitor(policy)
    for i, sample in enumerate(samples):
        try:
            alert = monitor.push(sample)
        except VitalsError as exc:
            raise VitalsError(f"sample {i}: {exc}") from None
        if alert is not None:
            return alert
    return AlertDecision(False)


def vascular_features(sample: VitalsSample) -> np.ndarray:
    return np.array(
        [sample.systolic, sample.diastolic, sample.heart_rate, 100.0 - sample.spo2]
    )


def vascular_confidence(svm: SvmModel, sample: VitalsSample) -> float:
    """Probability of vascular stroke risk for one reading, in (0, 1)."""
    sample.validate()
    return predict_probability(svm, vascular_features(sample))


def parse_vitals_csv(text: str | bytes) -> list[VitalsSample]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = [ln.strip() for ln in io.StringIO(text) if ln.strip()]
    if not lines or lines[0].replace(" ", "") != CSV_HEADER:
        raise VitalsError(f"expected header {CSV_HEADER!r}")
    samples = []
    for n, line in enumerate(lines[1:], start=1):
        parts = line.split(",")
        if len(parts) != 5:
            raise VitalsError(f"line {n}: expected 5 fields, got {len(parts)}")
        try:
            samples.append(
                VitalsSample(
                    timestamp_ms=int(parts[0]),
                    systolic=float(parts[1]),
                    diastolic=float(parts[2]),
                    heart_rate=float(parts[3]),
                    spo2=float(parts[4]),
                )
            )
        except ValueError as exc:
            raise VitalsError(f"line {n}: {exc}") from None
    return samples


def format_vitals_csv(samples) -> str:
    rows = [CSV_HEADER]
    rows += [
        f"{s.timestamp_ms},{s.systolic!r},{s.diastolic!r},{s.heart_rate!r},{s.spo2!r}"
        for s in samples
    ]
    return "\n".join(rows) + "\n"
