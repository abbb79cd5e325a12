"""Synthetic vitals streams.

"normal" streams are stationary around (118, 76, 72, 98); "stroke_risk"
streams start normal and spike to elevated means about a third of the way
in. Difficulty pulls the elevated means back toward normal. Samples always
satisfy the vitals invariants (ranges, diastolic < systolic, strictly
increasing timestamps).
"""

from __future__ import annotations

import numpy as np

from strokescreen.synth.spec import CorpusSpec
from strokescreen.vitals import VitalsSample

__all__ = ["gen_vitals", "NORMAL_MEANS", "RISK_MEANS", "STREAM_LEN"]

NORMAL_MEANS = (118.0, 76.0, 72.0, 98.0)
RISK_MEANS = (188.0, 106.0, 112.0, 89.0)
_SDS = (5.0, 3.5, 4.0, 0.9)
STREAM_LEN = 60
_STEP_MS = 1000


def _sample(rng, means, ts) -> VitalsSample:
    sys = float(np.clip(rng.normal(means[0], _SDS[0]), 45.0, 295.0))
    dia = float(np.clip(rng.normal(means[1], _SDS[1]), 25.0, sys - 5.0))
    hr = float(np.clip(rng.normal(means[2], _SDS[2]), 25.0, 245.0))
    spo2 = float(np.clip(rng.normal(means[3], _SDS[3]), 55.0, 100.0))
    return VitalsSample(
        timestamp_ms=ts, systolic=sys, diastolic=dia, heart_rate=hr, spo2=spo2
    )


def risk_means(difficulty: float) -> tuple[float, ...]:
    return tuple(
        n + (r - n) * (1.0 - 0.55 * difficulty)
        for n, r in zip(NORMAL_MEANS, RISK_MEANS)
    )


def gen_vitals(spec: CorpusSpec, stream_len: int = STREAM_LEN):
    """Labeled streams (lists of VitalsSample); label 1 = stroke_risk."""
    rng = spec.rng()
    elevated = risk_means(spec.difficulty)
    items: list[tuple[list[VitalsSample], int]] = []
    for label in (0, 1):
        for _ in range(spec.n_per_class):
            onset = int(rng.integers(stream_len // 4, stream_len // 2)) if label else stream_len
            t0 = int(rng.integers(1_600_000_000_000, 1_700_000_000_000))
            stream = [
                _sample(rng, elevated if i >= onset else NORMAL_MEANS, t0 + i * _STEP_MS)
                for i in range(stream_len)
            ]
            items.append((stream, label))
    return items
