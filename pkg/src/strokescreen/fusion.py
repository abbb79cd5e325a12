"""Tier-3 fusion: four modality confidences into one percent-risk diagnosis.

The fusion classifier is a nonnegative-weight linear model over the raw
confidences, calibrated to a probability; risk_percent is 100x that
probability and at_risk means risk_percent >= 50. A missing modality is
imputed at its training-set mean, which standardizes to zero and therefore
contributes exactly nothing to the margin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from strokescreen.errors import DataError
from strokescreen.svm import (
    SvmModel,
    SvmTrainConfig,
    calibrate,
    decision_many,
    model_fingerprint,
    predict_probability,
    svm_train,
)

__all__ = ["MODALITIES", "FusionInput", "Diagnosis", "fuse", "fusion_train"]

MODALITIES = ("vocal", "vascular", "retina", "face")

RISK_THRESHOLD_PERCENT = 50.0


@dataclass(frozen=True)
class FusionInput:
    vocal: float | None = None
    vascular: float | None = None
    retina: float | None = None
    face: float | None = None

    def __post_init__(self):
        for name in MODALITIES:
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise DataError(f"{name} confidence {v} outside [0, 1]")
        if self.vascular is None:
            raise DataError("vascular confidence is required")

    @property
    def present(self) -> tuple[str, ...]:
        return tuple(n for n in MODALITIES if getattr(self, n) is not None)

    @property
    def missing(self) -> tuple[str, ...]:
        return tuple(n for n in MODALITIES if getattr(self, n) is None)


@dataclass(frozen=True)
class Diagnosis:
    at_risk: bool
    risk_percent: float
    contributions: tuple[float, float, float, float]
    model_version: str
    imputed: tuple[str, ...] = ()

    def __post_init__(self):
        if not 0.0 <= self.risk_percent <= 100.0:
            raise DataError(f"risk_percent {self.risk_percent} outside [0, 100]")
        if self.at_risk != (self.risk_percent >= RISK_THRESHOLD_PERCENT):
            raise DataError("at_risk must equal risk_percent >= 50")
        if len(self.contributions) != len(MODALITIES):
            raise DataError("one contribution per modality")


def _vector(inp: FusionInput, means: np.ndarray) -> np.ndarray:
    vals = []
    for i, name in enumerate(MODALITIES):
        v = getattr(inp, name)
        vals.append(means[i] if v is None else float(v))
    return np.array(vals)


def fuse(svm: SvmModel, inp: FusionInput) -> Diagnosis:
    """Calibrated percent risk plus per-modality margin contributions."""
    if svm.dim != len(MODALITIES):
        raise DataError(f"fusion model expects {len(MODALITIES)} features")
    x = _vector(inp, svm.feature_means)
    standardized = (x - svm.feature_means) / svm.feature_scales
    contributions = tuple(float(c) for c in svm.weights * standardized)
    risk = 100.0 * predict_probability(svm, x)
    return Diagnosis(
        at_risk=risk >= RISK_THRESHOLD_PERCENT,
        risk_percent=risk,
        contributions=contributions,
        model_version=model_fingerprint(svm),
        imputed=inp.missing,
    )


def fusion_train(rows, cfg: SvmTrainConfig | None = None) -> SvmModel:
    """Train the fusion stage on (FusionInput, +/-1 label) rows; all present."""
    if cfg is None:
        cfg = SvmTrainConfig(nonnegative_weights=True)
    elif not cfg.nonnegative_weights:
        raise DataError("fusion training requires nonnegative weights")
    points = []
    for inp, label in rows:
        if inp.missing:
            raise DataError(f"training rows must carry all modalities, missing {inp.missing}")
        points.append((_vector(inp, np.zeros(len(MODALITIES))), label))
    model = svm_train(points, cfg)
    margins = decision_many(model, np.array([p for p, _ in points]))
    return calibrate(model, margins, [label for _, label in points])
