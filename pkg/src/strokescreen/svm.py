"""Linear max-margin classifier with calibrated probability outputs.

Training standardizes features, then minimizes

    lambda/2 ||w||^2  +  mean_i max(0, 1 - y_i (w.x_i + b))

by full-batch subgradient steps on the step schedule eta_t = 1/(lambda t).
The bias is driven by the hinge subgradient only (unregularized). With
nonnegative_weights the weight vector is projected onto w >= 0 after every
step, which makes the decision margin nondecreasing in every feature.

calibrate() fits p = 1 / (1 + exp(a*m + b)) to (margin, label) pairs by
logistic-loss gradient descent, keeping the best iterate seen. For
nonnegative-weight models the slope a is clamped to <= 0, so the calibrated
probability is monotone nondecreasing in each input coordinate.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace

import numpy as np

from strokescreen.errors import DataError, ModelFormatError
from strokescreen.nn.io import KIND_SVM, read_records, write_records

__all__ = [
    "SvmModel",
    "SvmTrainConfig",
    "svm_train",
    "decision",
    "decision_many",
    "calibrate",
    "predict_probability",
    "hinge_objective",
    "dump_svm_bytes",
    "load_svm_bytes",
    "save_svm",
    "load_svm",
    "model_fingerprint",
]


@dataclass(frozen=True)
class SvmModel:
    weights: np.ndarray
    bias: float
    feature_means: np.ndarray
    feature_scales: np.ndarray
    platt_a: float = -1.0
    platt_b: float = 0.0
    nonnegative: bool = False

    def __post_init__(self):
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=np.float64))
        object.__setattr__(self, "feature_means", np.asarray(self.feature_means, dtype=np.float64))
        object.__setattr__(self, "feature_scales", np.asarray(self.feature_scales, dtype=np.float64))
        if self.weights.shape != self.feature_means.shape or self.weights.shape != self.feature_scales.shape:
            raise DataError("weights, means and scales must share one dimension")
        if np.any(self.feature_scales <= 0):
            raise DataError("feature scales must be positive")

    @property
    def dim(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class SvmTrainConfig:
    lam: float = 0.01
    iterations: int = 10_000
    seed: int = 0
    nonnegative_weights: bool = False

    def __post_init__(self):
        if self.lam <= 0:
            raise DataError("lambda must be > 0")
        if self.iterations < 1:
            raise DataError("iterations must be >= 1")


def _standardize_fit(x: np.ndarray):
    means = x.mean(axis=0)
    scales = x.std(axis=0)
    scales = np.where(scales < 1e-12, 1.0, scales)
    return means, scales


def _check_points(points) -> tuple[np.ndarray, np.ndarray]:
    if len(points) < 2:
        raise DataError("need at least two labeled points")
    x = np.asarray([np.asarray(p, dtype=np.float64) for p, _ in points])
    y = np.asarray([float(label) for _, label in points])
    if x.ndim != 2:
        raise DataError("inconsistent feature dimensions")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise DataError("labels must be +1 or -1")
    if len(set(y.tolist())) < 2:
        raise DataError("both classes must be present")
    return x, y


def hinge_objective(w: np.ndarray, b: float, xs: np.ndarray, ys: np.ndarray, lam: float) -> float:
    margins = xs @ w + b
    hinge = np.maximum(0.0, 1.0 - ys * margins)
    return 0.5 * lam * float(w @ w) + float(hinge.mean())


def svm_train(points, cfg: SvmTrainConfig = SvmTrainConfig()) -> SvmModel:
    """Train on (vector, +/-1) pairs; the returned objective never exceeds w=0's."""
    x, y = _check_points(points)
    means, scales = _standardize_fit(x)
    xs = (x - means) / scales

    n, d = xs.shape
    w = np.zeros(d)
    b = 0.0
    best_w, best_b = w.copy(), b
    best_obj = hinge_objective(w, b, xs, y, cfg.lam)
    for t in range(1, cfg.iterations + 1):
        eta = 1.0 / (cfg.lam * t)
        margins = xs @ w + b
        active = (y * margins) < 1.0
        if np.any(active):
            gw = cfg.lam * w - (y[active, None] * xs[active]).sum(axis=0) / n
            gb = -(y[active].sum()) / n
        else:
            gw = cfg.lam * w
            gb = 0.0
        w = w - eta * gw
        b = b - eta * gb
        if cfg.nonnegative_weights:
            np.maximum(w, 0.0, out=w)
        obj = hinge_objective(w, b, xs, y, cfg.lam)
        if obj < best_obj:
            best_obj = obj
            best_w, best_b = w.copy(), b
    return SvmModel(
        weights=best_w,
        bias=float(best_b),
        feature_means=means,
        feature_scales=scales,
        nonnegative=cfg.nonnegative_weights,
    )


def _standardized(model: SvmModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.dim:
        raise DataError(f"expected {model.dim} features, got {x.shape[-1]}")
    return (x - model.feature_means) / model.feature_scales


def decision(model: SvmModel, x) -> float:
    """Signed margin w . standardize(x) + b."""
    return float(_standardized(model, np.asarray(x)) @ model.weights + model.bias)


def decision_many(model: SvmModel, xs: np.ndarray) -> np.ndarray:
    return _standardized(model, xs) @ model.weights + model.bias


def calibrate(model: SvmModel, margins, labels, lr: float = 0.1, iterations: int = 2000) -> SvmModel:
    """Fit the sigmoid map from margins to probabilities; returns a new model."""
    m = np.asarray(margins, dtype=np.float64)
    y = np.asarray([1.0 if v > 0 else 0.0 for v in labels])
    if len(set(y.tolist())) < 2:
        raise DataError("calibration needs both classes")

    def loss_of(a: float, b: float) -> float:
        z = a * m + b
        # -log p for positives, -log(1-p) for negatives; p = sigmoid(-z)
        return float(np.mean(np.logaddexp(0.0, z) * y + np.logaddexp(0.0, -z) * (1.0 - y)))

    a, b = -1.0, 0.0
    best = (loss_of(a, b), a, b)
    n = m.shape[0]
    for _ in range(iterations):
        p = 1.0 / (1.0 + np.exp(a * m + b))
        # with z = a*m + b and p = sigmoid(-z), d loss / d z = y - p
        dldz = y - p
        ga = float(dldz @ m) / n
        gb = float(dldz.sum()) / n
        a -= lr * ga
        b -= lr * gb
        if model.nonnegative and a > 0.0:
            a = 0.0
        cur = loss_of(a, b)
        if cur < best[0]:
            best = (cur, a, b)
    _, a, b = best
    return replace(model, platt_a=float(a), platt_b=float(b))


def _sigmoid(z: float) -> float:
    # overflow-safe in both tails
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def predict_probability(model: SvmModel, x) -> float:
    """Calibrated positive-class probability, strictly inside (0, 1)."""
    margin = decision(model, x)
    p = _sigmoid(-(model.platt_a * margin + model.platt_b))
    return float(min(max(p, 1e-12), 1.0 - 1e-12))


def dump_svm_bytes(model: SvmModel) -> bytes:
    return write_records(
        {
            "__kind__": np.array([KIND_SVM]),
            "w": model.weights,
            "bias": np.array([model.bias]),
            "means": model.feature_means,
            "scales": model.feature_scales,
            "platt_a": np.array([model.platt_a]),
            "platt_b": np.array([model.platt_b]),
            "nonneg": np.array([1.0 if model.nonnegative else 0.0]),
        }
    )


def load_svm_bytes(data: bytes) -> SvmModel:
    records = read_records(data)
    if records.get("__kind__", [0])[0] != KIND_SVM:
        raise ModelFormatError("not a linear-classifier model file")
    return SvmModel(
        weights=records["w"],
        bias=float(records["bias"][0]),
        feature_means=records["means"],
        feature_scales=records["scales"],
        platt_a=float(records["platt_a"][0]),
        platt_b=float(records["platt_b"][0]),
        nonnegative=bool(records["nonneg"][0]),
    )


def save_svm(model: SvmModel, path) -> None:
    from pathlib import Path

    Path(path).write_bytes(dump_svm_bytes(model))


def load_svm(path) -> SvmModel:
    from pathlib import Path

    return load_svm_bytes(Path(path).read_bytes())


def model_fingerprint(model: SvmModel) -> str:
    return hashlib.sha256(dump_svm_bytes(model)).hexdigest()[:12]
