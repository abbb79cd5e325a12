"""Plain SGD training with a softmax cross-entropy head.

Models end at logits; the loss applies a numerically-stable log-softmax.
Shuffling, batching and updates are fully determined by (model, dataset,
config), so one seed always reproduces the same trained parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from strokescreen.errors import DataError, TrainingDiverged
from strokescreen.seeding import rng_for
from strokescreen.nn.model import Model, backward_batch, forward_batch
from strokescreen.nn.tensor import Tensor

__all__ = ["TrainConfig", "train", "softmax_cross_entropy", "predict_batch"]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float
    epochs: int
    batch_size: int
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate < 0:
            raise DataError("learning_rate must be >= 0")
        if self.epochs < 1 or self.batch_size < 1:
            raise DataError("epochs and batch_size must be >= 1")


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray):
    """Mean cross-entropy and its gradient w.r.t. the logits."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    logz = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    logp = shifted - logz
    n = logits.shape[0]
    loss = -logp[np.arange(n), labels].mean()
    probs = np.exp(logp)
    grad = probs
    grad[np.arange(n), labels] -= 1.0
    return loss, grad / n


def _stack(dataset: Sequence[tuple[Tensor, int]]):
    if not dataset:
        raise DataError("empty dataset")
    shape = dataset[0][0].shape
    for i, (t, _) in enumerate(dataset):
        if t.shape != shape:
            raise DataError(f"inconsistent input shape at item {i}: {t.shape} != {shape}")
    xs = np.stack([t.array for t, _ in dataset])
    ys = np.array([int(label) for _, label in dataset], dtype=np.int64)
    return xs, ys


def train(
    model: Model,
    dataset: Sequence[tuple[Tensor, int]],
    cfg: TrainConfig,
    on_epoch: Callable[[int, float], None] | None = None,
) -> Model:
    """Return a newly trained model; the input model is left untouched."""
    xs, ys = _stack(dataset)
    trained = model.copy()
    rng = rng_for(cfg.seed)
    n = xs.shape[0]
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            xb, yb = xs[idx], ys[idx]
            out, caches = forward_batch(trained, xb, keep_caches=True)
            loss, dlogits = softmax_cross_entropy(out, yb)
            if not math.isfinite(loss):
                raise TrainingDiverged(epoch, loss)
            total += loss * len(idx)
            grads = backward_batch(trained, xb, dlogits, caches)
            if cfg.learning_rate != 0.0:
                for name, g in grads.items():
                    trained.parameters[name] = trained.parameters[name] - cfg.learning_rate * g
        if on_epoch is not None:
            on_epoch(epoch, total / n)
    return trained


def predict_batch(model: Model, inputs: Sequence[Tensor]) -> np.ndarray:
    """Class probabilities (softmax over the logits) for a list of inputs."""
    xs = np.stack([t.array for t in inputs])
    logits = forward_batch(model, xs)
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)
