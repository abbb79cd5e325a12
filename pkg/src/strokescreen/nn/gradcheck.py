"""Finite-difference verification of analytic gradients.

The probe loss is sum(output * r) for a seeded random projection r, which is
linear in the output, so its exact output-gradient is r itself. Central
differences with eps=1e-5 on float64 give ~1e-10 truncation error, leaving
the relative-error budget to the backward implementation under test.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from strokescreen.nn import layers as L
from strokescreen.seeding import rng_for
from strokescreen.nn.model import Model, backward_batch, forward_batch
from strokescreen.nn.tensor import Tensor

__all__ = ["GradCheckReport", "grad_check"]

FROZEN_EPS = 1e-10


@dataclass
class GradCheckReport:
    max_rel_error: float
    per_param: dict[str, float] = field(default_factory=dict)
    frozen: list[str] = field(default_factory=list)

    def __float__(self):
        return self.max_rel_error


def grad_check(model: Model, input: Tensor, eps: float = 1e-5, seed: int = 0) -> GradCheckReport:
    """Max over parameters of |analytic - numeric| / max(1e-8, |analytic| + |numeric|)."""
    x = np.array(input.array[None, ...], dtype=np.float64, order="C")
    shapes = L.pipeline_shapes(list(model.layers), input.shape)
    rng = rng_for(seed)
    r = rng.normal(size=(1,) + tuple(shapes[-1]))

    _, caches = forward_batch(model, x, keep_caches=True)
    analytic = backward_batch(model, x, r, caches)

    def loss_at(m: Model) -> float:
        return float((forward_batch(m, x) * r).sum())

    report = GradCheckReport(max_rel_error=0.0)
    probe = model.copy()
    for name, param in probe.parameters.items():
        a = analytic[name]
        num = np.empty_like(param)
        flat = param.reshape(-1)
        nflat = num.reshape(-1)
        for j in range(flat.size):
            orig = flat[j]
            flat[j] = orig + eps
            hi = loss_at(probe)
            flat[j] = orig - eps
            lo = loss_at(probe)
            flat[j] = orig
            nflat[j] = (hi - lo) / (2.0 * eps)
        denom = np.maximum(1e-8, np.abs(a) + np.abs(num))
        err = float((np.abs(a - num) / denom).max())
        report.per_param[name] = err
        report.max_rel_error = max(report.max_rel_error, err)
        if np.abs(a).max() < FROZEN_EPS and np.abs(num).max() < FROZEN_EPS:
            report.frozen.append(name)
    return report
