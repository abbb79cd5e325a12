"""Synthetic fusion-stage rows.

Positive rows draw each modality confidence Beta-skewed toward 1, negatives
toward 0: pos = 1 - spread*Beta(2,4), neg = spread*Beta(2,4). The spread
grows with difficulty; at difficulty 0 it is 0.45, leaving a guaranteed
per-coordinate margin of 0.1 between the classes, so a brute-force
hyperplane search always certifies linear separability there.
"""

from __future__ import annotations

import numpy as np

from strokescreen.fusion import MODALITIES, FusionInput
from strokescreen.synth.spec import CorpusSpec

__all__ = ["gen_fusion", "separating_hyperplane"]


def _spread(difficulty: float) -> float:
    return 0.45 + 0.4 * difficulty


def gen_fusion(spec: CorpusSpec) -> list[tuple[FusionInput, int]]:
    """Labeled fusion inputs; label 1 = at risk."""
    rng = spec.rng()
    spread = _spread(spec.difficulty)
    items: list[tuple[FusionInput, int]] = []
    for label in (0, 1):
        for _ in range(spec.n_per_class):
            raw = spread * rng.beta(2.0, 4.0, size=len(MODALITIES))
            vals = 1.0 - raw if label == 1 else raw
            items.append((FusionInput(*np.clip(vals, 0.0, 1.0)), label))
    return items


def separating_hyperplane(rows, grid_steps: int = 5):
    """Brute-force search for a separating (w, b) over a coarse grid.

    Returns the first separator found, or None. Used as the difficulty-0
    separability oracle, never by the trained path.
    """
    xs = np.array([[getattr(inp, m) for m in MODALITIES] for inp, _ in rows])
    ys = np.array([1.0 if label == 1 else -1.0 for _, label in rows])
    axis = np.linspace(0.0, 1.0, grid_steps)
    for w0 in axis:
        for w1 in axis:
            for w2 in axis:
                for w3 in axis:
                    w = np.array([w0, w1, w2, w3])
                    if not w.any():
                        continue
                    proj = xs @ w
                    for b in np.linspace(-proj.max(), -proj.min(), 4 * grid_steps):
                        if np.all(np.sign(proj + b) == ys):
                            return w, float(b)
    return None
