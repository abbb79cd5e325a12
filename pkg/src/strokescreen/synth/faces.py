"""Synthetic 68-point faces around a symmetric template.

The template is built from its left half plus the midline points; the right
half comes from the mirror index map, so the unjittered shape is exactly
symmetric. "normal" adds small iid jitter; "paralysis" additionally drops
one cheek and the adjacent mouth corner downward by a difficulty-scaled
fraction of the interocular distance.
"""

from __future__ import annotations

import numpy as np

from strokescreen.face import FLIP, LandmarkSet, N_POINTS
from strokescreen.synth.spec import CorpusSpec

__all__ = ["gen_face", "template_face", "DROOP_RANGE"]

# droop in units of interocular distance, shrinking as difficulty rises
DROOP_RANGE = (0.05, 0.30)

# left-half and midline template coordinates (x right, y down, arbitrary px
# units, eye line near y=-20, interocular 60)
_HALF: dict[int, tuple[float, float]] = {}

# jaw: left temple down to chin
for _i in range(9):
    _t = _i / 8.0
    _HALF[_i] = (-65.0 * np.cos(np.pi / 2 * _t), 20.0 + 75.0 * np.sin(np.pi / 2 * _t) ** 1.1)
# left brow
for _i, _x in enumerate((-52.0, -44.0, -36.0, -27.0, -19.0)):
    _HALF[17 + _i] = (_x, -36.0 + 3.0 * np.sin(np.pi * _i / 4.0) * -1.0)
# nose bridge and base
for _i in range(4):
    _HALF[27 + _i] = (0.0, -22.0 + 10.0 * _i)
_HALF[33] = (0.0, 14.0)
_HALF[31] = (-11.0, 12.0)
_HALF[32] = (-5.5, 13.5)
# left eye hexagon centered (-30, -20)
_EYE = [(-40.0, -20.0), (-35.0, -24.0), (-26.0, -24.0), (-20.0, -20.0), (-26.0, -16.0), (-35.0, -16.0)]
for _i, _p in enumerate(_EYE):
    _HALF[36 + _i] = _p
# outer mouth: left corner + upper arc to midline, lower arc back
_HALF[48] = (-23.0, 44.0)
_HALF[49] = (-15.0, 40.0)
_HALF[50] = (-6.0, 38.0)
_HALF[51] = (0.0, 37.5)
_HALF[57] = (0.0, 52.0)
_HALF[58] = (-8.0, 51.0)
_HALF[59] = (-16.0, 49.0)
# inner mouth
_HALF[60] = (-18.0, 44.5)
_HALF[61] = (-7.0, 42.5)
_HALF[62] = (0.0, 42.0)
_HALF[66] = (0.0, 47.0)
_HALF[67] = (-8.0, 46.5)


def template_face() -> np.ndarray:
    pts = np.zeros((N_POINTS, 2))
    for i, xy in _HALF.items():
        pts[i] = xy
    for i in range(N_POINTS):
        j = FLIP[i]
        if j != i and i not in _HALF:
            pts[i] = (-pts[j, 0], pts[j, 1])
    return pts


_INTEROCULAR = 60.0  # template eye-center spacing

# droop target: one cheek run plus the mouth corner points on that side
_DROOP_LEFT = (1, 2, 3, 4, 5, 6, 48, 59, 60)
_DROOP_RIGHT = (10, 11, 12, 13, 14, 15, 54, 55, 64)


def gen_face(spec: CorpusSpec, droop_scale: float = 1.0) -> list[tuple[LandmarkSet, int]]:
    """Labeled landmark sets; label 1 = paralysis.

    droop_scale multiplies the displacement; at 0 the paralysis class
    degenerates into the normal one (same jitter, no droop).
    """
    rng = spec.rng()
    d = spec.difficulty
    base = template_face()
    lo = DROOP_RANGE[0] + 0.15 * (1.0 - d)
    hi = DROOP_RANGE[1] - 0.10 * d
    items: list[tuple[LandmarkSet, int]] = []
    for label in (0, 1):
        for _ in range(spec.n_per_class):
            pts = base + rng.normal(0.0, 1.2, size=(N_POINTS, 2))
            if label == 1:
                droop = droop_scale * rng.uniform(lo, hi) * _INTEROCULAR
                side = _DROOP_LEFT if rng.random() < 0.5 else _DROOP_RIGHT
                for i in side:
                    pts[i, 1] += droop
            scale = rng.uniform(0.8, 1.25)
            shift = rng.uniform(-20.0, 20.0, size=2)
            pts = pts * scale + shift + np.array([100.0, 100.0])
            items.append((LandmarkSet(points=pts), label))
    return items
