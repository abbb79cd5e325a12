"""68-point facial landmarks: parsing, normalization, asymmetry features.

Landmark indices follow the standard 68-point annotation (0-based here):
jaw 0-16, brows 17-21 / 22-26, nose 27-35, eyes 36-41 / 42-47, mouth 48-67.
"left"/"right" name the viewer's side (smaller x is left in an upright
face). The eight regions partition those indices, with the cheeks taken as
the jawline runs 1-6 and 10-15.

Per-cheek displacement is the cheek-region centroid minus the nose-region
centroid, reported as (magnitude, angle). Asymmetry compares the left
displacement against the x-mirrored right displacement. Centroids use
math.fsum, which is order-independent, and the angle difference is taken
through atan2(cross, dot) on the mirrored pair — both choices make the
asymmetry of an exactly mirror-symmetric shape exactly (0, 0), not just
approximately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from strokescreen.errors import StrokeScreenError
from strokescreen.svm import SvmModel, predict_probability

__all__ = [
    "LandmarkError",
    "LandmarkSet",
    "FaceRegions",
    "DisplacementFeature",
    "DEFAULT_REGIONS",
    "parse_landmarks",
    "format_landmarks",
    "normalize_shape",
    "displacement_features",
    "mirror_landmarks",
    "paralysis_feature_vector",
    "paralysis_confidence",
]

N_POINTS = 68

LEFT_EYE = tuple(range(36, 42))
RIGHT_EYE = tuple(range(42, 48))

# flip table: index i <-> FLIP[i] under a horizontal mirror
_FLIP_PAIRS = (
    [(i, 16 - i) for i in range(8)]
    + [(17 + i, 26 - i) for i in range(5)]
    + [(31, 35), (32, 34)]
    + [(36, 45), (37, 44), (38, 43), (39, 42), (40, 47), (41, 46)]
    + [(48, 54), (49, 53), (50, 52), (55, 59), (56, 58)]
    + [(60, 64), (61, 63), (65, 67)]
)
FLIP = list(range(N_POINTS))
for _a, _b in _FLIP_PAIRS:
    FLIP[_a], FLIP[_b] = _b, _a


class LandmarkError(StrokeScreenError):
    pass


@dataclass(frozen=True)
class LandmarkSet:
    points: np.ndarray  # (68, 2)

    def __post_init__(self):
        arr = np.asarray(self.points, dtype=np.float64)
        if arr.shape != (N_POINTS, 2):
            raise LandmarkError(f"expected {N_POINTS} (x, y) pairs, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise LandmarkError("landmarks must be finite")
        object.__setattr__(self, "points", arr)


@dataclass(frozen=True)
class FaceRegions:
    left_brow: tuple[int, ...] = tuple(range(17, 22))
    right_brow: tuple[int, ...] = tuple(range(22, 27))
    left_eye: tuple[int, ...] = LEFT_EYE
    right_eye: tuple[int, ...] = RIGHT_EYE
    nose: tuple[int, ...] = tuple(range(27, 36))
    mouth: tuple[int, ...] = tuple(range(48, 68))
    left_cheek: tuple[int, ...] = tuple(range(1, 7))
    right_cheek: tuple[int, ...] = tuple(range(10, 16))

    def __post_init__(self):
        for name in ("nose", "left_cheek", "right_cheek"):
            if not getattr(self, name):
                raise LandmarkError(f"region {name} must not be empty")


DEFAULT_REGIONS = FaceRegions()


@dataclass(frozen=True)
class DisplacementFeature:
    alpha: tuple[float, float]  # left cheek (magnitude, angle)
    beta: tuple[float, float]  # right cheek (magnitude, angle)
    asymmetry: tuple[float, float]  # (|d magnitude|, |d angle after mirroring|)


def parse_landmarks(data: bytes | str) -> LandmarkSet:
    """Parse the "pts" text format: version line, n_points line, braced x-y pairs."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    tokens = text.replace("{", " { ").replace("}", " } ").split()
    fields: dict[str, str] = {}
    idx = 0
    while idx < len(tokens) and tokens[idx] != "{":
        tok = tokens[idx]
        if tok.endswith(":"):
            if idx + 1 >= len(tokens):
                raise LandmarkError(f"missing value after {tok!r}")
            fields[tok[:-1]] = tokens[idx + 1]
            idx += 2
        elif ":" in tok:
            key, value = tok.split(":", 1)
            fields[key] = value
            idx += 1
        else:
            raise LandmarkError(f"unexpected token {tok!r} in header")
    if "n_points" not in fields:
        raise LandmarkError("missing n_points header")
    try:
        declared = int(fields["n_points"])
    except ValueError:
        raise LandmarkError(f"bad n_points value {fields['n_points']!r}") from None
    if declared != N_POINTS:
        raise LandmarkError(f"expected n_points {N_POINTS}, got {declared}")
    if idx >= len(tokens) or tokens[idx] != "{":
        raise LandmarkError("missing opening brace")
    body = tokens[idx + 1 :]
    if "}" not in body:
        raise LandmarkError("missing closing brace")
    body = body[: body.index("}")]
    if len(body) != 2 * N_POINTS:
        raise LandmarkError(
            f"expected {2 * N_POINTS} coordinates, got {len(body)}"
        )
    try:
        flat = [float(t) for t in body]
    except ValueError as exc:
        raise LandmarkError(f"malformed coordinate: {exc}") from None
    return LandmarkSet(points=np.array(flat).reshape(N_POINTS, 2))


def format_landmarks(lm: LandmarkSet) -> str:
    lines = ["version: 1", f"n_points: {N_POINTS}", "{"]
    lines += [f"{float(x)!r} {float(y)!r}" for x, y in lm.points]
    lines.append("}")
    return "\n".join(lines) + "\n"


def _centroid(points: np.ndarray, idx: tuple[int, ...]) -> tuple[float, float]:
    # fsum: correctly-rounded and order-independent, so mirrored point sets
    # produce exactly negated x and exactly equal y
    xs = math.fsum(points[i, 0] for i in idx) / len(idx)
    ys = math.fsum(points[i, 1] for i in idx) / len(idx)
    return xs, ys


def _eye_centers(points: np.ndarray):
    return _centroid(points, LEFT_EYE), _centroid(points, RIGHT_EYE)


def normalize_shape(lm: LandmarkSet) -> LandmarkSet:
    """Translate the eye-center midpoint to the origin and scale interocular distance to 1."""
    pts = lm.points
    (lx, ly), (rx, ry) = _eye_centers(pts)
    dist = math.hypot(lx - rx, ly - ry)
    if dist <= 0.0:
        raise LandmarkError("coincident eye centers; cannot normalize")
    mid_x = (lx + rx) / 2.0
    mid_y = (ly + ry) / 2.0
    out = np.empty_like(pts)
    out[:, 0] = (pts[:, 0] - mid_x) / dist
    out[:, 1] = (pts[:, 1] - mid_y) / dist
    return LandmarkSet(points=out)


def _wrap_angle(a: float) -> float:
    # into (-pi, pi]
    while a <= -math.pi:
        a += 2.0 * math.pi
    while a > math.pi:
        a -= 2.0 * math.pi
    return a


def displacement_features(
    lm: LandmarkSet, regions: FaceRegions = DEFAULT_REGIONS
) -> DisplacementFeature:
    """Per-cheek displacement vs the nose anchor; expects normalized landmarks."""
    pts = lm.points
    nose = _centroid(pts, regions.nose)
    lcx, lcy = _centroid(pts, regions.left_cheek)
    rcx, rcy = _centroid(pts, regions.right_cheek)
    la = (lcx - nose[0], lcy - nose[1])
    rb = (rcx - nose[0], rcy - nose[1])
    alpha = (math.hypot(*la), _wrap_angle(math.atan2(la[1], la[0])))
    beta = (math.hypot(*rb), _wrap_angle(math.atan2(rb[1], rb[0])))
    # compare left against the x-mirrored right, via cross/dot so that an
    # exactly mirrored pair cancels to exactly zero
    mbx, mby = -rb[0], rb[1]
    if alpha[0] == 0.0 or (mbx == 0.0 and mby == 0.0):
        dangle = abs(_wrap_angle(alpha[1] - _wrap_angle(math.atan2(mby, mbx))))
    else:
        cross = la[0] * mby - la[1] * mbx
        dot = la[0] * mbx + la[1] * mby
        dangle = abs(math.atan2(cross, dot))
    return DisplacementFeature(
        alpha=alpha, beta=beta, asymmetry=(abs(alpha[0] - beta[0]), dangle)
    )


def mirror_landmarks(lm: LandmarkSet, axis_x: float = 0.0) -> LandmarkSet:
    """Horizontal mirror about x = axis_x, with the standard index remap."""
    out = np.empty_like(lm.points)
    for i in range(N_POINTS):
        src = FLIP[i]
        out[i, 0] = 2.0 * axis_x - lm.points[src, 0] if axis_x != 0.0 else -lm.points[src, 0]
        out[i, 1] = lm.points[src, 1]
    return LandmarkSet(points=out)


def paralysis_feature_vector(lm: LandmarkSet, regions: FaceRegions = DEFAULT_REGIONS) -> np.ndarray:
    """(alpha, beta, asymmetry) flattened for the classifier."""
    f = displacement_features(normalize_shape(lm), regions)
    return np.array([f.alpha[0], f.alpha[1], f.beta[0], f.beta[1], f.asymmetry[0], f.asymmetry[1]])


def paralysis_confidence(svm: SvmModel, lm: LandmarkSet) -> float:
    """Probability of facial paralysis, in (0, 1)."""
    return predict_probability(svm, paralysis_feature_vector(lm))
