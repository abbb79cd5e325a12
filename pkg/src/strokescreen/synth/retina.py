"""Synthetic fundus images: vignette disc, curved vessels, optional exudates.

"normal" images are a bright retinal disc with smooth dark vessel strokes;
"retinopathy" adds bright exudate blobs and vessel-caliber irregularity
(jittered stroke width). Difficulty fades blob contrast and count toward
the normal class.
"""

from __future__ import annotations

import numpy as np

from strokescreen.synth.spec import CorpusSpec
from strokescreen.vision import Image

__all__ = ["gen_retina", "bright_blob_pixels", "SIDE"]

SIDE = 128

BLOB_ORACLE_THRESHOLD = 0.84


def _base_fundus(rng: np.random.Generator) -> np.ndarray:
    yy, xx = np.mgrid[0:SIDE, 0:SIDE]
    cx, cy = SIDE / 2 + rng.uniform(-4, 4), SIDE / 2 + rng.uniform(-4, 4)
    r2 = (xx - cx) ** 2 + (yy - cy) ** 2
    img = 0.42 + 0.28 * np.exp(-r2 / (0.45 * SIDE) ** 2)
    # optic disc: small brighter circle off-center
    ox = cx + rng.uniform(0.18, 0.3) * SIDE * rng.choice([-1.0, 1.0])
    oy = cy + rng.uniform(-0.08, 0.08) * SIDE
    od = (xx - ox) ** 2 + (yy - oy) ** 2
    img += 0.1 * np.exp(-od / (0.055 * SIDE) ** 2)
    return np.clip(img, 0.0, 0.8), (ox, oy)


def _stamp(img: np.ndarray, x: float, y: float, sigma: float, amp: float) -> None:
    lo_x, hi_x = int(max(0, x - 3 * sigma)), int(min(SIDE, x + 3 * sigma + 1))
    lo_y, hi_y = int(max(0, y - 3 * sigma)), int(min(SIDE, y + 3 * sigma + 1))
    if lo_x >= hi_x or lo_y >= hi_y:
        return
    yy, xx = np.mgrid[lo_y:hi_y, lo_x:hi_x]
    img[lo_y:hi_y, lo_x:hi_x] += amp * np.exp(
        -((xx - x) ** 2 + (yy - y) ** 2) / (2.0 * sigma**2)
    )


def _draw_vessels(img: np.ndarray, origin, rng: np.random.Generator, irregular: bool) -> None:
    ox, oy = origin
    for _ in range(rng.integers(3, 6)):
        angle = rng.uniform(0, 2 * np.pi)
        curve = rng.uniform(-0.02, 0.02)
        width = rng.uniform(1.6, 2.4)
        steps = rng.integers(60, 110)
        for s in range(int(steps)):
            a = angle + curve * s
            x = ox + s * 0.9 * np.cos(a)
            y = oy + s * 0.9 * np.sin(a)
            if not (0 <= x < SIDE and 0 <= y < SIDE):
                break
            w = width
            if irregular and (s // 8) % 2 == 0:
                w = width * rng.uniform(1.5, 2.2)
            _stamp(img, x, y, w, -0.12)


def gen_retina(spec: CorpusSpec) -> list[tuple[Image, int]]:
    """Labeled 128x128 grayscale images; label 1 = retinopathy."""
    rng = spec.rng()
    d = spec.difficulty
    items: list[tuple[Image, int]] = []
    for label in (0, 1):
        for _ in range(spec.n_per_class):
            img, origin = _base_fundus(rng)
            _draw_vessels(img, origin, rng, irregular=label == 1)
            if label == 1:
                n_blobs = max(1, int(round(rng.integers(5, 9) * (1.0 - 0.4 * d))))
                for _ in range(n_blobs):
                    bx = rng.uniform(0.2 * SIDE, 0.8 * SIDE)
                    by = rng.uniform(0.2 * SIDE, 0.8 * SIDE)
                    sigma = rng.uniform(3.0, 5.5)
                    amp = rng.uniform(0.35, 0.5) * (1.0 - 0.35 * d)
                    _stamp(img, bx, by, sigma, amp)
            img = img + rng.normal(0.0, 0.015, size=img.shape)
            items.append(
                (Image(SIDE, SIDE, np.clip(img, 0.0, 1.0).ravel()), label)
            )
    return items


def bright_blob_pixels(img: Image, threshold: float = BLOB_ORACLE_THRESHOLD) -> int:
    """Count of pixels above the exudate brightness threshold; the class oracle."""
    return int((img.grid > threshold).sum())
