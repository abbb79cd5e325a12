"""Portable image decoding, denoising preprocessing, and the retinopathy CNN.

Formats: binary PGM (P5) and PPM (P6) with maxval 255, the only two the
pipeline needs; color converts to luma (0.299 R + 0.587 G + 0.114 B).

preprocess() = 3x3 median filter (edge-replicated borders), bilinear resize
to 64x64 on the pixel-center convention

    src = (dst + 0.5) * (in_extent / out_extent) - 0.5

then per-image standardization to mean 0 / stdev 1 with a 1e-6 stdev floor,
so constant images come out all zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from strokescreen.errors import StrokeScreenError
from strokescreen.nn import layers as L
from strokescreen.nn.model import Model, forward_batch
from strokescreen.nn.tensor import Tensor

__all__ = [
    "Image",
    "ImageError",
    "ImageMagicError",
    "ImageDepthError",
    "ImageTruncatedError",
    "decode_image",
    "encode_pgm",
    "encode_ppm",
    "median3x3",
    "bilinear_resize",
    "preprocess",
    "retina_confidence",
    "retina_layers",
    "RETINA_SIDE",
]

RETINA_SIDE = 64


class ImageError(StrokeScreenError):
    pass


class ImageMagicError(ImageError):
    """Not a binary PGM/PPM."""


class ImageDepthError(ImageError):
    """maxval other than 255."""


class ImageTruncatedError(ImageError):
    """Pixel payload shorter than width*height(*3)."""


@dataclass(frozen=True)
class Image:
    width: int
    height: int
    pixels: np.ndarray  # grayscale in [0,1], row-major, length width*height

    def __post_init__(self):
        arr = np.asarray(self.pixels, dtype=np.float64).reshape(-1)
        if self.width <= 0 or self.height <= 0:
            raise ImageError("dimensions must be positive")
        if arr.size != self.width * self.height:
            raise ImageError(
                f"{self.width}x{self.height} needs {self.width * self.height} pixels, got {arr.size}"
            )
        if not np.all(np.isfinite(arr)) or arr.min() < -1e-12 or arr.max() > 1 + 1e-12:
            raise ImageError("pixels must be finite and within [0, 1]")
        object.__setattr__(self, "pixels", arr)

    @property
    def grid(self) -> np.ndarray:
        return self.pixels.reshape(self.height, self.width)


def _read_header_tokens(data: bytes, count: int):
    """Netpbm header tokens: whitespace separated, # comments to end of line."""
    tokens = []
    pos = 0
    while len(tokens) < count:
        if pos >= len(data):
            raise ImageTruncatedError("header ended early")
        c = data[pos : pos + 1]
        if c == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
        elif c.isspace():
            pos += 1
        else:
            end = pos
            while end < len(data) and not data[end : end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    return tokens, pos + 1  # single whitespace byte after maxval precedes payload


def decode_image(data: bytes) -> Image:
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise ImageMagicError(f"expected binary PGM/PPM, got magic {magic!r}")
    tokens, payload_at = _read_header_tokens(data[2:], 3)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise ImageMagicError(f"non-numeric header fields {tokens!r}") from None
    if maxval != 255:
        raise ImageDepthError(f"only maxval 255 supported, got {maxval}")
    payload = data[2 + payload_at :]
    per_pixel = 3 if magic == b"P6" else 1
    need = width * height * per_pixel
    if len(payload) < need:
        raise ImageTruncatedError(f"need {need} payload bytes, got {len(payload)}")
    raw = np.frombuffer(payload[:need], dtype=np.uint8).astype(np.float64)
    if per_pixel == 3:
        rgb = raw.reshape(-1, 3)
        gray = rgb @ np.array([0.299, 0.587, 0.114])
    else:
        gray = raw
    return Image(width=width, height=height, pixels=gray / 255.0)


def encode_pgm(img: Image) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    body = np.clip(np.round(img.pixels * 255.0), 0, 255).astype(np.uint8).tobytes()
    return header + body


def encode_ppm(width: int, height: int, rgb: np.ndarray) -> bytes:
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    body = np.clip(np.round(np.asarray(rgb, dtype=np.float64) * 255.0), 0, 255)
    return header + body.astype(np.uint8).tobytes()


def median3x3(grid: np.ndarray) -> np.ndarray:
    padded = np.pad(grid, 1, mode="edge")
    stack = np.stack(
        [padded[r : r + grid.shape[0], c : c + grid.shape[1]] for r in range(3) for c in range(3)]
    )
    return np.median(stack, axis=0)


def bilinear_resize(grid: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    in_h, in_w = grid.shape
    ys = (np.arange(out_h) + 0.5) * (in_h / out_h) - 0.5
    xs = (np.arange(out_w) + 0.5) * (in_w / out_w) - 0.5
    y0 = np.clip(np.floor(ys), 0, in_h - 1).astype(int)
    x0 = np.clip(np.floor(xs), 0, in_w - 1).astype(int)
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    wy = np.clip(ys - y0, 0.0, 1.0)[:, None]
    wx = np.clip(xs - x0, 0.0, 1.0)[None, :]
    # delta form keeps constant regions bit-exact (c + w*(c-c) == c)
    g00, g01 = grid[np.ix_(y0, x0)], grid[np.ix_(y0, x1)]
    g10, g11 = grid[np.ix_(y1, x0)], grid[np.ix_(y1, x1)]
    top = g00 + wx * (g01 - g00)
    bot = g10 + wx * (g11 - g10)
    return top + wy * (bot - top)


def preprocess(img: Image) -> Tensor:
    """Median-denoise, resize to 64x64, standardize (stdev floored at 1e-6)."""
    if min(img.width, img.height) < 8:
        raise ImageError(f"image too small to preprocess: {img.width}x{img.height}")
    grid = median3x3(img.grid)
    grid = bilinear_resize(grid, RETINA_SIDE, RETINA_SIDE)
    if grid.max() == grid.min():  # zero contrast; avoid mean-rounding residue
        return Tensor.from_array(np.zeros_like(grid))
    std = grid.std()
    grid = (grid - grid.mean()) / max(std, 1e-6)
    return Tensor.from_array(grid)


def retina_layers() -> list[L.LayerSpec]:
    """Small LeNet-style stack over a 1x64x64 input."""
    flat = 16 * 13 * 13  # (64-5+1)=60 ->30 ->(30-5+1)=26 ->13 over 16 maps
    return [
        L.conv2d(1, 6, kernel=5),
        L.relu(),
        L.avgpool2d(2),
        L.conv2d(6, 16, kernel=5),
        L.relu(),
        L.avgpool2d(2),
        L.dense(flat, 64),
        L.relu(),
        L.dense(64, 2),
    ]


def retina_confidence(model: Model, img: Image) -> float:
    """Probability of retinopathy, in (0, 1)."""
    feats = preprocess(img)
    x = np.array(feats.array[None, None, :, :], dtype=np.float64, order="C")
    logits = forward_batch(model, x)[0]
    shifted = logits - logits.max()
    p = np.exp(shifted) / np.exp(shifted).sum()
    return float(np.clip(p[1], 1e-12, 1 - 1e-12))
