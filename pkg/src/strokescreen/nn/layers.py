"""Layer specifications, static shape algebra, and per-layer forward/backward.

Every layer works on a batched float64 array whose leading axis is the batch.
Logical (unbatched) shapes follow channel-first conventions:

    dense      (features,) after implicit flatten of any input
    conv1d     (channels, length)        -> (out_channels, out_length)
    conv2d     (channels, height, width) -> (out_channels, out_h, out_w)
    avgpool*   shape-preserving in channels, pooled extents
    recurrent  (features, steps)         -> (hidden,)  [final state]
    relu/sigmoid/softmax  shape-preserving (softmax over the last axis)

Conv and pool extents obey out = (in - kernel) // stride + 1. A rank-1
input to conv1d (or rank-2 to conv2d) is promoted to a single channel when
in_channels == 1, so raw signals and grayscale images feed in directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from strokescreen.errors import ShapeError
from strokescreen.nn import kernels

__all__ = [
    "LayerSpec",
    "KINDS",
    "dense",
    "conv1d",
    "conv2d",
    "avgpool1d",
    "avgpool2d",
    "recurrent",
    "relu",
    "sigmoid",
    "softmax",
    "out_shape",
    "pipeline_shapes",
    "param_shapes",
    "init_params",
    "forward_layer",
    "backward_layer",
]

KINDS = (
    "dense",
    "conv1d",
    "conv2d",
    "avgpool1d",
    "avgpool2d",
    "recurrent",
    "relu",
    "sigmoid",
    "softmax",
)


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    kernel: int = 0
    stride: int = 1
    in_channels: int = 0
    out_channels: int = 0
    in_features: int = 0
    out_features: int = 0
    hidden: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ShapeError(f"unknown layer kind {self.kind!r}")
        if self.kind in ("conv1d", "conv2d", "avgpool1d", "avgpool2d"):
            if self.kernel < 1 or self.stride < 1:
                raise ShapeError(
                    f"{self.kind}: kernel and stride must be >= 1, "
                    f"got kernel={self.kernel} stride={self.stride}"
                )
        if self.kind in ("conv1d", "conv2d") and (
            self.in_channels < 1 or self.out_channels < 1
        ):
            raise ShapeError(f"{self.kind}: channel counts must be >= 1")
        if self.kind == "dense" and (self.in_features < 1 or self.out_features < 1):
            raise ShapeError("dense: feature counts must be >= 1")
        if self.kind == "recurrent" and (self.in_features < 1 or self.hidden < 1):
            raise ShapeError("recurrent: in_features and hidden must be >= 1")


def dense(in_features: int, out_features: int) -> LayerSpec:
    return LayerSpec("dense", in_features=in_features, out_features=out_features)


def conv1d(in_channels: int, out_channels: int, kernel: int, stride: int = 1) -> LayerSpec:
    return LayerSpec(
        "conv1d",
        kernel=kernel,
        stride=stride,
        in_channels=in_channels,
        out_channels=out_channels,
    )


def conv2d(in_channels: int, out_channels: int, kernel: int, stride: int = 1) -> LayerSpec:
    return LayerSpec(
        "conv2d",
        kernel=kernel,
        stride=stride,
        in_channels=in_channels,
        out_channels=out_channels,
    )


def avgpool1d(kernel: int, stride: int | None = None) -> LayerSpec:
    return LayerSpec("avgpool1d", kernel=kernel, stride=kernel if stride is None else stride)


def avgpool2d(kernel: int, stride: int | None = None) -> LayerSpec:
    return LayerSpec("avgpool2d", kernel=kernel, stride=kernel if stride is None else stride)


def recurrent(in_features: int, hidden: int) -> LayerSpec:
    return LayerSpec("recurrent", in_features=in_features, hidden=hidden)


def relu() -> LayerSpec:
    return LayerSpec("relu")


def sigmoid() -> LayerSpec:
    return LayerSpec("sigmoid")


def softmax() -> LayerSpec:
    return LayerSpec("softmax")


def _pool_extent(extent: int, kernel: int, stride: int, what: str) -> int:
    if kernel > extent:
        raise ShapeError(f"{what}: kernel {kernel} exceeds input extent {extent}")
    return (extent - kernel) // stride + 1


def _promote_shape(spec: LayerSpec, in_shape: tuple[int, ...]) -> tuple[int, ...]:
    # single-channel promotion: (L,) -> (1, L) and (H, W) -> (1, H, W)
    if spec.kind == "conv1d" and len(in_shape) == 1 and spec.in_channels == 1:
        return (1,) + in_shape
    if spec.kind == "conv2d" and len(in_shape) == 2 and spec.in_channels == 1:
        return (1,) + in_shape
    return in_shape


def out_shape(spec: LayerSpec, in_shape: tuple[int, ...]) -> tuple[int, ...]:
    """Output shape for one layer, computed without running data."""
    in_shape = tuple(in_shape)
    kind = spec.kind
    if kind == "dense":
        if math.prod(in_shape) != spec.in_features:
            raise ShapeError(
                f"dense: expected {spec.in_features} input features, "
                f"got shape {in_shape}"
            )
        return (spec.out_features,)
    if kind in ("relu", "sigmoid", "softmax"):
        return in_shape
    if kind == "conv1d":
        in_shape = _promote_shape(spec, in_shape)
        if len(in_shape) != 2 or in_shape[0] != spec.in_channels:
            raise ShapeError(
                f"conv1d: expected ({spec.in_channels}, length), got {in_shape}"
            )
        return (spec.out_channels, _pool_extent(in_shape[1], spec.kernel, spec.stride, "conv1d"))
    if kind == "conv2d":
        in_shape = _promote_shape(spec, in_shape)
        if len(in_shape) != 3 or in_shape[0] != spec.in_channels:
            raise ShapeError(
                f"conv2d: expected ({spec.in_channels}, h, w), got {in_shape}"
            )
        return (
            spec.out_channels,
            _pool_extent(in_shape[1], spec.kernel, spec.stride, "conv2d"),
            _pool_extent(in_shape[2], spec.kernel, spec.stride, "conv2d"),
        )
    if kind == "avgpool1d":
        if len(in_shape) != 2:
            raise ShapeError(f"avgpool1d: expected (channels, length), got {in_shape}")
        return (in_shape[0], _pool_extent(in_shape[1], spec.kernel, spec.stride, "avgpool1d"))
    if kind == "avgpool2d":
        if len(in_shape) != 3:
            raise ShapeError(f"avgpool2d: expected (channels, h, w), got {in_shape}")
        return (
            in_shape[0],
            _pool_extent(in_shape[1], spec.kernel, spec.stride, "avgpool2d"),
            _pool_extent(in_shape[2], spec.kernel, spec.stride, "avgpool2d"),
        )
    if kind == "recurrent":
        if len(in_shape) != 2 or in_shape[0] != spec.in_features:
            raise ShapeError(
                f"recurrent: expected ({spec.in_features}, steps), got {in_shape}"
            )
        if in_shape[1] < 1:
            raise ShapeError("recurrent: needs at least one step")
        return (spec.hidden,)
    raise ShapeError(f"unknown layer kind {kind!r}")


def pipeline_shapes(
    specs: list[LayerSpec], in_shape: tuple[int, ...]
) -> list[tuple[int, ...]]:
    """Shape after each layer; raises naming the offending layer index."""
    shapes = [tuple(in_shape)]
    for i, spec in enumerate(specs):
        try:
            shapes.append(out_shape(spec, shapes[-1]))
        except ShapeError as exc:
            raise ShapeError(f"layer {i} ({spec.kind}): {exc}") from None
    return shapes


def param_shapes(spec: LayerSpec) -> dict[str, tuple[int, ...]]:
    if spec.kind == "dense":
        return {"w": (spec.in_features, spec.out_features), "b": (spec.out_features,)}
    if spec.kind == "conv1d":
        return {
            "w": (spec.out_channels, spec.in_channels, spec.kernel),
            "b": (spec.out_channels,),
        }
    if spec.kind == "conv2d":
        return {
            "w": (spec.out_channels, spec.in_channels, spec.kernel, spec.kernel),
            "b": (spec.out_channels,),
        }
    if spec.kind == "recurrent":
        return {
            "wx": (spec.in_features, spec.hidden),
            "wh": (spec.hidden, spec.hidden),
            "b": (spec.hidden,),
        }
    return {}


def _fans(spec: LayerSpec, pname: str) -> tuple[int, int]:
    if spec.kind == "dense":
        return spec.in_features, spec.out_features
    if spec.kind == "conv1d":
        return spec.in_channels * spec.kernel, spec.out_channels * spec.kernel
    if spec.kind == "conv2d":
        k2 = spec.kernel * spec.kernel
        return spec.in_channels * k2, spec.out_channels * k2
    if spec.kind == "recurrent":
        if pname == "wx":
            return spec.in_features, spec.hidden
        return spec.hidden, spec.hidden
    raise ShapeError(f"{spec.kind} has no parameters")


def init_params(spec: LayerSpec, rng: np.random.Generator) -> dict[str, np.ndarray]:
    """Glorot-uniform weights, zero biases."""
    params: dict[str, np.ndarray] = {}
    for name, shape in param_shapes(spec).items():
        if name == "b":
            params[name] = np.zeros(shape)
        else:
            fan_in, fan_out = _fans(spec, name)
            s = math.sqrt(6.0 / (fan_in + fan_out))
            params[name] = rng.uniform(-s, s, size=shape)
    return params


def _promote_batch(spec: LayerSpec, x: np.ndarray) -> np.ndarray:
    if spec.kind == "conv1d" and x.ndim == 2 and spec.in_channels == 1:
        return x[:, None, :]
    if spec.kind == "conv2d" and x.ndim == 3 and spec.in_channels == 1:
        return x[:, None, :, :]
    return x


def forward_layer(spec: LayerSpec, params: dict[str, np.ndarray], x: np.ndarray):
    """One batched forward step; returns (output, cache-for-backward)."""
    kind = spec.kind
    if kind == "dense":
        flat = x.reshape(x.shape[0], -1)
        return flat @ params["w"] + params["b"], (flat, x.shape)
    if kind == "relu":
        mask = x > 0
        return x * mask, mask
    if kind == "sigmoid":
        y = 1.0 / (1.0 + np.exp(-x))
        return y, y
    if kind == "softmax":
        shifted = x - x.max(axis=-1, keepdims=True)
        e = np.exp(shifted)
        y = e / e.sum(axis=-1, keepdims=True)
        return y, y
    if kind == "conv1d":
        x = np.ascontiguousarray(_promote_batch(spec, x))
        return kernels.conv1d_forward(x, params["w"], params["b"], spec.stride), x
    if kind == "conv2d":
        x = np.ascontiguousarray(_promote_batch(spec, x))
        return kernels.conv2d_forward(x, params["w"], params["b"], spec.stride), x
    if kind == "avgpool1d":
        x = np.ascontiguousarray(x)
        return kernels.avgpool1d_forward(x, spec.kernel, spec.stride), x
    if kind == "avgpool2d":
        x = np.ascontiguousarray(x)
        return kernels.avgpool2d_forward(x, spec.kernel, spec.stride), x
    if kind == "recurrent":
        x = np.ascontiguousarray(x)
        hs = kernels.elman_forward(x, params["wx"], params["wh"], params["b"])
        return np.ascontiguousarray(hs[:, -1, :]), (x, hs)
    raise ShapeError(f"unknown layer kind {kind!r}")


def backward_layer(
    spec: LayerSpec,
    params: dict[str, np.ndarray],
    cache,
    dy: np.ndarray,
    need_dx: bool,
):
    """Gradients for one layer; returns (dx-or-None, {param: grad})."""
    kind = spec.kind
    if kind == "dense":
        flat, orig_shape = cache
        grads = {"w": flat.T @ dy, "b": dy.sum(axis=0)}
        dx = (dy @ params["w"].T).reshape(orig_shape) if need_dx else None
        return dx, grads
    if kind == "relu":
        return (dy * cache if need_dx else None), {}
    if kind == "sigmoid":
        y = cache
        return (dy * y * (1.0 - y) if need_dx else None), {}
    if kind == "softmax":
        y = cache
        if need_dx:
            inner = (dy * y).sum(axis=-1, keepdims=True)
            return y * (dy - inner), {}
        return None, {}
    if kind == "conv1d":
        x = cache
        dx, dw, db = kernels.conv1d_backward(
            x, params["w"], np.ascontiguousarray(dy), spec.stride, need_dx
        )
        return dx, {"w": dw, "b": db}
    if kind == "conv2d":
        x = cache
        dx, dw, db = kernels.conv2d_backward(
            x, params["w"], np.ascontiguousarray(dy), spec.stride, need_dx
        )
        return dx, {"w": dw, "b": db}
    if kind == "avgpool1d":
        return (
            kernels.avgpool1d_backward(cache, spec.kernel, spec.stride, np.ascontiguousarray(dy))
            if need_dx
            else None
        ), {}
    if kind == "avgpool2d":
        return (
            kernels.avgpool2d_backward(cache, spec.kernel, spec.stride, np.ascontiguousarray(dy))
            if need_dx
            else None
        ), {}
    if kind == "recurrent":
        x, hs = cache
        dx, dwx, dwh, db = kernels.elman_backward(
            x, params["wx"], params["wh"], hs, np.ascontiguousarray(dy), need_dx
        )
        return dx, {"wx": dwx, "wh": dwh, "b": db}
    raise ShapeError(f"unknown layer kind {kind!r}")
