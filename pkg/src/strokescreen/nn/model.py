"""Model container: an ordered layer stack plus its named parameters.

Parameters are keyed "layer{i}.{name}" so names are unique by construction.
A built model is immutable by convention: training returns a new Model and
forward passes never write to parameters, so concurrent inference is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from strokescreen.errors import ShapeError
from strokescreen.seeding import rng_for
from strokescreen.nn import layers as L
from strokescreen.nn.tensor import Tensor

__all__ = ["Model", "build_model", "forward", "forward_batch", "backward"]


@dataclass
class Model:
    layers: tuple[L.LayerSpec, ...]
    parameters: dict[str, np.ndarray]
    rng_seed: int

    def layer_params(self, i: int) -> dict[str, np.ndarray]:
        prefix = f"layer{i}."
        return {
            name[len(prefix) :]: arr
            for name, arr in self.parameters.items()
            if name.startswith(prefix)
        }

    def param_count(self) -> int:
        return sum(a.size for a in self.parameters.values())

    def copy(self) -> "Model":
        return Model(
            layers=self.layers,
            parameters={k: v.copy() for k, v in self.parameters.items()},
            rng_seed=self.rng_seed,
        )


def build_model(specs: list[L.LayerSpec], seed: int) -> Model:
    rng = rng_for(seed)
    params: dict[str, np.ndarray] = {}
    for i, spec in enumerate(specs):
        for name, arr in L.init_params(spec, rng).items():
            params[f"layer{i}.{name}"] = arr
    return Model(layers=tuple(specs), parameters=params, rng_seed=int(seed))


def forward_batch(model: Model, x: np.ndarray, keep_caches: bool = False):
    """Run a batch through the stack; optionally keep per-layer caches."""
    caches = []
    for i, spec in enumerate(model.layers):
        try:
            x, cache = L.forward_layer(spec, model.layer_params(i), x)
        except ShapeError as exc:
            raise ShapeError(f"layer {i} ({spec.kind}): {exc}") from None
        except ValueError as exc:
            raise ShapeError(f"layer {i} ({spec.kind}): {exc}") from None
        if keep_caches:
            caches.append(cache)
    return (x, caches) if keep_caches else x


def _check_input(model: Model, t: Tensor) -> np.ndarray:
    # static shape walk first, so mismatches name the layer before any math;
    # copy because Tensor views are read-only and the kernels take writable buffers
    L.pipeline_shapes(list(model.layers), t.shape)
    return np.array(t.array[None, ...], dtype=np.float64, order="C")


def forward(model: Model, input: Tensor) -> Tensor:
    """Single-example forward pass; deterministic for a fixed model."""
    x = _check_input(model, input)
    y = forward_batch(model, x)
    return Tensor.from_array(y[0])


def backward_batch(
    model: Model, x: np.ndarray, dy: np.ndarray, caches
) -> dict[str, np.ndarray]:
    grads: dict[str, np.ndarray] = {}
    for i in range(len(model.layers) - 1, -1, -1):
        spec = model.layers[i]
        dy, layer_grads = L.backward_layer(
            spec, model.layer_params(i), caches[i], dy, need_dx=i > 0
        )
        for name, g in layer_grads.items():
            grads[f"layer{i}.{name}"] = g
    return grads


def backward(model: Model, input: Tensor, loss_grad: Tensor) -> dict[str, Tensor]:
    """Gradient of sum(output * loss_grad) w.r.t. every parameter."""
    x = _check_input(model, input)
    shapes = L.pipeline_shapes(list(model.layers), input.shape)
    if tuple(loss_grad.shape) != tuple(shapes[-1]):
        raise ShapeError(
            f"loss_grad shape {loss_grad.shape} != output shape {shapes[-1]}"
        )
    y, caches = forward_batch(model, x, keep_caches=True)
    grads = backward_batch(model, x, loss_grad.array[None, ...], caches)
    return {name: Tensor.from_array(g) for name, g in grads.items()}
