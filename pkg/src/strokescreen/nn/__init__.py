"""Differentiable-layer kernel: layers, models, SGD training, grad checking."""

from strokescreen.nn.gradcheck import GradCheckReport, grad_check
from strokescreen.nn.io import load_model, save_model
from strokescreen.nn.layers import (
    LayerSpec,
    avgpool1d,
    avgpool2d,
    conv1d,
    conv2d,
    dense,
    pipeline_shapes,
    recurrent,
    relu,
    sigmoid,
    softmax,
)
from strokescreen.nn.model import Model, backward, build_model, forward
from strokescreen.nn.tensor import Tensor
from strokescreen.nn.train import TrainConfig, predict_batch, train

__all__ = [
    "Tensor",
    "LayerSpec",
    "Model",
    "TrainConfig",
    "GradCheckReport",
    "build_model",
    "forward",
    "backward",
    "train",
    "predict_batch",
    "grad_check",
    "save_model",
    "load_model",
    "pipeline_shapes",
    "dense",
    "conv1d",
    "conv2d",
    "avgpool1d",
    "avgpool2d",
    "recurrent",
    "relu",
    "sigmoid",
    "softmax",
]
