"""Exception hierarchy shared across the package."""


class StrokeScreenError(Exception):
    """Base class for all package errors."""


class ShapeError(StrokeScreenError):
    """Tensor or layer shape mismatch; message names the offending layer."""


class TrainingDiverged(StrokeScreenError):
    """Loss became non-finite during training."""

    def __init__(self, epoch: int, loss: float):
        super().__init__(f"non-finite loss {loss!r} at epoch {epoch}")
        self.epoch = epoch
        self.loss = loss


class ModelFormatError(StrokeScreenError):
    """Bad magic, version, or structure in a model file."""


class DataError(StrokeScreenError):
    """Invalid input data (empty dataset, single-class labels, ...)."""
