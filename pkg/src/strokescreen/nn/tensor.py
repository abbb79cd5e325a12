"""Dense n-dimensional float64 tensor, the carrier for all model math.

A Tensor is a validated wrapper around a C-contiguous float64 numpy array:
construction checks that the flat data length matches the shape product and
that every value is finite, so any forward/backward output wrapped in a
Tensor has those invariants by construction.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from strokescreen.errors import ShapeError

__all__ = ["Tensor"]


class Tensor:
    __slots__ = ("_arr",)

    def __init__(self, shape: Sequence[int], data: Sequence[float]):
        shape = tuple(int(d) for d in shape)
        if any(d <= 0 for d in shape):
            raise ShapeError(f"dimensions must be positive, got {shape}")
        arr = np.asarray(data, dtype=np.float64).reshape(-1)
        if arr.size != math.prod(shape):
            raise ShapeError(
                f"shape {shape} needs {math.prod(shape)} values, got {arr.size}"
            )
        arr = np.ascontiguousarray(arr.reshape(shape))
        if not np.all(np.isfinite(arr)):
            raise ShapeError("tensor contains non-finite values")
        self._arr = arr

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Tensor":
        return cls(np.shape(arr), np.asarray(arr, dtype=np.float64).ravel())

    @property
    def shape(self) -> tuple[int, ...]:
        return self._arr.shape

    @property
    def data(self) -> np.ndarray:
        """Flat row-major view of the values (read-only)."""
        flat = self._arr.reshape(-1)
        flat.flags.writeable = False
        return flat

    @property
    def array(self) -> np.ndarray:
        """Shaped read-only view."""
        view = self._arr.view()
        view.flags.writeable = False
        return view

    @property
    def size(self) -> int:
        return self._arr.size

    def tolist(self) -> list:
        return self._arr.tolist()

    def __repr__(self) -> str:
        return f"Tensor(shape={list(self.shape)}, data={self.data.tolist()!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.shape == other.shape and bool(
            np.array_equal(self._arr, other._arr)
        )

    def __hash__(self):  # mutable payload, identity hash is wrong either way
        raise TypeError("Tensor is not hashable")
