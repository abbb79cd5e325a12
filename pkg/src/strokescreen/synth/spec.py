"""Corpus specification shared by all generators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from strokescreen.errors import DataError
from strokescreen.seeding import rng_for

MODALITIES = ("vocal", "retina", "face", "vascular", "fusion")


@dataclass(frozen=True)
class CorpusSpec:
    modality: str
    n_per_class: int
    difficulty: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.modality not in MODALITIES:
            raise DataError(f"modality must be one of {MODALITIES}, got {self.modality!r}")
        if self.n_per_class < 1:
            raise DataError("n_per_class must be >= 1")
        if not 0.0 <= self.difficulty <= 1.0:
            raise DataError("difficulty must be in [0, 1]")

    def rng(self) -> np.random.Generator:
        return rng_for(self.seed)
