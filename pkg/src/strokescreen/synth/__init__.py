"""Seeded synthetic corpora with construction-time labels.

Every generator is a pure function of its CorpusSpec: the same spec always
yields the same items (and, through the corpus writer, identical bytes on
disk). Difficulty in [0, 1] controls class overlap; at difficulty 0 each
modality is separable by the simple oracle statistic its tests use.
"""

from strokescreen.synth.spec import CorpusSpec
from strokescreen.synth.vocal import envelope_sharpness, gen_vocal
from strokescreen.synth.retina import bright_blob_pixels, gen_retina
from strokescreen.synth.faces import gen_face
from strokescreen.synth.vitalgen import gen_vitals
from strokescreen.synth.fusion_rows import gen_fusion
from strokescreen.synth.corpus import (
    CLASS_NAMES,
    load_corpus,
    read_manifest,
    write_corpus,
)

__all__ = [
    "CorpusSpec",
    "gen_vocal",
    "gen_retina",
    "gen_face",
    "gen_vitals",
    "gen_fusion",
    "envelope_sharpness",
    "bright_blob_pixels",
    "write_corpus",
    "load_corpus",
    "read_manifest",
    "CLASS_NAMES",
]
