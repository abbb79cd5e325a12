"""Corpus directory layout and manifest.

    <out>/
      manifest.json          spec + ordered item list with labels
      <class_name>/0000.ext  one file per item (wav/pgm/pts/csv/json)

The writer is deterministic: a given CorpusSpec always produces identical
bytes, including the manifest.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from strokescreen.audio import decode_wav, encode_wav
from strokescreen.errors import DataError
from strokescreen.face import format_landmarks, parse_landmarks
from strokescreen.fusion import MODALITIES as FUSION_MODALITIES
from strokescreen.fusion import FusionInput
from strokescreen.synth.spec import CorpusSpec
from strokescreen.synth.faces import gen_face
from strokescreen.synth.fusion_rows import gen_fusion
from strokescreen.synth.retina import gen_retina
from strokescreen.synth.vitalgen import gen_vitals
from strokescreen.synth.vocal import gen_vocal
from strokescreen.vision import decode_image, encode_pgm
from strokescreen.vitals import format_vitals_csv, parse_vitals_csv

__all__ = ["CLASS_NAMES", "generate", "write_corpus", "read_manifest", "load_corpus"]

CLASS_NAMES = {
    "vocal": ("clear", "slurred"),
    "retina": ("normal", "retinopathy"),
    "face": ("normal", "paralysis"),
    "vascular": ("normal", "stroke_risk"),
    "fusion": ("negative", "positive"),
}

_EXT = {
    "vocal": "wav",
    "retina": "pgm",
    "face": "pts",
    "vascular": "csv",
    "fusion": "json",
}

_GENERATORS = {
    "vocal": gen_vocal,
    "retina": gen_retina,
    "face": gen_face,
    "vascular": gen_vitals,
    "fusion": gen_fusion,
}


def generate(spec: CorpusSpec):
    return _GENERATORS[spec.modality](spec)


def _encode(modality: str, item) -> bytes:
    if modality == "vocal":
        return encode_wav(item)
    if modality == "retina":
        return encode_pgm(item)
    if modality == "face":
        return format_landmarks(item).encode("utf-8")
    if modality == "vascular":
        return format_vitals_csv(item).encode("utf-8")
    payload = {m: getattr(item, m) for m in FUSION_MODALITIES}
    return (json.dumps(payload, sort_keys=True) + "\n").encode("utf-8")


def _decode(modality: str, raw: bytes):
    if modality == "vocal":
        return decode_wav(raw)
    if modality == "retina":
        return decode_image(raw)
    if modality == "face":
        return parse_landmarks(raw)
    if modality == "vascular":
        return parse_vitals_csv(raw)
    payload = json.loads(raw.decode("utf-8"))
    return FusionInput(**{m: payload[m] for m in FUSION_MODALITIES})


def write_corpus(spec: CorpusSpec, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = CLASS_NAMES[spec.modality]
    ext = _EXT[spec.modality]
    entries = []
    for i, (item, label) in enumerate(generate(spec)):
        rel = f"{names[label]}/{i:04d}.{ext}"
        path = out / rel
        path.parent.mkdir(exist_ok=True)
        path.write_bytes(_encode(spec.modality, item))
        entries.append({"file": rel, "label": label, "class": names[label]})
    manifest = {
        "modality": spec.modality,
        "n_per_class": spec.n_per_class,
        "difficulty": spec.difficulty,
        "seed": spec.seed,
        "items": entries,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return out


def read_manifest(corpus_dir: str | Path) -> dict:
    path = Path(corpus_dir) / "manifest.json"
    if not path.exists():
        raise DataError(f"no manifest.json under {corpus_dir}")
    return json.loads(path.read_text())


def load_corpus(corpus_dir: str | Path):
    """(modality, [(decoded item, label), ...]) in manifest order."""
    corpus_dir = Path(corpus_dir)
    manifest = read_manifest(corpus_dir)
    modality = manifest["modality"]
    items = []
    for entry in manifest["items"]:
        raw = (corpus_dir / entry["file"]).read_bytes()
        items.append((_decode(modality, raw), int(entry["label"])))
    return modality, items
