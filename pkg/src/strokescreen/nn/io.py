"""Model file format: bit-exact named-tensor container.

Layout (all integers little-endian):

    magic    4 bytes  "SSMD"
    version  u32      currently 1
    records  until EOF, each:
        u32   name length, then UTF-8 name
        u32   ndim, then ndim x u32 dims
        u64   value count (== product of dims)
        count x f64 values, little-endian

Reserved record names carry non-tensor state so the container stays uniform:
"__kind__" distinguishes payload types, "__layers__" packs one row of layer
hyperparameters per layer, and "__seed__" stores the 64-bit seed by bit
reinterpretation (int64 bits viewed as a float64), which round-trips exactly.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from strokescreen.errors import ModelFormatError
from strokescreen.nn.layers import KINDS, LayerSpec
from strokescreen.nn.model import Model

__all__ = [
    "write_records",
    "read_records",
    "save_model",
    "load_model",
    "dump_model_bytes",
    "load_model_bytes",
]

MAGIC = b"SSMD"
VERSION = 1

KIND_NN = 1.0
KIND_SVM = 2.0

_LAYER_ROW = ("kernel", "stride", "in_channels", "out_channels", "in_features", "out_features", "hidden")


def write_records(records: dict[str, np.ndarray]) -> bytes:
    out = bytearray()
    out += MAGIC
    out += struct.pack("<I", VERSION)
    for name, arr in records.items():
        # asarray, not ascontiguousarray: the latter promotes 0-d to 1-d
        arr = np.asarray(arr, dtype=np.float64, order="C")
        raw = name.encode("utf-8")
        out += struct.pack("<I", len(raw))
        out += raw
        out += struct.pack("<I", arr.ndim)
        for d in arr.shape:
            out += struct.pack("<I", d)
        out += struct.pack("<Q", arr.size)
        out += arr.astype("<f8").tobytes()
    return bytes(out)


def read_records(data: bytes) -> dict[str, np.ndarray]:
    if data[:4] != MAGIC:
        raise ModelFormatError(f"bad magic {data[:4]!r}")
    (version,) = struct.unpack_from("<I", data, 4)
    if version != VERSION:
        raise ModelFormatError(f"unsupported version {version}")
    pos = 8
    records: dict[str, np.ndarray] = {}
    n = len(data)
    while pos < n:
        try:
            (name_len,) = struct.unpack_from("<I", data, pos)
            pos += 4
            name = data[pos : pos + name_len].decode("utf-8")
            if len(data[pos : pos + name_len]) != name_len:
                raise ModelFormatError("truncated name")
            pos += name_len
            (ndim,) = struct.unpack_from("<I", data, pos)
            pos += 4
            dims = struct.unpack_from(f"<{ndim}I", data, pos)
            pos += 4 * ndim
            (count,) = struct.unpack_from("<Q", data, pos)
            pos += 8
            expect = int(np.prod(dims)) if ndim else 1
            if count != expect:
                raise ModelFormatError(
                    f"record {name!r}: count {count} != shape product {expect}"
                )
            nbytes = count * 8
            if pos + nbytes > n:
                raise ModelFormatError(f"record {name!r}: truncated data")
            arr = np.frombuffer(data, dtype="<f8", count=count, offset=pos).copy()
            pos += nbytes
            records[name] = arr.reshape(dims)
        except struct.error:
            raise ModelFormatError("truncated record header") from None
    return records


def _seed_to_f64(seed: int) -> np.ndarray:
    return np.array([seed], dtype=np.int64).view(np.float64)


def _seed_from_f64(arr: np.ndarray) -> int:
    return int(np.asarray(arr, dtype=np.float64).view(np.int64)[0])


_KIND_CODE = {kind: float(i + 1) for i, kind in enumerate(KINDS)}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}


def dump_model_bytes(model: Model) -> bytes:
    rows = np.zeros((len(model.layers), 1 + len(_LAYER_ROW)))
    for i, spec in enumerate(model.layers):
        rows[i, 0] = _KIND_CODE[spec.kind]
        for j, fname in enumerate(_LAYER_ROW):
            rows[i, 1 + j] = getattr(spec, fname)
    records: dict[str, np.ndarray] = {
        "__kind__": np.array([KIND_NN]),
        "__layers__": rows,
        "__seed__": _seed_to_f64(model.rng_seed),
    }
    records.update(model.parameters)
    return write_records(records)


def load_model_bytes(data: bytes) -> Model:
    records = read_records(data)
    if "__layers__" not in records or records.get("__kind__", [0])[0] != KIND_NN:
        raise ModelFormatError("not a layer-stack model file")
    rows = np.atleast_2d(records.pop("__layers__"))
    seed = _seed_from_f64(records.pop("__seed__"))
    records.pop("__kind__")
    specs = []
    for row in rows:
        kind = _CODE_KIND.get(row[0])
        if kind is None:
            raise ModelFormatError(f"unknown layer code {row[0]}")
        fields = {fname: int(row[1 + j]) for j, fname in enumerate(_LAYER_ROW)}
        specs.append(LayerSpec(kind, **fields))
    return Model(layers=tuple(specs), parameters=records, rng_seed=seed)


def save_model(model: Model, path: str | Path) -> None:
    Path(path).write_bytes(dump_model_bytes(model))


def load_model(path: str | Path) -> Model:
    return load_model_bytes(Path(path).read_bytes())
