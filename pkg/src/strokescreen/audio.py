"""WAV handling, low-pass filtering, framing, and the slurred-voice detector.

Only RIFF/WAVE PCM16 mono is accepted; samples map to int16/32768 so the
encode/decode round trip is bit-exact. The low-pass filter is an IIR designed
from the bilinear transform: order 1 is a single-pole section, order 2 a
Butterworth biquad (Q = 1/sqrt(2)). Both have unit DC gain by construction
and a monotone nonincreasing magnitude response.

The detector consumes raw filtered waveforms (no spectral front end): 16384
samples at 16 kHz through four conv/pool stages, a recurrent layer, and a
two-way head.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from strokescreen.errors import StrokeScreenError
from strokescreen.nn import layers as L
from strokescreen.nn.model import Model, forward_batch
from strokescreen.nn.tensor import Tensor
from strokescreen.nn import kernels

__all__ = [
    "AudioClip",
    "FilterSpec",
    "WavError",
    "WavMagicError",
    "WavEncodingError",
    "WavTruncatedError",
    "FilterError",
    "decode_wav",
    "encode_wav",
    "low_pass",
    "filter_coefficients",
    "transfer_magnitude",
    "resample",
    "frame_features",
    "vocal_confidence",
    "vocal_layers",
    "VOCAL_INPUT_LEN",
    "VOCAL_SAMPLE_RATE",
    "DEFAULT_FILTER",
]

VOCAL_SAMPLE_RATE = 16_000
VOCAL_INPUT_LEN = 16_384


class WavError(StrokeScreenError):
    pass


class WavMagicError(WavError):
    """Not a RIFF/WAVE container."""


class WavEncodingError(WavError):
    """Unsupported encoding, channel count, or bit depth."""


class WavTruncatedError(WavError):
    """Data chunk shorter than its declared size."""


class FilterError(StrokeScreenError):
    pass


@dataclass(frozen=True)
class AudioClip:
    sample_rate: int
    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise WavError("clip must hold at least one sample")
        if self.sample_rate <= 0:
            raise WavError("sample rate must be positive")
        if not np.all(np.isfinite(arr)) or np.abs(arr).max() > 1.0 + 1e-12:
            raise WavError("samples must be finite and within [-1, 1]")
        object.__setattr__(self, "samples", arr)

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class FilterSpec:
    cutoff_hz: float
    order: int = 2

    def __post_init__(self):
        if self.cutoff_hz <= 0:
            raise FilterError("cutoff must be positive")
        if self.order not in (1, 2):
            raise FilterError("order must be 1 or 2")


DEFAULT_FILTER = FilterSpec(cutoff_hz=3400.0, order=2)


def decode_wav(data: bytes) -> AudioClip:
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise WavMagicError("not a RIFF/WAVE file")
    pos = 12
    fmt = None
    payload = None
    while pos + 8 <= len(data):
        cid = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body_start = pos + 8
        if cid == b"fmt ":
            if size < 16 or body_start + 16 > len(data):
                raise WavTruncatedError("fmt chunk truncated")
            fmt = struct.unpack_from("<HHIIHH", data, body_start)
        elif cid == b"data":
            if body_start + size > len(data):
                raise WavTruncatedError(
                    f"data chunk declares {size} bytes, only "
                    f"{len(data) - body_start} present"
                )
            payload = data[body_start : body_start + size]
        pos = body_start + size + (size & 1)
    if fmt is None or payload is None:
        raise WavMagicError("missing fmt or data chunk")
    audio_format, channels, sample_rate, _, _, bits = fmt
    if audio_format != 1:
        raise WavEncodingError(f"only PCM supported, got format {audio_format}")
    if channels != 1:
        raise WavEncodingError(f"only mono supported, got {channels} channels")
    if bits != 16:
        raise WavEncodingError(f"only 16-bit supported, got {bits}")
    if len(payload) % 2:
        raise WavTruncatedError("odd data chunk length for 16-bit samples")
    ints = np.frombuffer(payload, dtype="<i2")
    return AudioClip(sample_rate=sample_rate, samples=ints.astype(np.float64) / 32768.0)


def encode_wav(clip: AudioClip) -> bytes:
    ints = np.clip(np.round(clip.samples * 32768.0), -32768, 32767).astype("<i2")
    payload = ints.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        1,
        1,
        clip.sample_rate,
        clip.sample_rate * 2,
        2,
        16,
        b"data",
        len(payload),
    )
    return header + payload


def filter_coefficients(spec: FilterSpec, sample_rate: int):
    """(b, a) difference-equation coefficients, a[0] normalized to 1."""
    if spec.cutoff_hz >= sample_rate / 2:
        raise FilterError(
            f"cutoff {spec.cutoff_hz} Hz must stay below Nyquist {sample_rate / 2} Hz"
        )
    if spec.order == 1:
        w = math.tan(math.pi * spec.cutoff_hz / sample_rate)
        n = 1.0 / (1.0 + w)
        return np.array([w * n, w * n]), np.array([1.0, (w - 1.0) * n])
    w0 = 2.0 * math.pi * spec.cutoff_hz / sample_rate
    alpha = math.sin(w0) / (2.0 * (1.0 / math.sqrt(2.0)))
    cosw = math.cos(w0)
    a0 = 1.0 + alpha
    b = np.array([(1 - cosw) / 2, 1 - cosw, (1 - cosw) / 2]) / a0
    a = np.array([1.0, -2 * cosw / a0, (1 - alpha) / a0])
    return b, a


def transfer_magnitude(spec: FilterSpec, freq_hz: float, sample_rate: int) -> float:
    """|H(e^{j 2 pi f / fs})| of the designed filter."""
    b, a = filter_coefficients(spec, sample_rate)
    z = np.exp(-1j * 2.0 * math.pi * freq_hz / sample_rate)
    num = sum(bi * z**i for i, bi in enumerate(b))
    den = sum(ai * z**i for i, ai in enumerate(a))
    return float(abs(num / den))


def low_pass(clip: AudioClip, spec: FilterSpec = DEFAULT_FILTER) -> AudioClip:
    b, a = filter_coefficients(spec, clip.sample_rate)
    y = kernels.iir_filter(
        np.ascontiguousarray(b), np.ascontiguousarray(a), np.ascontiguousarray(clip.samples)
    )
    # unit-DC-gain IIR can overshoot transients slightly; clamp to the clip range
    return AudioClip(sample_rate=clip.sample_rate, samples=np.clip(y, -1.0, 1.0))


def resample(clip: AudioClip, rate: int) -> AudioClip:
    """Linear-interpolation resample; identity when the rate already matches."""
    if rate == clip.sample_rate:
        return clip
    n_out = max(1, int(round(clip.samples.size * rate / clip.sample_rate)))
    src = np.arange(clip.samples.size) / clip.sample_rate
    dst = np.arange(n_out) / rate
    return AudioClip(sample_rate=rate, samples=np.interp(dst, src, clip.samples))


def frame_features(clip: AudioClip, target_len: int = VOCAL_INPUT_LEN) -> Tensor:
    """Center-crop or zero-pad to target_len, then peak-normalize (silence stays zero)."""
    if target_len <= 0:
        raise WavError("target_len must be positive")
    x = clip.samples
    if x.size > target_len:
        start = (x.size - target_len) // 2
        x = x[start : start + target_len]
    elif x.size < target_len:
        x = np.concatenate([x, np.zeros(target_len - x.size)])
    peak = np.abs(x).max()
    if peak > 0:
        x = x / peak
    return Tensor.from_array(x)


def vocal_layers() -> list[L.LayerSpec]:
    """Four conv/pool stages into a recurrent layer and a two-way head."""
    specs: list[L.LayerSpec] = []
    channels = [1, 8, 16, 32, 64]
    for cin, cout in zip(channels[:-1], channels[1:]):
        specs += [L.conv1d(cin, cout, kernel=9), L.relu(), L.avgpool1d(4)]
    specs += [L.recurrent(64, 32), L.dense(32, 2)]
    return specs


def vocal_confidence(model: Model, clip: AudioClip, spec: FilterSpec = DEFAULT_FILTER) -> float:
    """Probability the clip is slurred, in (0, 1)."""
    clip = resample(clip, VOCAL_SAMPLE_RATE)
    feats = frame_features(low_pass(clip, spec))
    x = np.array(feats.array[None, :], dtype=np.float64, order="C")
    logits = forward_batch(model, x)[0]
    shifted = logits - logits.max()
    p = np.exp(shifted) / np.exp(shifted).sum()
    return float(np.clip(p[1], 1e-12, 1 - 1e-12))
