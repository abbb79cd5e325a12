"""Synthetic voice clips: a harmonic tone stack under amplitude gating.

"clear" clips gate their envelope with crisp ~40 ms transitions; "slurred"
clips smear the same transitions over 150-300 ms and add slow pitch drift,
a stand-in for dysarthric articulation (not a clinical claim). Difficulty
widens the clear transitions and narrows the slurred ones until the
envelope-sharpness statistic overlaps.
"""

from __future__ import annotations

import numpy as np

from strokescreen.audio import AudioClip, VOCAL_INPUT_LEN, VOCAL_SAMPLE_RATE
from strokescreen.synth.spec import CorpusSpec

__all__ = ["gen_vocal", "envelope_sharpness"]


def _smooth_gate(n: int, fs: int, rng: np.random.Generator, ramp_ms: float) -> np.ndarray:
    """Alternating low/high amplitude segments with linear ramps between them.

    Segments are short (60-120 ms) so every part of a clip, including the
    tail the recurrent readout weights most, carries gating transitions.
    """
    seg_len = int(fs * rng.uniform(0.06, 0.12))
    levels = []
    level_hi = rng.uniform(0.85, 1.0)
    level_lo = rng.uniform(0.05, 0.15)
    hi = rng.random() < 0.5
    while len(levels) * seg_len < n + seg_len:
        levels.append(level_hi if hi else level_lo)
        hi = not hi
    env = np.repeat(levels, seg_len)[:n]
    ramp = max(3, int(fs * ramp_ms / 1000.0))
    kernel = np.ones(ramp) / ramp
    return np.convolve(env, kernel, mode="same")


def _clip(samples: np.ndarray, fs: int) -> AudioClip:
    peak = np.abs(samples).max()
    if peak > 0:
        samples = samples * (0.95 / peak)
    return AudioClip(sample_rate=fs, samples=samples)


def gen_vocal(spec: CorpusSpec) -> list[tuple[AudioClip, int]]:
    """Labeled clips; label 1 = slurred."""
    rng = spec.rng()
    fs = VOCAL_SAMPLE_RATE
    n = VOCAL_INPUT_LEN
    t = np.arange(n) / fs
    d = spec.difficulty
    items: list[tuple[AudioClip, int]] = []
    for label in (0, 1):
        for _ in range(spec.n_per_class):
            f0 = rng.uniform(120.0, 240.0)
            if label == 0:
                ramp_ms = rng.uniform(30.0, 50.0) * (1.0 + 2.0 * d)
                phase = 2.0 * np.pi * f0 * t
            else:
                ramp_ms = rng.uniform(150.0, 300.0) * (1.0 - 0.4 * d)
                fm = rng.uniform(2.0, 5.0)
                depth = 0.04
                phase = 2.0 * np.pi * f0 * (
                    t + depth / (2.0 * np.pi * fm) * np.sin(2.0 * np.pi * fm * t)
                )
            tone = (
                np.sin(phase)
                + 0.5 * np.sin(2.0 * phase + rng.uniform(0, 2 * np.pi))
                + 0.25 * np.sin(3.0 * phase + rng.uniform(0, 2 * np.pi))
            )
            env = _smooth_gate(n, fs, rng, ramp_ms)
            noise = rng.normal(0.0, 0.01 + 0.02 * d, size=n)
            items.append((_clip(tone * env + noise, fs), label))
    return items


def envelope_sharpness(clip: AudioClip, window_ms: float = 30.0) -> float:
    """Max per-hop change of the moving-RMS envelope; the class oracle statistic.

    The window must span a few pitch periods so tone phase cancels out of
    the envelope estimate; 30 ms covers >= 3 periods at the 120 Hz floor.
    """
    w = max(1, int(clip.sample_rate * window_ms / 1000.0))
    x2 = clip.samples**2
    csum = np.concatenate([[0.0], np.cumsum(x2)])
    rms = np.sqrt((csum[w:] - csum[:-w]) / w)
    hop = max(1, w // 2)
    env = rms[::hop]
    return float(np.abs(np.diff(env)).max()) if env.size > 1 else 0.0
