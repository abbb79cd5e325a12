#!/usr/bin/env python3
"""Compare the compiled kernel extension against the numpy reference backend.

Usage:
    python benchmarks/bench_kernels.py [--repeat N]

Times each hot kernel on production-shaped inputs (the slurred-voice conv
stack, the retina conv stack, the recurrent scan, and the IIR filter), plus
two composite workloads: one training step and one single-clip inference.
A ratio > 1 means the compiled backend is faster.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from strokescreen.nn import kernels, kernels_ref
from strokescreen.nn.model import build_model, forward_batch
from strokescreen.audio import vocal_layers

try:
    from strokescreen.nn import _kernels as compiled
except ImportError:
    compiled = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_cases():
    rng = np.random.default_rng(0)
    x1 = rng.normal(size=(10, 8, 4094))
    w1 = rng.normal(size=(16, 8, 9))
    b1 = rng.normal(size=16)
    dy1 = rng.normal(size=(10, 16, 4086))
    x2 = rng.normal(size=(10, 6, 30, 30))
    w2 = rng.normal(size=(16, 6, 5, 5))
    b2 = rng.normal(size=16)
    dy2 = rng.normal(size=(10, 16, 26, 26))
    xr = rng.normal(size=(10, 64, 61))
    wx = rng.normal(size=(64, 32)) * 0.2
    wh = rng.normal(size=(32, 32)) * 0.2
    br = rng.normal(size=32) * 0.1
    hs = kernels_ref.elman_forward(xr, wx, wh, br)
    dh = rng.normal(size=(10, 32))
    audio = rng.uniform(-1, 1, 16384)
    fb = np.array([0.25, 0.5, 0.25])
    fa = np.array([1.0, -0.2, 0.05])
    return [
        ("conv1d fwd (vocal stage 2)", lambda m: m.conv1d_forward(x1, w1, b1, 1)),
        ("conv1d bwd", lambda m: m.conv1d_backward(x1, w1, dy1, 1, True)),
        ("conv2d fwd (retina stage 2)", lambda m: m.conv2d_forward(x2, w2, b2, 1)),
        ("conv2d bwd", lambda m: m.conv2d_backward(x2, w2, dy2, 1, True)),
        ("avgpool1d fwd", lambda m: m.avgpool1d_forward(x1, 4, 4)),
        ("elman fwd (61 steps)", lambda m: m.elman_forward(xr, wx, wh, br)),
        ("elman bwd", lambda m: m.elman_backward(xr, wx, wh, hs, dh, True)),
        ("iir filter (16384 samples)", lambda m: m.iir_filter(fb, fa, audio)),
    ]


def composite_cases():
    from strokescreen.nn.model import backward_batch
    from strokescreen.nn.train import softmax_cross_entropy

    model = build_model(vocal_layers(), seed=0)
    rng = np.random.default_rng(1)
    batch = rng.uniform(-1, 1, (10, 16384))
    one = rng.uniform(-1, 1, (1, 16384))
    ys = np.array([0, 1] * 5)

    def train_step():
        out, caches = forward_batch(model, batch, keep_caches=True)
        _, dl = softmax_cross_entropy(out, ys)
        backward_batch(model, batch, dl, caches)

    def infer_one():
        forward_batch(model, one)

    return [
        ("vocal train step (batch 10)", train_step),
        ("vocal inference (1 clip)", infer_one),
    ]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if compiled is None:
        print("compiled backend not built; run `python setup.py build_ext --inplace`")
        return 1

    print(f"{'kernel':34s} {'compiled':>10s} {'reference':>10s} {'ratio':>7s}")
    print("-" * 66)
    for name, fn in kernel_cases():
        tc = timeit(lambda: fn(compiled), args.repeat)
        tr = timeit(lambda: fn(kernels_ref), args.repeat)
        print(f"{name:34s} {tc * 1e3:9.2f}ms {tr * 1e3:9.2f}ms {tr / tc:6.2f}x")

    print()
    for name, fn in composite_cases():
        with kernels.use_backend("compiled"):
            tc = timeit(fn, args.repeat)
        with kernels.use_backend("reference"):
            tr = timeit(fn, args.repeat)
        print(f"{name:34s} {tc * 1e3:9.2f}ms {tr * 1e3:9.2f}ms {tr / tc:6.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
