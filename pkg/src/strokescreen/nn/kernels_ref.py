"""Reference kernel backend: vectorized numpy, no compiled code.

Array layouts (all float64, C-contiguous):
    conv1d:   x (N, Cin, L)      w (Cout, Cin, K)     y (N, Cout, Lo)
    conv2d:   x (N, Cin, H, W)   w (Cout, Cin, K, K)  y (N, Cout, Ho, Wo)
    avgpool:  same channel-first layouts, window k / stride s
    elman:    x (N, C, L) scanned along L; hs (N, L, H) hidden trajectory
    iir:      second-order-or-less difference equation, direct form I

Output extents follow out = (in - k) // s + 1; trailing remainders are
dropped, so their gradient is zero.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

NAME = "reference"


def _windows1d(x: np.ndarray, k: int, s: int) -> np.ndarray:
    # (N, C, Lo, K) strided view, no copy
    return sliding_window_view(x, k, axis=2)[:, :, ::s, :]


def _windows2d(x: np.ndarray, k: int, s: int) -> np.ndarray:
    # (N, C, Ho, Wo, K, K)
    return sliding_window_view(x, (k, k), axis=(2, 3))[:, :, ::s, ::s, :, :]


def conv1d_forward(x, w, b, stride):
    v = _windows1d(x, w.shape[2], stride)
    # (N, Lo, Cout) <- contract over (Cin, K)
    y = np.tensordot(v, w, axes=([1, 3], [1, 2]))
    return np.ascontiguousarray(y.transpose(0, 2, 1)) + b[None, :, None]


def conv1d_backward(x, w, dy, stride, need_dx):
    n, cin, length = x.shape
    k = w.shape[2]
    v = _windows1d(x, k, stride)
    db = dy.sum(axis=(0, 2))
    # dw[o,c,k] = sum_{n,t} dy[n,o,t] * x[n,c,t*s+k]
    dw = np.tensordot(dy, v, axes=([0, 2], [0, 2]))
    dx = None
    if need_dx:
        dx = np.zeros_like(x)
        lo = dy.shape[2]
        # dilate dy by the stride, pad by k-1, correlate with flipped kernel
        dil = np.zeros((n, dy.shape[1], (lo - 1) * stride + 1))
        dil[:, :, ::stride] = dy
        pad = np.zeros((n, dy.shape[1], dil.shape[2] + 2 * (k - 1)))
        pad[:, :, k - 1 : k - 1 + dil.shape[2]] = dil
        win = sliding_window_view(pad, k, axis=2)  # (N, Cout, dil+k-1, K)
        full = np.tensordot(win, w[:, :, ::-1], axes=([1, 3], [0, 2]))
        g = full.transpose(0, 2, 1)[:, :, :length]
        dx[:, :, : g.shape[2]] = g
    return dx, dw, db


def conv2d_forward(x, w, b, stride):
    v = _windows2d(x, w.shape[2], stride)
    y = np.tensordot(v, w, axes=([1, 4, 5], [1, 2, 3]))  # (N, Ho, Wo, Cout)
    return np.ascontiguousarray(y.transpose(0, 3, 1, 2)) + b[None, :, None, None]


def conv2d_backward(x, w, dy, stride, need_dx):
    n, cin, h, wid = x.shape
    k = w.shape[2]
    v = _windows2d(x, k, stride)
    db = dy.sum(axis=(0, 2, 3))
    dw = np.tensordot(dy, v, axes=([0, 2, 3], [0, 2, 3]))
    dx = None
    if need_dx:
        ho, wo = dy.shape[2], dy.shape[3]
        dh = (ho - 1) * stride + 1
        dwid = (wo - 1) * stride + 1
        pad = np.zeros((n, dy.shape[1], dh + 2 * (k - 1), dwid + 2 * (k - 1)))
        pad[:, :, k - 1 : k - 1 + dh : stride, k - 1 : k - 1 + dwid : stride] = dy
        win = sliding_window_view(pad, (k, k), axis=(2, 3))
        full = np.tensordot(
            win, w[:, :, ::-1, ::-1], axes=([1, 4, 5], [0, 2, 3])
        )  # (N, ph, pw, Cin)
        g = full.transpose(0, 3, 1, 2)[:, :, :h, :wid]
        dx = np.zeros_like(x)
        dx[:, :, : g.shape[2], : g.shape[3]] = g
    return dx, dw, db


def avgpool1d_forward(x, k, stride):
    v = _windows1d(x, k, stride)
    return v.mean(axis=3)


def avgpool1d_backward(x, k, stride, dy):
    dx = np.zeros_like(x)
    share = dy / k
    for j in range(k):
        dx[:, :, j : j + (dy.shape[2] - 1) * stride + 1 : stride] += share
    return dx


def avgpool2d_forward(x, k, stride):
    v = _windows2d(x, k, stride)
    return v.mean(axis=(4, 5))


def avgpool2d_backward(x, k, stride, dy):
    dx = np.zeros_like(x)
    share = dy / (k * k)
    ho, wo = dy.shape[2], dy.shape[3]
    for i in range(k):
        for j in range(k):
            dx[
                :,
                :,
                i : i + (ho - 1) * stride + 1 : stride,
                j : j + (wo - 1) * stride + 1 : stride,
            ] += share
    return dx


def elman_forward(x, wx, wh, b):
    n, _, length = x.shape
    hidden = wh.shape[0]
    hs = np.empty((n, length, hidden))
    h = np.zeros((n, hidden))
    for t in range(length):
        h = np.tanh(x[:, :, t] @ wx + h @ wh + b)
        hs[:, t, :] = h
    return hs


def elman_backward(x, wx, wh, hs, dh_last, need_dx):
    n, cin, length = x.shape
    dwx = np.zeros_like(wx)
    dwh = np.zeros_like(wh)
    db = np.zeros(wh.shape[0])
    dx = np.zeros_like(x) if need_dx else None
    dh = dh_last.copy()
    for t in range(length - 1, -1, -1):
        da = dh * (1.0 - hs[:, t, :] ** 2)
        dwx += x[:, :, t].T @ da
        if t > 0:
            dwh += hs[:, t - 1, :].T @ da
        db += da.sum(axis=0)
        if need_dx:
            dx[:, :, t] = da @ wx.T
        dh = da @ wh.T
    return dx, dwx, dwh, db


def iir_filter(b, a, x):
    """Difference equation y[n] = sum b[i] x[n-i] - sum a[j] y[n-j], a0 == 1."""
    y = np.zeros_like(x)
    nb, na = len(b), len(a)
    x1 = x2 = y1 = y2 = 0.0
    b0 = b[0]
    b1 = b[1] if nb > 1 else 0.0
    b2 = b[2] if nb > 2 else 0.0
    a1 = a[1] if na > 1 else 0.0
    a2 = a[2] if na > 2 else 0.0
    for i in range(x.shape[0]):
        xi = x[i]
        yi = b0 * xi + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2
        x2 = x1
        x1 = xi
        y2 = y1
        y1 = yi
        y[i] = yi
    return y
