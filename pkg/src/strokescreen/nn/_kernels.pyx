# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend: tight C loops over float64 memoryviews.

Mirrors kernels_ref exactly (same signatures, same layouts, same dropped
stride remainders). Kept branch-free in the inner loops; everything is
single-threaded and deterministic.
"""

import numpy as np

cimport numpy as cnp

from libc.math cimport tanh

cnp.import_array()

NAME = "compiled"


def conv1d_forward(double[:, :, ::1] x, double[:, :, ::1] w, double[::1] b,
                   Py_ssize_t stride):
    cdef Py_ssize_t n = x.shape[0], cin = x.shape[1], length = x.shape[2]
    cdef Py_ssize_t cout = w.shape[0], k = w.shape[2]
    cdef Py_ssize_t lo = (length - k) // stride + 1
    y_arr = np.empty((n, cout, lo), dtype=np.float64)
    cdef double[:, :, ::1] y = y_arr
    cdef Py_ssize_t i, o, t, c, j, base
    cdef double acc
    for i in range(n):
        for o in range(cout):
            for t in range(lo):
                base = t * stride
                acc = b[o]
                for c in range(cin):
                    for j in range(k):
                        acc += x[i, c, base + j] * w[o, c, j]
                y[i, o, t] = acc
    return y_arr


def conv1d_backward(double[:, :, ::1] x, double[:, :, ::1] w,
                    double[:, :, ::1] dy, Py_ssize_t stride, bint need_dx):
    cdef Py_ssize_t n = x.shape[0], cin = x.shape[1], length = x.shape[2]
    cdef Py_ssize_t cout = w.shape[0], k = w.shape[2]
    cdef Py_ssize_t lo = dy.shape[2]
    dw_arr = np.zeros((cout, cin, k), dtype=np.float64)
    db_arr = np.zeros(cout, dtype=np.float64)
    cdef double[:, :, ::1] dw = dw_arr
    cdef double[::1] db = db_arr
    cdef double[:, :, ::1] dx
    dx_arr = None
    cdef Py_ssize_t i, o, t, c, j, base
    cdef double g
    if need_dx:
        dx_arr = np.zeros((n, cin, length), dtype=np.float64)
        dx = dx_arr
        for i in range(n):
            for o in range(cout):
                for t in range(lo):
                    base = t * stride
                    g = dy[i, o, t]
                    db[o] += g
                    for c in range(cin):
                        for j in range(k):
                            dw[o, c, j] += g * x[i, c, base + j]
                            dx[i, c, base + j] += g * w[o, c, j]
    else:
        for i in range(n):
            for o in range(cout):
                for t in range(lo):
                    base = t * stride
                    g = dy[i, o, t]
                    db[o] += g
                    for c in range(cin):
                        for j in range(k):
                            dw[o, c, j] += g * x[i, c, base + j]
    return dx_arr, dw_arr, db_arr


def conv2d_forward(double[:, :, :, ::1] x, double[:, :, :, ::1] w,
                   double[::1] b, Py_ssize_t stride):
    cdef Py_ssize_t n = x.shape[0], cin = x.shape[1]
    cdef Py_ssize_t h = x.shape[2], wid = x.shape[3]
    cdef Py_ssize_t cout = w.shape[0], k = w.shape[2]
    cdef Py_ssize_t ho = (h - k) // stride + 1, wo = (wid - k) // stride + 1
    y_arr = np.empty((n, cout, ho, wo), dtype=np.float64)
    cdef double[:, :, :, ::1] y = y_arr
    cdef Py_ssize_t i, o, r, t, c, p, q, rb, tb
    cdef double acc
    for i in range(n):
        for o in range(cout):
            for r in range(ho):
                rb = r * stride
                for t in range(wo):
                    tb = t * stride
                    acc = b[o]
                    for c in range(cin):
                        for p in range(k):
                            for q in range(k):
                                acc += x[i, c, rb + p, tb + q] * w[o, c, p, q]
                    y[i, o, r, t] = acc
    return y_arr


def conv2d_backward(double[:, :, :, ::1] x, double[:, :, :, ::1] w,
                    double[:, :, :, ::1] dy, Py_ssize_t stride, bint need_dx):
    cdef Py_ssize_t n = x.shape[0], cin = x.shape[1]
    cdef Py_ssize_t h = x.shape[2], wid = x.shape[3]
    cdef Py_ssize_t cout = w.shape[0], k = w.shape[2]
    cdef Py_ssize_t ho = dy.shape[2], wo = dy.shape[3]
    dw_arr = np.zeros((cout, cin, k, k), dtype=np.float64)
    db_arr = np.zeros(cout, dtype=np.float64)
    cdef double[:, :, :, ::1] dw = dw_arr
    cdef double[::1] db = db_arr
    cdef double[:, :, :, ::1] dx
    dx_arr = None
    cdef Py_ssize_t i, o, r, t, c, p, q, rb, tb
    cdef double g
    if need_dx:
        dx_arr = np.zeros((n, cin, h, wid), dtype=np.float64)
        dx = dx_arr
    for i in range(n):
        for o in range(cout):
            for r in range(ho):
                rb = r * stride
                for t in range(wo):
                    tb = t * stride
                    g = dy[i, o, r, t]
                    db[o] += g
                    for c in range(cin):
                        for p in range(k):
                            for q in range(k):
                                dw[o, c, p, q] += g * x[i, c, rb + p, tb + q]
                                if need_dx:
                                    dx[i, c, rb + p, tb + q] += g * w[o, c, p, q]
    return dx_arr, dw_arr, db_arr


def avgpool1d_forward(double[:, :, ::1] x, Py_ssize_t k, Py_ssize_t stride):
    cdef Py_ssize_t n = x.shape[0], c = x.shape[1], length = x.shape[2]
    cdef Py_ssize_t lo = (length - k) // stride + 1
    y_arr = np.empty((n, c, lo), dtype=np.float64)
    cdef double[:, :, ::1] y = y_arr
    cdef Py_ssize_t i, ci, t, j
    cdef double acc, inv = 1.0 / k
    for i in range(n):
        for ci in range(c):
            for t in range(lo):
                acc = 0.0
                for j in range(k):
                    acc += x[i, ci, t * stride + j]
                y[i, ci, t] = acc * inv
    return y_arr


def avgpool1d_backward(double[:, :, ::1] x, Py_ssize_t k, Py_ssize_t stride,
                       double[:, :, ::1] dy):
    cdef Py_ssize_t n = x.shape[0], c = x.shape[1], length = x.shape[2]
    cdef Py_ssize_t lo = dy.shape[2]
    dx_arr = np.zeros((n, c, length), dtype=np.float64)
    cdef double[:, :, ::1] dx = dx_arr
    cdef Py_ssize_t i, ci, t, j
    cdef double g, inv = 1.0 / k
    for i in range(n):
        for ci in range(c):
            for t in range(lo):
                g = dy[i, ci, t] * inv
                for j in range(k):
                    dx[i, ci, t * stride + j] += g
    return dx_arr


def avgpool2d_forward(double[:, :, :, ::1] x, Py_ssize_t k, Py_ssize_t stride):
    cdef Py_ssize_t n = x.shape[0], c = x.shape[1]
    cdef Py_ssize_t h = x.shape[2], wid = x.shape[3]
    cdef Py_ssize_t ho = (h - k) // stride + 1, wo = (wid - k) // stride + 1
    y_arr = np.empty((n, c, ho, wo), dtype=np.float64)
    cdef double[:, :, :, ::1] y = y_arr
    cdef Py_ssize_t i, ci, r, t, p, q
    cdef double acc, inv = 1.0 / (k * k)
    for i in range(n):
        for ci in range(c):
            for r in range(ho):
                for t in range(wo):
                    acc = 0.0
                    for p in range(k):
                        for q in range(k):
                            acc += x[i, ci, r * stride + p, t * stride + q]
                    y[i, ci, r, t] = acc * inv
    return y_arr


def avgpool2d_backward(double[:, :, :, ::1] x, Py_ssize_t k, Py_ssize_t stride,
                       double[:, :, :, ::1] dy):
    cdef Py_ssize_t n = x.shape[0], c = x.shape[1]
    cdef Py_ssize_t h = x.shape[2], wid = x.shape[3]
    cdef Py_ssize_t ho = dy.shape[2], wo = dy.shape[3]
    dx_arr = np.zeros((n, c, h, wid), dtype=np.float64)
    cdef double[:, :, :, ::1] dx = dx_arr
    cdef Py_ssize_t i, ci, r, t, p, q
    cdef double g, inv = 1.0 / (k * k)
    for i in range(n):
        for ci in range(c):
            for r in range(ho):
                for t in range(wo):
                    g = dy[i, ci, r, t] * inv
                    for p in range(k):
                        for q in range(k):
                            dx[i, ci, r * stride + p, t * stride + q] += g
    return dx_arr


def elman_forward(double[:, :, ::1] x, double[:, ::1] wx, double[:, ::1] wh,
                  double[::1] b):
    cdef Py_ssize_t n = x.shape[0], cin = x.shape[1], length = x.shape[2]
    cdef Py_ssize_t hid = wh.shape[0]
    hs_arr = np.empty((n, length, hid), dtype=np.float64)
    cdef double[:, :, ::1] hs = hs_arr
    cdef Py_ssize_t i, t, j, c
    cdef double acc
    for i in range(n):
        for t in range(length):
            for j in range(hid):
                acc = b[j]
                for c in range(cin):
                    acc += x[i, c, t] * wx[c, j]
                if t > 0:
                    for c in range(hid):
                        acc += hs[i, t - 1, c] * wh[c, j]
                hs[i, t, j] = tanh(acc)
    return hs_arr


def elman_backward(double[:, :, ::1] x, double[:, ::1] wx, double[:, ::1] wh,
                   double[:, :, ::1] hs, double[:, ::1] dh_last, bint need_dx):
    cdef Py_ssize_t n = x.shape[0], cin = x.shape[1], length = x.shape[2]
    cdef Py_ssize_t hid = wh.shape[0]
    dwx_arr = np.zeros((cin, hid), dtype=np.float64)
    dwh_arr = np.zeros((hid, hid), dtype=np.float64)
    db_arr = np.zeros(hid, dtype=np.float64)
    cdef double[:, ::1] dwx = dwx_arr
    cdef double[:, ::1] dwh = dwh_arr
    cdef double[::1] db = db_arr
    cdef double[:, :, ::1] dx
    dx_arr = None
    if need_dx:
        dx_arr = np.zeros((n, cin, length), dtype=np.float64)
        dx = dx_arr
    da_arr = np.empty(hid, dtype=np.float64)
    dh_arr = np.empty(hid, dtype=np.float64)
    cdef double[::1] da = da_arr
    cdef double[::1] dh = dh_arr
    cdef Py_ssize_t i, t, j, c
    cdef double acc, hv
    for i in range(n):
        for j in range(hid):
            dh[j] = dh_last[i, j]
        for t in range(length - 1, -1, -1):
            for j in range(hid):
                hv = hs[i, t, j]
                da[j] = dh[j] * (1.0 - hv * hv)
            for j in range(hid):
                db[j] += da[j]
                for c in range(cin):
                    dwx[c, j] += x[i, c, t] * da[j]
                if t > 0:
                    for c in range(hid):
                        dwh[c, j] += hs[i, t - 1, c] * da[j]
            if need_dx:
                for c in range(cin):
                    acc = 0.0
                    for j in range(hid):
                        acc += da[j] * wx[c, j]
                    dx[i, c, t] = acc
            for c in range(hid):
                acc = 0.0
                for j in range(hid):
                    acc += da[j] * wh[c, j]
                dh[c] = acc
    return dx_arr, dwx_arr, dwh_arr, db_arr


def iir_filter(double[::1] b, double[::1] a, double[::1] x):
    cdef Py_ssize_t n = x.shape[0]
    y_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] y = y_arr
    cdef double b0 = b[0]
    cdef double b1 = b[1] if b.shape[0] > 1 else 0.0
    cdef double b2 = b[2] if b.shape[0] > 2 else 0.0
    cdef double a1 = a[1] if a.shape[0] > 1 else 0.0
    cdef double a2 = a[2] if a.shape[0] > 2 else 0.0
    cdef double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0, xi, yi
    cdef Py_ssize_t i
    for i in range(n):
        xi = x[i]
        yi = b0 * xi + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2
        x2 = x1
        x1 = xi
        y2 = y1
        y1 = yi
        y[i] = yi
    return y_arr
