# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled stage-1 accumulation kernels for color equalization.

Same contract as ``_ace_numpy``; selected automatically when importable.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def stage1_exhaustive(double[:, ::1] flat, Py_ssize_t width, double slope,
                      Py_ssize_t start, Py_ssize_t count):
    cdef Py_ssize_t n = flat.shape[0]
    out_arr = np.empty((count, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, p, j, c
    cdef double px, py, dx, dy, inv_d, t
    cdef double acc0, acc1, acc2
    cdef double scale = slope / 255.0
    for i in range(count):
        p = start + i
        px = <double>(p % width)
        py = <double>(p // width)
        acc0 = acc1 = acc2 = 0.0
        for j in range(n):
            if j == p:
                continue
            dx = px - <double>(j % width)
            dy = py - <double>(j // width)
            inv_d = 1.0 / sqrt(dx * dx + dy * dy)
            t = (flat[p, 0] - flat[j, 0]) * scale
            if t > 1.0:
                t = 1.0
            elif t < -1.0:
                t = -1.0
            acc0 += t * inv_d
            t = (flat[p, 1] - flat[j, 1]) * scale
            if t > 1.0:
                t = 1.0
            elif t < -1.0:
                t = -1.0
            acc1 += t * inv_d
            t = (flat[p, 2] - flat[j, 2]) * scale
            if t > 1.0:
                t = 1.0
            elif t < -1.0:
                t = -1.0
            acc2 += t * inv_d
        out[i, 0] = acc0
        out[i, 1] = acc1
        out[i, 2] = acc2
    return out_arr


def stage1_sampled(double[:, ::1] flat, Py_ssize_t width, double slope,
                   cnp.int64_t[::1] pix, cnp.int64_t[:, ::1] samp):
    cdef Py_ssize_t count = pix.shape[0]
    cdef Py_ssize_t k = samp.shape[1]
    out_arr = np.empty((count, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, m, p, j
    cdef double px, py, dx, dy, inv_d, t
    cdef double acc0, acc1, acc2
    cdef double scale = slope / 255.0
    for i in range(count):
        p = <Py_ssize_t>pix[i]
        px = <double>(p % width)
        py = <double>(p // width)
        acc0 = acc1 = acc2 = 0.0
        for m in range(k):
            j = <Py_ssize_t>samp[i, m]
            dx = px - <double>(j % width)
            dy = py - <double>(j // width)
            inv_d = 1.0 / sqrt(dx * dx + dy * dy)
            t = (flat[p, 0] - flat[j, 0]) * scale
            if t > 1.0:
                t = 1.0
            elif t < -1.0:
                t = -1.0
            acc0 += t * inv_d
            t = (flat[p, 1] - flat[j, 1]) * scale
            if t > 1.0:
                t = 1.0
            elif t < -1.0:
                t = -1.0
            acc1 += t * inv_d
            t = (flat[p, 2] - flat[j, 2]) * scale
            if t > 1.0:
                t = 1.0
            elif t < -1.0:
                t = -1.0
            acc2 += t * inv_d
        out[i, 0] = acc0
        out[i, 1] = acc1
        out[i, 2] = acc2
    return out_arr
