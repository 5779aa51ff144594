# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: spherical Bessel sweeps and weighted wave sums.

Mirrors ``_pykernels`` exactly in algorithm; see that module for the contract.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, floor, fabs, ceil, log1p, pow, sqrt, M_PI

cnp.import_array()

cdef double UNDERFLOW = 1e-280


cpdef int downward_margin(int lmax):
    return <int>ceil(20.0 + 10.0 * log1p(lmax) + 4.0 * pow(lmax + 1.0, 1.0 / 3.0))


cdef void _sweep_one(double x, int lmax, int margin, double* out) noexcept nogil:
    cdef int l, top, anchor, start
    cdef double s, c, rho, v
    for l in range(lmax + 1):
        out[l] = 0.0
    if x == 0.0:
        out[0] = 1.0
        return
    s = sin(x)
    c = cos(x)
    out[0] = s / x
    top = <int>floor(x)
    if top > lmax:
        top = lmax
    if lmax >= 1 and top >= 1:
        out[1] = (s / x - c) / x
    for l in range(1, top):
        out[l + 1] = (2 * l + 1) / x * out[l] - out[l - 1]
    if top >= lmax:
        return

    anchor = top
    if top >= 1 and fabs(out[top - 1]) > fabs(out[top]):
        anchor = top - 1
    start = lmax + margin
    rho = 0.0
    l = start
    while l > anchor:
        rho = x / ((2 * l + 1) - x * rho)
        if l <= lmax:
            out[l] = rho
        l -= 1
    v = out[anchor]
    for l in range(anchor + 1, lmax + 1):
        if v != 0.0:
            v = v * out[l]
            if fabs(v) < UNDERFLOW:
                v = 0.0
        out[l] = v


def bessel_sweep(x, int lmax):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t i
    if n and (np.any(xs < 0) or not np.all(np.isfinite(xs))):
        raise ValueError("bessel_sweep requires finite x >= 0")
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((n, lmax + 1))
    cdef int margin = downward_margin(lmax)
    cdef double[:, ::1] ov = out
    cdef double[::1] xv = xs
    with nogil:
        for i in range(n):
            _sweep_one(xv[i], lmax, margin, &ov[i, 0])
    return out


def weighted_wave_sums(kappa, cweights, double r, int lmax):
    cdef double[::1] kv = np.ascontiguousarray(kappa, dtype=np.float64)
    cw = np.ascontiguousarray(cweights, dtype=np.complex128)
    cdef double[::1] wre = np.ascontiguousarray(cw.real)
    cdef double[::1] wim = np.ascontiguousarray(cw.imag)
    cdef Py_ssize_t n = kv.shape[0]
    cdef Py_ssize_t i
    cdef int l
    cdef int margin = downward_margin(lmax)
    cdef double x, y
    cdef double norm = sqrt(2.0 / M_PI)
    cdef double[::1] buf = np.empty(lmax + 1)
    cdef double[::1] acc_re = np.zeros(lmax + 1)
    cdef double[::1] acc_im = np.zeros(lmax + 1)
    if n and np.any(np.asarray(kv) * r < 0):
        raise ValueError("weighted_wave_sums requires kappa * r >= 0")
    with nogil:
        for i in range(n):
            x = kv[i] * r
            _sweep_one(x, lmax, margin, &buf[0])
            for l in range(lmax + 1):
                y = norm * x * buf[l]
                acc_re[l] += wre[i] * y
                acc_im[l] += wim[i] * y
    return np.asarray(acc_re) + 1j * np.asarray(acc_im)
