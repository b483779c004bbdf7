# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled J0/J1 kernels; same branch structure as kernels.pure."""

from libc.math cimport fabs, sqrt, cos, sin, M_PI

import numpy as np

from . import coeffs as _coeffs

cdef double[11] P0C, Q0C, P1C, Q1C
cdef int _i
for _i in range(11):
    P0C[_i] = _coeffs.P0[_i]
    Q0C[_i] = _coeffs.Q0[_i]
    P1C[_i] = _coeffs.P1[_i]
    Q1C[_i] = _coeffs.Q1[_i]

cdef double SERIES_CUTOFF = _coeffs.SERIES_CUTOFF

BACKEND = "cython"


cdef double _series_j0(double x) nogil:
    cdef double q = 0.25 * x * x
    cdef double term = 1.0, s = 1.0, c = 0.0, y, t
    cdef int k = 0
    while True:
        k += 1
        term *= -q / (k * k)
        y = term - c
        t = s + y
        c = (t - s) - y
        s = t
        if k > 3 and fabs(term) <= 1e-18 * (1.0 + fabs(s)):
            return s


cdef double _series_j1(double x) nogil:
    cdef double q = 0.25 * x * x
    cdef double term = 0.5 * x, s = 0.5 * x, c = 0.0, y, t
    cdef int k = 0
    while True:
        k += 1
        term *= -q / (k * (k + 1))
        y = term - c
        t = s + y
        c = (t - s) - y
        s = t
        if k > 3 and fabs(term) <= 1e-18 * (1.0 + fabs(s)):
            return s


cdef double _j0(double x) nogil:
    cdef double y, p, q, chi
    cdef int k
    x = fabs(x)
    if x <= SERIES_CUTOFF:
        return _series_j0(x)
    y = 1.0 / (x * x)
    p = 0.0
    q = 0.0
    for k in range(10, -1, -1):
        p = p * y + P0C[k]
        q = q * y + Q0C[k]
    q /= x
    chi = x - 0.25 * M_PI
    return sqrt(2.0 / (M_PI * x)) * (p * cos(chi) - q * sin(chi))


cdef double _j1(double x) nogil:
    cdef double ax = fabs(x), y, p, q, chi, v
    cdef int k
    if ax <= SERIES_CUTOFF:
        v = _series_j1(ax)
    else:
        y = 1.0 / (ax * ax)
        p = 0.0
        q = 0.0
        for k in range(10, -1, -1):
            p = p * y + P1C[k]
            q = q * y + Q1C[k]
        q /= ax
        chi = ax - 0.75 * M_PI
        v = sqrt(2.0 / (M_PI * ax)) * (p * cos(chi) - q * sin(chi))
    return -v if x < 0 else v


def j0(double x):
    return _j0(x)


def j1(double x):
    return _j1(x)


def j0_array(x):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    out_arr = np.empty(xv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out_arr
    cdef Py_ssize_t i, n = xv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _j0(xv[i])
    return out_arr.reshape(np.shape(x))
