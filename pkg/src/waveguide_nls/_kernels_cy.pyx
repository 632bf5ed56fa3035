# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pointwise kernels: fused loops, no temporaries.

Signatures mirror _kernels_np; reductions stay outside (np.sum) so both
backends aggregate identically.
"""

import numpy as np

from libc.math cimport cos, sin

BACKEND = "cython"


def abs2(u):
    a = np.ascontiguousarray(u, dtype=np.complex128)
    out = np.empty(a.size, dtype=np.float64)
    cdef const double complex[::1] x = a.ravel()
    cdef double[::1] o = out
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double re, im
    for i in range(n):
        re = x[i].real
        im = x[i].imag
        o[i] = re * re + im * im
    return out.reshape(a.shape)


def abs4(u):
    a = np.ascontiguousarray(u, dtype=np.complex128)
    out = np.empty(a.size, dtype=np.float64)
    cdef const double complex[::1] x = a.ravel()
    cdef double[::1] o = out
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double re, im, m
    for i in range(n):
        re = x[i].real
        im = x[i].imag
        m = re * re + im * im
        o[i] = m * m
    return out.reshape(a.shape)


def product_abs2(u, v):
    a = np.ascontiguousarray(u, dtype=np.complex128)
    b = np.ascontiguousarray(v, dtype=np.complex128)
    out = np.empty(a.size, dtype=np.float64)
    cdef const double complex[::1] x = a.ravel()
    cdef const double complex[::1] y = b.ravel()
    cdef double[::1] o = out
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double re, im, p, q
    for i in range(n):
        re = x[i].real
        im = x[i].imag
        p = re * re + im * im
        re = y[i].real
        im = y[i].imag
        q = re * re + im * im
        o[i] = p * q
    return out.reshape(a.shape)


def cubic_pointwise(u):
    a = np.ascontiguousarray(u, dtype=np.complex128)
    out = np.empty(a.size, dtype=np.complex128)
    cdef const double complex[::1] x = a.ravel()
    cdef double complex[::1] o = out
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double re, im, m
    for i in range(n):
        re = x[i].real
        im = x[i].imag
        m = re * re + im * im
        o[i] = (m * re) + 1j * (m * im)
    return out.reshape(a.shape)


def nonlinear_phase(u, double dt):
    a = np.ascontiguousarray(u, dtype=np.complex128)
    out = np.empty(a.size, dtype=np.complex128)
    cdef const double complex[::1] x = a.ravel()
    cdef double complex[::1] o = out
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double re, im, ph, c, s
    for i in range(n):
        re = x[i].real
        im = x[i].imag
        ph = -dt * (re * re + im * im)
        c = cos(ph)
        s = sin(ph)
        o[i] = (re * c - im * s) + 1j * (re * s + im * c)
    return out.reshape(a.shape)
