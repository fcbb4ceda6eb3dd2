# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled integrand kernels; mirrors _kernels_py.py function for function."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt

cnp.import_array()

BACKEND = "cython"

cdef double complex J = 1j


cdef inline int _check_inputs(double[:, ::1] pts, double[::1] r0) except -1:
    if pts.shape[1] != 3 or r0.shape[0] != 3:
        raise ValueError("points must be (N, 3) and r0 (3,)")
    return 0


def rate_integrand_batch(double[:, ::1] points, double[::1] r0, double k, int axis):
    """Scalar decay-rate integrand [a^2 + (b^2 - 2ab) w/u^2] e^{2iq}."""
    _check_inputs(points, r0)
    if axis < 0 or axis > 2:
        raise ValueError("axis must be 0, 1 or 2")
    cdef Py_ssize_t n = points.shape[0], i
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef double dx, dy, dz, u2, q, q2, q3, w, comp
    cdef double complex a, b, phase
    cdef bint bad = False
    with nogil:
        for i in range(n):
            dx = points[i, 0] - r0[0]
            dy = points[i, 1] - r0[1]
            dz = points[i, 2] - r0[2]
            u2 = dx * dx + dy * dy + dz * dz
            if u2 == 0.0:
                bad = True
                break
            q = k * sqrt(u2)
            q2 = q * q
            q3 = q2 * q
            a = 1.0 / q + J / q2 - 1.0 / q3
            b = 1.0 / q + 3.0 * J / q2 - 3.0 / q3
            if axis == 0:
                comp = dx
            elif axis == 1:
                comp = dy
            else:
                comp = dz
            w = comp * comp / u2
            phase = cos(2.0 * q) + J * sin(2.0 * q)
            o[i] = (a * a + (b * b - 2.0 * a * b) * w) * phase
    if bad:
        raise ValueError("integrand evaluated at the emitter position")
    return out


def tensor_integrand_batch(double[:, ::1] points, double[::1] r0, double k):
    """Tensor integrand [a^2 I + (b^2 - 2ab) uu/u^2] e^{2iq}, (N, 9) row-major."""
    _check_inputs(points, r0)
    cdef Py_ssize_t n = points.shape[0], i
    out = np.empty((n, 9), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double d0, d1, d2, u2, q, q2, q3
    cdef double complex a, b, phase, diag, cross
    cdef bint bad = False
    with nogil:
        for i in range(n):
            d0 = points[i, 0] - r0[0]
            d1 = points[i, 1] - r0[1]
            d2 = points[i, 2] - r0[2]
            u2 = d0 * d0 + d1 * d1 + d2 * d2
            if u2 == 0.0:
                bad = True
                break
            q = k * sqrt(u2)
            q2 = q * q
            q3 = q2 * q
            a = 1.0 / q + J / q2 - 1.0 / q3
            b = 1.0 / q + 3.0 * J / q2 - 3.0 / q3
            phase = cos(2.0 * q) + J * sin(2.0 * q)
            diag = a * a * phase
            cross = (b * b - 2.0 * a * b) * phase / u2
            o[i, 0] = cross * d0 * d0 + diag
            o[i, 1] = cross * d0 * d1
            o[i, 2] = cross * d0 * d2
            o[i, 3] = o[i, 1]
            o[i, 4] = cross * d1 * d1 + diag
            o[i, 5] = cross * d1 * d2
            o[i, 6] = o[i, 2]
            o[i, 7] = o[i, 5]
            o[i, 8] = cross * d2 * d2 + diag
    if bad:
        raise ValueError("integrand evaluated at the emitter position")
    return out
