# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: LIF recursion over drive batches and the in-place
Walsh-Hadamard butterfly.  Semantics match _kernels_py exactly."""

import numpy as np


def lif_forward(double[:, ::1] drives, double beta, double theta, bint signed):
    cdef Py_ssize_t T = drives.shape[0]
    cdef Py_ssize_t m = drives.shape[1]
    spikes_arr = np.empty((T, m), dtype=np.int8)
    potentials_arr = np.empty((T, m), dtype=np.float64)
    u_arr = np.zeros(m, dtype=np.float64)
    s_arr = np.full(m, -1.0 if signed else 0.0, dtype=np.float64)

    cdef signed char[:, ::1] spikes = spikes_arr
    cdef double[:, ::1] potentials = potentials_arr
    cdef double[::1] u = u_arr
    cdef double[::1] s = s_arr
    cdef Py_ssize_t t, j
    cdef double ut

    for t in range(T):
        for j in range(m):
            if signed:
                ut = beta * u[j] + drives[t, j] - 0.5 * theta * (s[j] + 1.0)
                s[j] = 1.0 if ut >= theta else -1.0
            else:
                ut = beta * u[j] + drives[t, j] - theta * s[j]
                s[j] = 1.0 if ut >= theta else 0.0
            u[j] = ut
            potentials[t, j] = ut
            spikes[t, j] = <signed char> s[j]
    return spikes_arr, potentials_arr


def fwht_inplace(double[::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t h = 1
    cdef Py_ssize_t i, j
    cdef double x, y
    while h < n:
        i = 0
        while i < n:
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
            i += 2 * h
        h *= 2
    return np.asarray(a)
