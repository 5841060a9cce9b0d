# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop for oscillatory quadrature sums."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


def phase_sum(double[::1] x, double[::1] y, double complex[::1] c):
    """out[a] = sum_b c[b] * exp(-i x[a] y[b])."""
    cdef Py_ssize_t na = x.shape[0], nb = y.shape[0], a, b
    if c.shape[0] != nb:
        raise ValueError("coefficient length must match y")
    out = np.empty(na, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef double re, im, ph, cr, ci, cs, sn
    with nogil:
        for a in range(na):
            re = 0.0
            im = 0.0
            for b in range(nb):
                ph = x[a] * y[b]
                cs = cos(ph)
                sn = sin(ph)
                cr = c[b].real
                ci = c[b].imag
                # (cr + i ci)(cs - i sn)
                re = re + cr * cs + ci * sn
                im = im + ci * cs - cr * sn
            o[a] = re + 1j * im
    return out
