# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. See ``_pykernels`` for the reference contracts."""

import numpy as np
from libc.math cimport sqrt, exp, log, fabs

cdef double PI_M14 = 0.7511255444649425
cdef double RESCALE = 1e150


def hermite_table(int n_max, x):
    cdef const double[::1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t m = xs.shape[0]
    out_arr = np.empty((n_max + 1, m))
    cdef double[:, ::1] out = out_arr
    cdef double[::1] a = np.empty(n_max + 1)
    cdef double[::1] b = np.empty(n_max + 1)
    cdef Py_ssize_t j
    cdef int n
    cdef double y, p, p_prev, p_next, log_scale, factor
    cdef double log_rescale = log(RESCALE)
    for n in range(n_max):
        a[n] = sqrt(2.0 / (n + 1))
        b[n] = sqrt(n / (n + 1.0))
    for j in range(m):
        y = xs[j]
        log_scale = -0.5 * y * y
        factor = exp(log_scale)
        p_prev = 0.0
        p = PI_M14
        out[0, j] = p * factor
        for n in range(n_max):
            p_next = y * a[n] * p - b[n] * p_prev
            if fabs(p_next) > RESCALE:
                p_next /= RESCALE
                p /= RESCALE
                log_scale += log_rescale
                factor = exp(log_scale)
            p_prev = p
            p = p_next
            out[n + 1, j] = p * factor
    return out_arr


def superpose(coeffs, x):
    # the recurrence is the compiled part; the (t, n) x (n, x) contraction is
    # left to BLAS through numpy, which a hand loop does not beat
    c_arr = np.atleast_2d(np.asarray(coeffs, dtype=np.complex128))
    return c_arr @ hermite_table(c_arr.shape[1] - 1, x)


cdef void _banded_apply(const double complex[:, ::1] bands, const double complex[::1] v,
                        double complex[::1] out) noexcept nogil:
    cdef Py_ssize_t d = v.shape[0]
    cdef Py_ssize_t n
    cdef double complex s
    for n in range(d):
        s = bands[2, n] * v[n]
        if n >= 2:
            s = s + bands[0, n] * v[n - 2]
        if n >= 1:
            s = s + bands[1, n] * v[n - 1]
        if n + 1 < d:
            s = s + bands[3, n] * v[n + 1]
        if n + 2 < d:
            s = s + bands[4, n] * v[n + 2]
        out[n] = s


def banded_apply(bands, v):
    cdef const double complex[:, ::1] bv = np.ascontiguousarray(bands, dtype=np.complex128)
    vv = np.ascontiguousarray(v, dtype=np.complex128)
    out = np.empty_like(vv)
    _banded_apply(bv, vv, out)
    return out


def expm_banded(bands, v, int steps, double rtol=1e-16, int max_terms=80):
    cdef double complex[:, ::1] bv = np.ascontiguousarray(bands, dtype=np.complex128) / steps
    out_arr = np.array(v, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t d = out.shape[0]
    cdef double complex[::1] term = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] nxt = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] tmp
    cdef Py_ssize_t n
    cdef int step, k
    cdef double tn, an
    cdef bint converged
    for step in range(steps):
        for n in range(d):
            term[n] = out[n]
        converged = False
        for k in range(1, max_terms + 1):
            _banded_apply(bv, term, nxt)
            tn = 0.0
            an = 0.0
            for n in range(d):
                nxt[n] = nxt[n] / k
                out[n] = out[n] + nxt[n]
                tn += nxt[n].real * nxt[n].real + nxt[n].imag * nxt[n].imag
                an += out[n].real * out[n].real + out[n].imag * out[n].imag
            tmp = term
            term = nxt
            nxt = tmp
            if sqrt(tn) <= rtol * sqrt(an):
                converged = True
                break
        if not converged:
            raise RuntimeError("Taylor series did not converge; increase steps")
    return out_arr
