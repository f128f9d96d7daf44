# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled contraction kernels.

The state tensor is viewed as a (pre, d, post) block where ``d`` is the
dimension of the addressed party; all loops run over that flat layout.
"""
import numpy as np

ctypedef double complex cplx


def apply_axis(const cplx[::1] psi, Py_ssize_t pre, Py_ssize_t d,
               Py_ssize_t post, const cplx[:, ::1] u):
    cdef Py_ssize_t p, i, j, q, out0, in0
    cdef cplx c
    out = np.zeros(pre * d * post, dtype=np.complex128)
    cdef cplx[::1] o = out
    for p in range(pre):
        for i in range(d):
            out0 = (p * d + i) * post
            for j in range(d):
                c = u[i, j]
                in0 = (p * d + j) * post
                for q in range(post):
                    o[out0 + q] = o[out0 + q] + c * psi[in0 + q]
    return out


def partial_contraction(const cplx[::1] a, const cplx[::1] b, Py_ssize_t pre,
                        Py_ssize_t d, Py_ssize_t post):
    cdef Py_ssize_t p, i, j, q, a0, b0
    cdef double ar, ai, br, bi, sr, si
    out = np.zeros((d, d), dtype=np.complex128)
    cdef cplx[:, ::1] m = out
    for i in range(d):
        for j in range(d):
            sr = 0.0
            si = 0.0
            for p in range(pre):
                a0 = (p * d + i) * post
                b0 = (p * d + j) * post
                for q in range(post):
                    ar = a[a0 + q].real
                    ai = a[a0 + q].imag
                    br = b[b0 + q].real
                    bi = b[b0 + q].imag
                    # conj(a) * b
                    sr += ar * br + ai * bi
                    si += ar * bi - ai * br
            m[i, j] = sr + 1j * si
    return out
