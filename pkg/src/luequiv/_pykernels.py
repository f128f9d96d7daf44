"""Numpy versions of the contraction kernels (same signatures as _ckernels)."""
import numpy as np


def apply_axis(psi, pre, d, post, u):
    x = psi.reshape(pre, d, post)
    return np.matmul(u, x).reshape(-1)


def partial_contraction(a, b, pre, d, post):
    x = a.reshape(pre, d, post).transpose(1, 0, 2).reshape(d, -1)
    y = b.reshape(pre, d, post).transpose(1, 0, 2).reshape(d, -1)
    return x.conj() @ y.T
