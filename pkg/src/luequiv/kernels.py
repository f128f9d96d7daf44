"""Backend selection for the hot contraction kernels.

Two primitives carry almost all of the arithmetic in this package:

``apply_axis(psi, dims, k, u)``
    act with a ``d_k x d_k`` matrix on tensor slot ``k`` of a flat state.
``partial_contraction(a, b, dims, k)``
    ``M[i, j] = sum conj(a[..i..]) * b[..j..]`` over every slot except ``k``.

The compiled extension is used when it was built; otherwise the numpy
fallback is used. :func:`set_backend` switches at runtime (benchmarks and the
cross-backend tests rely on it).
"""
from math import prod

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_impl = _BACKENDS.get("cython", _pykernels)


def available_backends():
    return sorted(_BACKENDS)


def get_backend():
    return "cython" if _impl is _ckernels and _ckernels is not None else "python"


def set_backend(name):
    """Select ``"cython"`` or ``"python"``; returns the previous name."""
    global _impl
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available (have {available_backends()})")
    previous = get_backend()
    _impl = _BACKENDS[name]
    return previous


def _split(dims, k):
    return prod(dims[:k]), dims[k], prod(dims[k + 1:])


def _c(x):
    return np.ascontiguousarray(x, dtype=np.complex128)


def apply_axis(psi, dims, k, u):
    pre, d, post = _split(dims, k)
    return _impl.apply_axis(_c(psi), pre, d, post, _c(u))


def partial_contraction(a, b, dims, k):
    pre, d, post = _split(dims, k)
    return _impl.partial_contraction(_c(a), _c(b), pre, d, post)


def apply_all(psi, dims, mats, skip=None):
    """Apply ``mats[k]`` on every slot ``k`` (except ``skip``)."""
    out = psi
    for k, u in enumerate(mats):
        if k != skip:
            out = apply_axis(out, dims, k, u)
    return out
