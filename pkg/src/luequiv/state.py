"""Multipartite pure states and local unitary actions.

Amplitudes are stored as a dense flat vector in row-major order: the index
``(i_1, ..., i_M)`` maps to ``i_1`` slowest and ``i_M`` fastest, exactly as
``numpy.ravel_multi_index`` does. States are kept unnormalized; routines that
need a unit vector normalize internally.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DimensionMismatch, NonUnitaryWitness, ZeroState

EPS_UNITARY = 1e-10


def _frozen(x, dtype=np.complex128):
    a = np.array(x, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Coefficient tensor of a pure state on ``C^{d_1} x ... x C^{d_M}``."""

    dims: tuple
    amplitudes: np.ndarray

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def normalized(self) -> "PureState":
        return PureState(self.dims, _frozen(self.amplitudes / self.norm))

    def scaled(self, c: complex) -> "PureState":
        return make_state(self.dims, c * self.amplitudes)

    def __repr__(self):
        return f"PureState(dims={self.dims}, norm={self.norm:.6g})"


def make_state(dims: Sequence[int], amplitudes) -> PureState:
    """Validate and wrap an amplitude vector.

    Raises
    ------
    DimensionMismatch
        if ``len(amplitudes) != prod(dims)``, a party has dimension < 2, or
        no party is given.
    ZeroState
        if the vector has zero norm.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) < 1:
        raise DimensionMismatch("need at least one party")
    if any(d < 2 for d in dims):
        raise DimensionMismatch(f"every party dimension must be >= 2, got {dims}")
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.size != prod(dims):
        raise DimensionMismatch(f"{amps.size} amplitudes for dims {dims} (need {prod(dims)})")
    if not np.all(np.isfinite(amps)):
        raise ValueError("amplitudes must be finite")
    if not np.any(amps):
        raise ZeroState("the zero vector is not a state")
    return PureState(dims, _frozen(amps))


def basis_state(dims: Sequence[int], index: Sequence[int]) -> PureState:
    amps = np.zeros(prod(dims), dtype=np.complex128)
    amps[np.ravel_multi_index(tuple(index), tuple(dims))] = 1.0
    return make_state(dims, amps)


@dataclass(frozen=True, eq=False)
class LocalUnitaryTuple:
    """One unitary per party, ``matrices[k]`` of shape ``(d_k, d_k)``."""

    matrices: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(_frozen(m) for m in self.matrices))

    @property
    def dims(self) -> tuple:
        return tuple(m.shape[0] for m in self.matrices)

    def __len__(self):
        return len(self.matrices)

    def __getitem__(self, k):
        return self.matrices[k]

    def __iter__(self):
        return iter(self.matrices)

    def unitarity_error(self) -> float:
        return max(float(np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()) for m in self.matrices)

    def dagger(self) -> "LocalUnitaryTuple":
        return LocalUnitaryTuple(tuple(m.conj().T for m in self.matrices))

    def compose(self, other: "LocalUnitaryTuple") -> "LocalUnitaryTuple":
        """Party-wise product ``self[k] @ other[k]`` (``other`` acts first)."""
        if self.dims != other.dims:
            raise DimensionMismatch(f"{self.dims} vs {other.dims}")
        return LocalUnitaryTuple(tuple(a @ b for a, b in zip(self.matrices, other.matrices)))

    def kron(self) -> np.ndarray:
        out = np.ones((1, 1), dtype=np.complex128)
        for m in self.matrices:
            out = np.kron(out, m)
        return out


def local_unitary_tuple(matrices, eps_unitary: float = EPS_UNITARY) -> LocalUnitaryTuple:
    """Build a tuple and check unitarity of every factor."""
    mats = []
    for m in matrices:
        m = np.asarray(m, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"local factor must be square, got shape {m.shape}")
        mats.append(m)
    t = LocalUnitaryTuple(tuple(mats))
    err = t.unitarity_error() if mats else 0.0
    if err > eps_unitary:
        raise NonUnitaryWitness(f"factor deviates from unitarity by {err:.3e} > {eps_unitary:.1e}")
    return t


def identity_tuple(dims: Sequence[int]) -> LocalUnitaryTuple:
    return LocalUnitaryTuple(tuple(np.eye(d, dtype=np.complex128) for d in dims))


def _check_same_dims(v: PureState, w: PureState):
    if v.dims != w.dims:
        raise DimensionMismatch(f"dims {v.dims} vs {w.dims}")


def inner(v: PureState, w: PureState) -> complex:
    """``<v|w>``, conjugate-linear in ``v``."""
    _check_same_dims(v, w)
    return complex(np.vdot(v.amplitudes, w.amplitudes))


def apply_tuple(v: PureState, U) -> PureState:
    """Return ``(U_1 x ... x U_M) |v>``."""
    mats = U.matrices if isinstance(U, LocalUnitaryTuple) else tuple(U)
    if len(mats) != v.n_parties:
        raise DimensionMismatch(f"{len(mats)} factors for {v.n_parties} parties")
    for k, (d, m) in enumerate(zip(v.dims, mats)):
        if np.shape(m) != (d, d):
            raise DimensionMismatch(f"party {k}: factor of shape {np.shape(m)} for dimension {d}")
    out = kernels.apply_all(v.amplitudes, v.dims, mats)
    return PureState(v.dims, _frozen(out))


def overlap(v: PureState, w: PureState) -> float:
    """``|<v|w>| / (|v| |w|)``, in [0, 1]."""
    return abs(inner(v, w)) / (v.norm * w.norm)


def projective_equal(v: PureState, w: PureState, tol: float = 1e-8) -> bool:
    """True iff the rays of ``v`` and ``w`` coincide up to ``tol``."""
    _check_same_dims(v, w)
    # squared form with norms from the same vdot: exact for v == w at tol = 0
    vv = np.vdot(v.amplitudes, v.amplitudes).real
    ww = np.vdot(w.amplitudes, w.amplitudes).real
    ip = inner(v, w)
    return bool(ip.real * ip.real + ip.imag * ip.imag >= (1.0 - tol) ** 2 * vv * ww)


def random_haar_state(dims: Sequence[int], seed=None) -> PureState:
    """Standard complex Gaussian amplitudes (a Haar-random ray), not normalized."""
    rng = np.random.default_rng(seed)
    n = prod(int(d) for d in dims)
    amps = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
    return make_state(dims, amps)


def random_local_unitary(d: int, seed=None) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Ginibre matrix.

    The phases of ``diag(R)`` are moved into ``Q`` so that the distribution is
    exactly Haar (Mezzadri's recipe).
    """
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_local_tuple(dims: Sequence[int], seed=None) -> LocalUnitaryTuple:
    rng = np.random.default_rng(seed)
    return LocalUnitaryTuple(tuple(random_local_unitary(int(d), rng) for d in dims))


def ghz_state(dims: Sequence[int]) -> PureState:
    """``sum_i |i...i>`` over ``i < min(dims)``, normalized."""
    dims = tuple(dims)
    r = min(dims)
    amps = np.zeros(prod(dims), dtype=np.complex128)
    for i in range(r):
        amps[np.ravel_multi_index((i,) * len(dims), dims)] = 1.0
    return make_state(dims, amps / np.sqrt(r))


def w_state(dims: Sequence[int]) -> PureState:
    """Equal superposition of the single-excitation basis states."""
    dims = tuple(dims)
    amps = np.zeros(prod(dims), dtype=np.complex128)
    for k in range(len(dims)):
        idx = [0] * len(dims)
        idx[k] = 1
        amps[np.ravel_multi_index(tuple(idx), dims)] = 1.0
    return make_state(dims, amps / np.sqrt(len(dims)))


def product_state(vectors) -> PureState:
    """Tensor product of local vectors."""
    out = np.ones(1, dtype=np.complex128)
    dims = []
    for x in vectors:
        x = np.asarray(x, dtype=np.complex128).reshape(-1)
        dims.append(x.size)
        out = np.kron(out, x)
    return make_state(dims, out)


def random_product_state(dims: Sequence[int], seed=None) -> PureState:
    rng = np.random.default_rng(seed)
    vecs = []
    for d in dims:
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        vecs.append(x / np.linalg.norm(x))
    return product_state(vecs)
