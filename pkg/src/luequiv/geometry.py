"""Symplectic form, moment map pairings and orbit/fiber dimension counts.

Tangent vectors to projective space at ``pi(v)`` are modelled as vectors of
``H`` orthogonal to ``v`` (horizontal lifts). The generator ``A`` of the
local group moves ``v`` along ``A v - (<v|A v>/<v|v>) v``; for
anti-Hermitian ``A`` this removes exactly the phase direction ``i v``.
All ranks are real ranks of complex vectors viewed in ``R^{2D}``, counted
with a relative singular value threshold.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import InconsistentRanks, ShapeMismatch
from .spectra import EPS_GAP, all_spectral_data
from .state import PureState

RANK_TOL = 1e-10


def su_basis(d: int) -> list:
    """Anti-Hermitian traceless basis ``i * lambda_j`` of su(d) (generalized Gell-Mann)."""
    out = []
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=np.complex128)
            s[j, k] = s[k, j] = 1.0
            out.append(1j * s)
            a = np.zeros((d, d), dtype=np.complex128)
            a[j, k], a[k, j] = -1j, 1j
            out.append(1j * a)
    for l in range(1, d):
        h = np.zeros((d, d), dtype=np.complex128)
        h[np.arange(l), np.arange(l)] = 1.0
        h[l, l] = -l
        out.append(1j * h * np.sqrt(2.0 / (l * (l + 1))))
    return out


@dataclass(frozen=True)
class AlgebraBasis:
    """Real basis of ``su(d_1) + ... + su(d_M)``; element ``j`` is the local
    generator ``local[j]`` placed on slot ``slot[j]``."""

    dims: tuple
    slot: tuple
    local: tuple

    def __len__(self):
        return len(self.local)

    def lifted(self, j: int) -> np.ndarray:
        """Full ``D x D`` operator ``I x ... x A x ... x I``."""
        return lift(self.dims, self.slot[j], self.local[j])


def algebra_basis(dims: Sequence[int]) -> AlgebraBasis:
    dims = tuple(int(d) for d in dims)
    slots, mats = [], []
    for k, d in enumerate(dims):
        for a in su_basis(d):
            slots.append(k)
            mats.append(a)
    return AlgebraBasis(dims, tuple(slots), tuple(mats))


def lift(dims: Sequence[int], k: int, a: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for j, d in enumerate(dims):
        out = np.kron(out, a if j == k else np.eye(d))
    return out


def _check_op(v: PureState, a):
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (v.size, v.size):
        raise ShapeMismatch(f"operator of shape {a.shape} on a {v.size}-dimensional space")
    return a


def symplectic_form(v: PureState, A, B) -> float:
    """``omega(A_x, B_x) = -Im <Av|Bv> / <v|v>``."""
    A, B = _check_op(v, A), _check_op(v, B)
    x = v.amplitudes
    return float(-np.vdot(A @ x, B @ x).imag / np.vdot(x, x).real)


def symplectic_form_commutator(v: PureState, A, B) -> float:
    """Same form through ``(i/2) <[A,B]v|v> / <v|v>``."""
    A, B = _check_op(v, A), _check_op(v, B)
    x = v.amplitudes
    val = 0.5j * np.vdot((A @ B - B @ A) @ x, x) / np.vdot(x, x).real
    return float(val.real)


def moment_pairing(v: PureState, A) -> float:
    """``<mu(x), A> = (i/2) <v|Av> / <v|v>``, real for anti-Hermitian ``A``."""
    A = _check_op(v, A)
    x = v.amplitudes
    return float((0.5j * np.vdot(x, A @ x) / np.vdot(x, x).real).real)


def tangent_vectors(v: PureState, basis: Optional[AlgebraBasis] = None) -> np.ndarray:
    """Columns ``A_j v - (<v|A_j v>/<v|v>) v`` for the unit vector ``v/|v|``."""
    basis = basis or algebra_basis(v.dims)
    x = v.normalized().amplitudes
    cols = []
    for k, a in zip(basis.slot, basis.local):
        ax = kernels.apply_axis(x, v.dims, k, a)
        cols.append(ax - np.vdot(x, ax) * x)
    return np.array(cols).T if cols else np.zeros((x.size, 0), dtype=np.complex128)


def _realify(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z.real, z.imag], axis=0)


def _rank(m: np.ndarray, rank_tol: float) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


def orbit_dimension(v: PureState, rank_tol: float = RANK_TOL) -> int:
    """Real dimension of the local-group orbit through ``pi(v)``."""
    return _rank(_realify(tangent_vectors(v)), rank_tol)


def _nullity_gram(t: np.ndarray, rank_tol: float) -> int:
    # eigenvalues of the Gram matrix are squared singular values, so the
    # threshold is applied in squared units: sqrt(rank_tol) on singular values
    g = t.T @ t
    if g.size == 0:
        return 0
    w = np.linalg.eigvalsh(g)
    top = w.max()
    if top <= 0:
        return g.shape[0]
    return int(np.sum(w <= rank_tol * top))


def projective_stabilizer_dim(v: PureState, rank_tol: float = RANK_TOL) -> int:
    """Dimension of the subgroup of the local group fixing ``pi(v)``."""
    t = _realify(tangent_vectors(v))
    by_rank = t.shape[1] - _rank(t, rank_tol)
    by_null = _nullity_gram(t, rank_tol)
    if by_rank != by_null:
        raise InconsistentRanks(f"stabilizer: rank complement {by_rank} vs nullity {by_null}")
    return by_rank


def moment_stabilizer_dim(spectra: Sequence) -> int:
    """``sum_k (sum_n m_{k,n}^2 - 1)`` from the cluster multiplicities."""
    return sum(sum(m * m for m in s.multiplicities) - 1 for s in spectra)


def _horizontal_basis(v: PureState) -> np.ndarray:
    """Real basis (columns, in R^{2D}) of the complex orthocomplement of ``v``."""
    x = v.normalized().amplitudes.reshape(-1, 1)
    q, _ = np.linalg.qr(np.hstack([x, np.eye(x.size, dtype=np.complex128)]))
    h = q[:, 1:x.size]
    return _realify(np.hstack([h, 1j * h]))


def kernel_dimension(v: PureState, rank_tol: float = RANK_TOL) -> int:
    """Dimension of ``K``, the common kernel of ``d f_A`` over the local algebra.

    Computed (a) as ambient minus orbit dimension and (b) as the nullity of
    ``[omega(A_j v, h_m)]`` over a basis ``h_m`` of the projective tangent
    space; the two must agree.
    """
    ambient = 2 * (v.size - 1)
    t = tangent_vectors(v)
    via_orbit = ambient - _rank(_realify(t), rank_tol)
    h = _horizontal_basis(v)
    hc = h[: v.size] + 1j * h[v.size:]
    omega = -(t.conj().T @ hc).imag
    via_null = ambient - _rank(omega, rank_tol)
    if via_orbit != via_null:
        raise InconsistentRanks(f"dim K: {via_orbit} (complement) vs {via_null} (nullspace)")
    return via_orbit


@dataclass(frozen=True)
class DimensionsReport:
    ambient: int
    dim_orbit: int
    dim_K: int
    dim_stab_x: int
    dim_stab_mu: int
    dim_fiber_in_orbit: int
    fiber_covered: bool
    dim_algebra: int
    rank_tol: float
    eps_gap: float

    def to_dict(self) -> dict:
        return asdict(self)


def dimensions_report(v: PureState, rank_tol: float = RANK_TOL,
                      eps_gap: float = EPS_GAP) -> DimensionsReport:
    """All dimension counts at ``pi(v)``.

    ``fiber_covered`` is ``dim Stab(mu) - dim Stab(x) == dim K``: the part of
    the moment-map fiber swept out by the moment stabilizer already has the
    largest dimension the fiber could have. It is a sufficient condition
    only; when it is False nothing is concluded.
    """
    ambient = 2 * (v.size - 1)
    dim_g = sum(d * d - 1 for d in v.dims)
    orbit = orbit_dimension(v, rank_tol)
    stab_x = projective_stabilizer_dim(v, rank_tol)
    if orbit + stab_x != dim_g:
        raise InconsistentRanks(f"orbit {orbit} + stabilizer {stab_x} != {dim_g}")
    dim_k = kernel_dimension(v, rank_tol)
    stab_mu = moment_stabilizer_dim(all_spectral_data(v, eps_gap))
    fib = stab_mu - stab_x
    return DimensionsReport(
        ambient=ambient,
        dim_orbit=orbit,
        dim_K=dim_k,
        dim_stab_x=stab_x,
        dim_stab_mu=stab_mu,
        dim_fiber_in_orbit=fib,
        fiber_covered=fib == dim_k,
        dim_algebra=dim_g,
        rank_tol=rank_tol,
        eps_gap=eps_gap,
    )

