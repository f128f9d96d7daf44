"""Searching the moment-map stabilizer for a local unitary between two
canonical states.

After canonicalization two LU-equivalent states can only differ by a
block-diagonal local unitary whose blocks follow the eigenvalue
multiplicities of the reduced matrices. Two searches are provided:

* :func:`generic_phase_match` - every block has size one, so the unknown is
  a tuple of diagonal phases. This is decided exactly (supports, moduli,
  and a linear congruence system modulo 2 pi).
* :func:`block_overlap_maximize` - general blocks. Maximizes
  ``|<a|U_1 x ... x U_M|b>|`` by alternating exact block-wise Procrustes
  updates. A failure to reach overlap one is *not* a proof of
  inequivalence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import ConfigInvalid, DimensionMismatch, NonUnitaryWitness, NotGeneric
from .spectra import CanonicalForm
from .state import (
    EPS_UNITARY,
    LocalUnitaryTuple,
    PureState,
    apply_tuple,
    identity_tuple,
    projective_equal,
    random_local_unitary,
)

MATCHED = "Matched"
RULED_OUT = "RuledOut"
NUMERICALLY_UNMATCHED = "NumericallyUnmatched"


@dataclass(frozen=True)
class BlockStructure:
    """Per-party block sizes of the stabilizer (descending eigenvalue order)."""

    sizes: tuple

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(tuple(int(m) for m in s) for s in self.sizes))
        for s in self.sizes:
            if len(s) < 1 or any(m < 1 for m in s):
                raise ValueError(f"invalid block sizes {s}")

    @property
    def dims(self) -> tuple:
        return tuple(sum(s) for s in self.sizes)

    def slices(self, k: int) -> list:
        out, start = [], 0
        for m in self.sizes[k]:
            out.append(slice(start, start + m))
            start += m
        return out

    def stabilizer_dim(self) -> int:
        """Real dimension of the block stabilizer inside the product of SU(d_k)."""
        return sum(sum(m * m for m in s) - 1 for s in self.sizes)

    def respects(self, U: LocalUnitaryTuple, tol: float = EPS_UNITARY) -> bool:
        """Are all entries of ``U`` outside the diagonal blocks below ``tol``?"""
        for k, m in enumerate(U.matrices):
            mask = np.ones(m.shape, dtype=bool)
            for s in self.slices(k):
                mask[s, s] = False
            if mask.any() and np.abs(m[mask]).max() > tol:
                return False
        return True


def block_structure(spectra: Sequence) -> BlockStructure:
    """Block sizes equal to the cluster multiplicities of each party."""
    return BlockStructure(tuple(s.multiplicities for s in spectra))


def is_generic(blocks: BlockStructure) -> bool:
    return all(m == 1 for s in blocks.sizes for m in s)


@dataclass
class MatchResult:
    status: str
    witness: Optional[LocalUnitaryTuple]
    overlap: float
    detail: str
    # block search: per-restart sweep overlaps; phase match: max residual
    history: list = field(default_factory=list)
    best_restart: Optional[int] = None
    residual: Optional[float] = None

    @property
    def matched(self) -> bool:
        return self.status == MATCHED


def _amps(x):
    s = x.state if isinstance(x, CanonicalForm) else x
    return s


# -- exact phase matching ---------------------------------------------------

def _integer_echelon(A, rhs):
    """Row-reduce an integer matrix with unimodular row operations.

    ``rhs`` is carried along with the same integer combinations, so a
    congruence ``A x = rhs (mod 2 pi)`` is transformed into an equivalent
    one. Rows are expected in priority order; among rows with equally small
    pivots, the earliest is used as pivot.
    """
    A = [list(map(int, row)) for row in A]
    rhs = list(map(float, rhs))
    m = len(A)
    n = len(A[0]) if m else 0
    r = 0
    pivots = []
    for col in range(n):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][col] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(A[i][col]), i))
            A[r], A[p] = A[p], A[r]
            rhs[r], rhs[p] = rhs[p], rhs[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][col]:
                    q = A[i][col] // A[r][col]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    rhs[i] -= q * rhs[r]
                    if A[i][col]:
                        clean = False
            if clean:
                break
        if r < m and A[r][col] != 0:
            pivots.append(col)
            r += 1
    return A, rhs, pivots


def solve_phase_congruence(A, rhs) -> np.ndarray:
    """One real solution of ``A x = rhs (mod 2 pi)`` with ``A`` integer.

    Always returns a vector; when the system is inconsistent modulo 2 pi the
    vector violates some equation, which the caller detects from residuals.
    Free variables are set to zero.
    """
    A = np.asarray(A)
    n = A.shape[1]
    E, c, pivots = _integer_echelon(A, rhs)
    x = np.zeros(n)
    for i in reversed(range(len(pivots))):
        col = pivots[i]
        s = c[i] - sum(E[i][j] * x[j] for j in range(col + 1, n))
        x[col] = s / E[i][col]
    return x


def _multi(t, dims):
    return tuple(int(i) for i in np.unravel_index(int(t), dims))


def _wrap(x):
    return (np.asarray(x) + np.pi) % (2 * np.pi) - np.pi


def generic_phase_match(a, b, eps_mod: float = 1e-10, eps_phase: float = 1e-8,
                        blocks: Optional[BlockStructure] = None) -> MatchResult:
    """Decide whether diagonal local phases map canonical ``b`` onto ``a``.

    Looks for ``theta`` and ``phi[k][i]`` with
    ``exp(i theta) prod_k exp(i phi[k][t_k]) b_t = a_t`` for all multi-indices
    ``t`` of the normalized states. The witness maps ``b`` to ``a``
    projectively.

    The phase residual of equation ``t`` is weighted by ``|a_t|``, i.e. it is
    the size of the mismatch it causes in the state vector, so phases of
    near-zero amplitudes cannot fail the test on rounding noise.
    """
    if blocks is None and isinstance(a, CanonicalForm):
        blocks = BlockStructure(a.blocks)
    if blocks is not None and not is_generic(blocks):
        raise NotGeneric(f"block sizes {blocks.sizes} are not all one")
    va, vb = _amps(a).normalized(), _amps(b).normalized()
    if va.dims != vb.dims:
        raise DimensionMismatch(f"dims {va.dims} vs {vb.dims}")
    dims = va.dims
    xa, xb = va.amplitudes, vb.amplitudes
    ma, mb = np.abs(xa), np.abs(xb)
    supp_a, supp_b = ma > eps_mod, mb > eps_mod
    if np.any(supp_a != supp_b):
        bad = np.flatnonzero(supp_a != supp_b)
        idx = [_multi(t, dims) for t in bad[:8]]
        return MatchResult(RULED_OUT, None, float(abs(np.vdot(xa, xb))),
                           f"supports differ at {len(bad)} indices, e.g. {idx}",
                           residual=float(np.abs(ma - mb)[bad].max()))
    moddiff = np.abs(ma - mb)
    if moddiff.max() > eps_mod:
        t = int(np.argmax(moddiff))
        return MatchResult(RULED_OUT, None, float(abs(np.vdot(xa, xb))),
                           f"moduli differ by {moddiff[t]:.3e} at {_multi(t, dims)}",
                           residual=float(moddiff[t]))

    support = np.flatnonzero(supp_a)
    support = support[np.argsort(-ma[support], kind="stable")]
    offsets = np.concatenate([[1], 1 + np.cumsum(dims)[:-1]])
    n_var = 1 + sum(dims)
    A = np.zeros((support.size, n_var), dtype=np.int64)
    A[:, 0] = 1
    for row, t in enumerate(support):
        for k, i in enumerate(np.unravel_index(t, dims)):
            A[row, offsets[k] + i] = 1
    rhs = np.angle(xa[support]) - np.angle(xb[support])
    x = solve_phase_congruence(A, rhs)
    res = np.abs(_wrap(A @ x - rhs)) * ma[support]
    worst = float(res.max()) if res.size else 0.0
    if worst > eps_phase:
        t = support[int(np.argmax(res))]
        return MatchResult(RULED_OUT, None, float(abs(np.vdot(xa, xb))),
                           f"phase system inconsistent mod 2pi: residual {worst:.3e} "
                           f"at {_multi(t, dims)}", residual=worst)
    mats = []
    for k, d in enumerate(dims):
        mats.append(np.diag(np.exp(1j * x[offsets[k]:offsets[k] + d])))
    U = LocalUnitaryTuple(tuple(mats))
    ov = float(abs(np.vdot(xa, apply_tuple(vb, U).amplitudes)))
    return MatchResult(MATCHED, U, ov, "diagonal phases found", residual=worst)


# -- numerical block search -------------------------------------------------

@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 20
    max_sweeps: int = 200
    conv: float = 1e-12
    eps_opt: float = 1e-7
    seed: int = 0
    stop_at_match: bool = True

    def validate(self):
        if self.restarts < 1:
            raise ConfigInvalid("restarts must be >= 1")
        if self.max_sweeps < 1:
            raise ConfigInvalid("max_sweeps must be >= 1")
        if not self.conv > 0 or not 0 < self.eps_opt < 1:
            raise ConfigInvalid("conv must be > 0 and eps_opt in (0, 1)")
        return self


def _procrustes_block(n):
    """argmax over unitary u of Re tr(u n)."""
    w, _, vh = np.linalg.svd(n)
    return vh.conj().T @ w.conj().T


def _random_block_unitary(blocks, k, rng):
    d = blocks.dims[k]
    u = np.zeros((d, d), dtype=np.complex128)
    for s, m in zip(blocks.slices(k), blocks.sizes[k]):
        u[s, s] = random_local_unitary(m, rng)
    return u


def _sweep_run(xa, xb, dims, blocks, mats, cfg):
    mats = list(mats)
    f = abs(np.vdot(xa, kernels.apply_all(xb, dims, mats)))
    hist = [float(f)]
    slices = [blocks.slices(k) for k in range(len(dims))]
    for _ in range(cfg.max_sweeps):
        for k in range(len(dims)):
            bt = kernels.apply_all(xb, dims, mats, skip=k)
            n = kernels.partial_contraction(xa, bt, dims, k).T
            u = np.zeros_like(n)
            for s in slices[k]:
                u[s, s] = _procrustes_block(n[s, s])
            mats[k] = u
        f_new = abs(np.vdot(xa, kernels.apply_all(xb, dims, mats)))
        hist.append(float(f_new))
        if f_new - f < cfg.conv or f_new >= 1.0 - 1e-15:
            f = f_new
            break
        f = f_new
    return mats, float(f), hist


def block_overlap_maximize(a, b, blocks: BlockStructure,
                           cfg: Optional[OptimizerConfig] = None) -> MatchResult:
    """Maximize ``|<a|U b>|`` over block-diagonal local unitaries ``U``.

    With all parties but ``k`` fixed, the overlap is ``tr(U_k N_k)`` for the
    partial contraction ``N_k``; its maximum over block-diagonal ``U_k`` is
    attained block by block at the polar factor of each diagonal block, so
    every sweep is nondecreasing. Restart 0 starts at the identity, the rest
    at Haar-random block unitaries with seeds derived from ``cfg.seed``.
    """
    cfg = (cfg or OptimizerConfig()).validate()
    va, vb = _amps(a).normalized(), _amps(b).normalized()
    if va.dims != vb.dims:
        raise DimensionMismatch(f"dims {va.dims} vs {vb.dims}")
    if blocks.dims != va.dims:
        raise DimensionMismatch(f"blocks {blocks.sizes} do not fit dims {va.dims}")
    dims = va.dims
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    best = (-1.0, None, None)
    history = []
    for r in range(cfg.restarts):
        if r == 0:
            init = list(identity_tuple(dims).matrices)
        else:
            rng = np.random.default_rng(seeds[r])
            init = [_random_block_unitary(blocks, k, rng) for k in range(len(dims))]
        mats, f, hist = _sweep_run(va.amplitudes, vb.amplitudes, dims, blocks, init, cfg)
        history.append(hist)
        if f > best[0]:
            best = (f, r, mats)
        if cfg.stop_at_match and f >= 1.0 - cfg.eps_opt:
            break
    f, r, mats = best
    U = LocalUnitaryTuple(tuple(mats))
    if f >= 1.0 - cfg.eps_opt:
        return MatchResult(MATCHED, U, f, f"overlap {f:.15f} reached in restart {r}",
                           history=history, best_restart=r)
    return MatchResult(NUMERICALLY_UNMATCHED, U, f,
                       f"best overlap {f:.15f} < 1 - {cfg.eps_opt:g} after {len(history)} "
                       "restarts (not a proof of inequivalence)",
                       history=history, best_restart=r)


def sweeps_monotone(history, tol: float = 1e-12) -> bool:
    """True iff every per-restart overlap sequence is nondecreasing within ``tol``."""
    return all(np.all(np.diff(h) >= -tol) for h in history)


def verify_witness(v1: PureState, v2: PureState, U, tol: float = 1e-6,
                   eps_unitary: float = EPS_UNITARY,
                   blocks: Optional[BlockStructure] = None) -> bool:
    """Does ``U`` map ``v2`` onto the ray of ``v1``?

    Returns False when ``blocks`` is given and ``U`` leaves it.

    Raises
    ------
    DimensionMismatch
        on shape disagreement.
    NonUnitaryWitness
        if a factor is not unitary within ``eps_unitary``.
    """
    mats = U.matrices if isinstance(U, LocalUnitaryTuple) else tuple(np.asarray(m) for m in U)
    if v1.dims != v2.dims:
        raise DimensionMismatch(f"dims {v1.dims} vs {v2.dims}")
    if tuple(np.shape(m) for m in mats) != tuple((d, d) for d in v1.dims):
        raise DimensionMismatch(f"witness shapes {[np.shape(m) for m in mats]} for dims {v1.dims}")
    U = LocalUnitaryTuple(tuple(mats))
    err = U.unitarity_error()
    if err > eps_unitary:
        raise NonUnitaryWitness(f"witness deviates from unitarity by {err:.3e}")
    if blocks is not None and not blocks.respects(U):
        return False
    return projective_equal(v1, apply_tuple(v2, U), tol)


def diagonal_phase_tuple(phases: Sequence[Sequence[float]]) -> LocalUnitaryTuple:
    return LocalUnitaryTuple(tuple(np.diag(np.exp(1j * np.asarray(p, float))) for p in phases))

