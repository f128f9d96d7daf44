"""Reduced matrices C_k, their spectra, and the canonical (diagonal) form.

``C_k`` is built literally from the coefficient tensor,
``(C_k)_{ij} = sum conj(C[..i..]) C[..j..]`` with all other slots summed,
which makes it the *transpose* of the usual one-party reduced density
matrix. Consequently the diagonalizing transform of a state is
``U_k^T`` where ``U_k^dagger C_k U_k`` is diagonal, and under
``v -> (U_1 x ... x U_M) v`` the matrix transforms as
``C_k -> conj(U_k) C_k U_k^T``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DimensionMismatch, EigensolverFailure, PartyOutOfRange
from .state import LocalUnitaryTuple, PureState, apply_tuple

EPS_GAP = 1e-8


@dataclass(frozen=True)
class SpectralData:
    """Descending eigen-data of ``C_k`` for one party.

    ``clusters`` holds ``(value, multiplicity)`` pairs; eigenvalues closer
    than the gap tolerance are merged (single linkage on the sorted list).
    ``diagonalizer`` has the eigenvectors as columns, ordered like
    ``eigenvalues``.
    """

    party: int
    eigenvalues: np.ndarray
    clusters: tuple
    diagonalizer: np.ndarray

    @property
    def multiplicities(self) -> tuple:
        return tuple(m for _, m in self.clusters)

    @property
    def n_distinct(self) -> int:
        return len(self.clusters)


@dataclass(frozen=True)
class CanonicalForm:
    """A local-unitary image ``state = apply_tuple(original, transform)``
    whose reduced matrices are all diagonal and descending."""

    state: PureState
    spectra: tuple
    transform: LocalUnitaryTuple

    @property
    def blocks(self) -> tuple:
        return tuple(s.multiplicities for s in self.spectra)


def _party(v: PureState, k: int) -> int:
    if not 0 <= k < v.n_parties:
        raise PartyOutOfRange(f"party {k} out of range for {v.n_parties} parties")
    return k


def reduced_matrix(v: PureState, k: int) -> np.ndarray:
    """Hermitian PSD ``d_k x d_k`` matrix ``C_k`` of ``v`` (trace = |v|^2).

    Parties are numbered from 0.
    """
    _party(v, k)
    c = kernels.partial_contraction(v.amplitudes, v.amplitudes, v.dims, k)
    return 0.5 * (c + c.conj().T)


def reduced_matrices(v: PureState) -> list:
    return [reduced_matrix(v, k) for k in range(v.n_parties)]


def cluster_eigenvalues(values: Sequence[float], eps_gap: float) -> tuple:
    """Group a descending sequence into ``(mean value, multiplicity)`` runs.

    A new cluster starts whenever consecutive values differ by more than
    ``eps_gap``.
    """
    values = list(values)
    if not values:
        return ()
    groups = [[values[0]]]
    for prev, x in zip(values, values[1:]):
        if prev - x > eps_gap:
            groups.append([x])
        else:
            groups[-1].append(x)
    return tuple((float(np.mean(g)), len(g)) for g in groups)


def spectral_data(v: PureState, k: int, eps_gap: float = EPS_GAP) -> SpectralData:
    """Eigendecomposition of ``C_k`` in descending order with clustering.

    ``eps_gap`` is relative to ``|v|^2``.
    """
    if eps_gap <= 0:
        raise ValueError("eps_gap must be positive")
    c = reduced_matrix(v, k)
    try:
        w, vecs = np.linalg.eigh(c)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(f"eigh failed for party {k}: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise EigensolverFailure(f"non-finite eigenvalues for party {k}")
    w = w[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    clusters = cluster_eigenvalues(w, eps_gap * v.norm ** 2)
    w.setflags(write=False)
    vecs.setflags(write=False)
    return SpectralData(k, w, clusters, vecs)


def all_spectral_data(v: PureState, eps_gap: float = EPS_GAP) -> tuple:
    return tuple(spectral_data(v, k, eps_gap) for k in range(v.n_parties))


def canonicalize(v: PureState, eps_gap: float = EPS_GAP) -> CanonicalForm:
    """Rotate every party into the eigenbasis of its ``C_k``.

    Eigenvector phases, and the basis inside degenerate clusters, are left
    as the eigensolver returns them; that freedom is exactly the
    block-diagonal stabilizer handled in :mod:`luequiv.stabilizer`.
    """
    spectra = all_spectral_data(v, eps_gap)
    transform = LocalUnitaryTuple(tuple(s.diagonalizer.T for s in spectra))
    return CanonicalForm(apply_tuple(v, transform), spectra, transform)


def normalized_spectra(v: PureState, eps_gap: float = EPS_GAP) -> list:
    n2 = v.norm ** 2
    return [np.asarray(s.eigenvalues) / n2 for s in all_spectral_data(v, eps_gap)]


def spectra_distance(v: PureState, w: PureState) -> list:
    """Per party ``max_l |p_l(v) - p_l(w)|`` for the normalized states."""
    if v.dims != w.dims:
        raise DimensionMismatch(f"dims {v.dims} vs {w.dims}")
    out = []
    for a, b in zip(normalized_spectra(v), normalized_spectra(w)):
        out.append(float(np.abs(a - b).max()))
    return out


def spectra_match(v: PureState, w: PureState, eps_spec: float = 1e-8) -> list:
    """Per-party booleans: do the ordered spectra agree within ``eps_spec``?"""
    return [dist <= eps_spec for dist in spectra_distance(v, w)]


def reduced_distance(v: PureState, w: PureState) -> list:
    """Per party ``max |C_k(v) - C_k(w)|`` on normalized states."""
    if v.dims != w.dims:
        raise DimensionMismatch(f"dims {v.dims} vs {w.dims}")
    vn, wn = v.normalized(), w.normalized()
    return [
        float(np.abs(reduced_matrix(vn, k) - reduced_matrix(wn, k)).max())
        for k in range(v.n_parties)
    ]


def locally_indistinguishable(v: PureState, w: PureState, eps: float = 1e-8) -> bool:
    """Do all one-party expectation values of ``v`` and ``w`` coincide?

    Expectations of every ``Y_1 x I x ... + ... + I x ... x Y_M`` agree iff
    all one-party reduced matrices of the normalized states agree.
    """
    return all(d <= eps for d in reduced_distance(v, w))


def moment_image(v: PureState) -> list:
    """Traceless parts ``C_k(v/|v|) - I/d_k`` of the normalized reduced matrices."""
    vn = v.normalized()
    return [reduced_matrix(vn, k) - np.eye(d) / d for k, d in enumerate(v.dims)]
