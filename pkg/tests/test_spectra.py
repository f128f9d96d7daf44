import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from luequiv import (
    PartyOutOfRange,
    apply_tuple,
    basis_state,
    canonicalize,
    ghz_state,
    locally_indistinguishable,
    moment_image,
    random_haar_state,
    random_local_tuple,
    reduced_matrix,
    spectra_match,
    spectral_data,
    w_state,
)
from luequiv.spectra import cluster_eigenvalues, normalized_spectra
from luequiv.stabilizer import BlockStructure

from oracles import schmidt_coefficients

DIMS = st.sampled_from([(2, 2), (3, 2), (2, 2, 2), (2, 3, 4), (3, 3), (2, 2, 2, 2)])
SEEDS = st.integers(0, 2**31)


def reduced_matrix_loops(v, k):
    # literal (C_k)_{ij} = sum over the other indices of conj(C[..i..]) C[..j..]
    t = v.tensor()
    d = v.dims[k]
    out = np.zeros((d, d), complex)
    for idx in np.ndindex(*v.dims):
        if idx[k] != 0:
            continue
        for i in range(d):
            for j in range(d):
                a = list(idx)
                b = list(idx)
                a[k], b[k] = i, j
                out[i, j] += np.conj(t[tuple(a)]) * t[tuple(b)]
    return out


def test_reduced_matrix_matches_literal_sum():
    v = random_haar_state((2, 3, 2), 4)
    for k in range(3):
        np.testing.assert_allclose(reduced_matrix(v, k), reduced_matrix_loops(v, k), atol=1e-13)


def test_reduced_matrix_is_transpose_of_rdm():
    v = random_haar_state((3, 2), 8)
    m = v.tensor()
    rho_a = m @ m.conj().T
    np.testing.assert_allclose(reduced_matrix(v, 0), rho_a.T, atol=1e-13)


def test_ghz_reduced_matrices():
    for k in range(3):
        np.testing.assert_allclose(reduced_matrix(ghz_state((2, 2, 2)), k), np.eye(2) / 2, atol=1e-12)


def test_qutrit_reduced_matrices(psi, phi):
    want = np.diag([0.6, 0.3, 0.1])
    for v in (psi, phi):
        for k in range(3):
            np.testing.assert_allclose(reduced_matrix(v, k), want, atol=1e-12)


def test_product_and_w():
    np.testing.assert_allclose(reduced_matrix(basis_state((3, 2), (0, 0)), 0), np.diag([1, 0, 0]))
    for k in range(3):
        np.testing.assert_allclose(reduced_matrix(w_state((2, 2, 2)), k), np.diag([2 / 3, 1 / 3]),
                                   atol=1e-14)


def test_party_out_of_range():
    with pytest.raises(PartyOutOfRange):
        reduced_matrix(ghz_state((2, 2)), 2)


@settings(max_examples=40, deadline=None)
@given(DIMS, SEEDS)
def test_reduced_matrix_hermitian_psd_trace(dims, seed):
    v = random_haar_state(dims, seed)
    for k in range(len(dims)):
        c = reduced_matrix(v, k)
        assert np.abs(c - c.conj().T).max() <= 1e-12
        assert np.linalg.eigvalsh(c).min() >= -1e-10
        assert np.trace(c).real == pytest.approx(v.norm ** 2, rel=1e-12)


def test_spectral_data_clusters(phi):
    s = spectral_data(ghz_state((2, 2, 2)), 0, 1e-8)
    assert s.n_distinct == 1 and s.multiplicities == (2,)
    assert s.clusters[0][0] == pytest.approx(0.5, abs=1e-14)
    s = spectral_data(phi, 0)
    assert s.multiplicities == (1, 1, 1)
    np.testing.assert_allclose(s.eigenvalues, [0.6, 0.3, 0.1], atol=1e-14)


def test_cluster_near_degenerate():
    (val, m), = cluster_eigenvalues([0.5 + 1e-12, 0.5 - 1e-12], 1e-8)
    assert m == 2 and val == pytest.approx(0.5, abs=1e-11)
    assert [m for _, m in cluster_eigenvalues([0.5, 0.3, 0.3, 0.0], 1e-8)] == [1, 2, 1]


@settings(max_examples=40, deadline=None)
@given(DIMS, SEEDS)
def test_spectral_data_invariants(dims, seed):
    v = random_haar_state(dims, seed)
    for k in range(len(dims)):
        s = spectral_data(v, k)
        assert np.all(np.diff(s.eigenvalues) <= 0)
        assert s.eigenvalues.sum() == pytest.approx(v.norm ** 2, rel=1e-12)
        assert sum(s.multiplicities) == dims[k]
        u = s.diagonalizer
        assert np.abs(u.conj().T @ u - np.eye(dims[k])).max() <= 1e-10
        d = u.conj().T @ reduced_matrix(v, k) @ u
        np.testing.assert_allclose(d, np.diag(s.eigenvalues), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(DIMS, SEEDS)
def test_lu_invariance_of_spectra(dims, seed):
    v = random_haar_state(dims, seed)
    w = apply_tuple(v, random_local_tuple(dims, seed + 3))
    for a, b in zip(normalized_spectra(v), normalized_spectra(w)):
        assert np.abs(a - b).max() <= 1e-10
    assert all(spectra_match(v, w))


@settings(max_examples=40, deadline=None)
@given(DIMS, SEEDS)
def test_canonical_form_is_diagonal(dims, seed):
    v = apply_tuple(random_haar_state(dims, seed), random_local_tuple(dims, seed))
    cf = canonicalize(v)
    np.testing.assert_allclose(cf.state.amplitudes, apply_tuple(v, cf.transform).amplitudes)
    for k in range(len(dims)):
        c = reduced_matrix(cf.state, k)
        assert np.abs(c - np.diag(np.diag(c))).max() <= 1e-12
        assert np.all(np.diff(np.diag(c).real) <= 1e-14)
    for a, b in zip(normalized_spectra(v), normalized_spectra(cf.state)):
        assert np.abs(a - b).max() <= 1e-10


def test_canonicalize_already_canonical(phi):
    cf = canonicalize(phi)
    for m in cf.transform:
        # identity up to phases
        np.testing.assert_allclose(np.abs(m), np.eye(3), atol=1e-12)
    assert abs(np.vdot(cf.state.amplitudes, phi.amplitudes)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("d1,d2,seed", [(2, 2, 0), (3, 3, 1), (2, 4, 2), (4, 3, 3)])
def test_bipartite_canonical_form_is_schmidt(d1, d2, seed):
    v = random_haar_state((d1, d2), seed).normalized()
    s = schmidt_coefficients(v.amplitudes, d1, d2)
    a = canonicalize(v).state.amplitudes.reshape(d1, d2)
    r = min(d1, d2)
    np.testing.assert_allclose(np.abs(np.diag(a))[:r], s, atol=1e-10)
    off = a.copy()
    off[np.arange(r), np.arange(r)] = 0
    assert np.abs(off).max() <= 1e-10
    np.testing.assert_allclose(normalized_spectra(v)[0][:r], s ** 2, atol=1e-12)


def test_canonical_product_state():
    v = apply_tuple(basis_state((2, 3, 2), (0, 0, 0)), random_local_tuple((2, 3, 2), 9))
    cf = canonicalize(v)
    for k, d in enumerate((2, 3, 2)):
        want = np.zeros((d, d))
        want[0, 0] = 1
        np.testing.assert_allclose(reduced_matrix(cf.state, k), want, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(2, 2, 2), (2, 3), (2, 2, 2, 2)]), SEEDS,
       st.sampled_from(["haar", "ghz", "w"]))
def test_canonical_idempotent(dims, seed, kind):
    base = {"haar": random_haar_state(dims, seed), "ghz": ghz_state(dims), "w": w_state(dims)}[kind]
    v = apply_tuple(base, random_local_tuple(dims, seed))
    c1 = canonicalize(v)
    c2 = canonicalize(c1.state)
    for a, b in zip(normalized_spectra(c1.state), normalized_spectra(c2.state)):
        assert np.abs(a - b).max() <= 1e-10
    assert BlockStructure(c1.blocks).respects(c2.transform, tol=1e-6)


def test_spectra_match_examples(psi, phi):
    assert spectra_match(psi, phi) == [True, True, True]
    assert spectra_match(ghz_state((2, 2, 2)), basis_state((2, 2, 2), (0, 0, 0))) == [False] * 3


def test_locally_indistinguishable_examples(psi, phi):
    assert locally_indistinguishable(psi, phi)
    assert not locally_indistinguishable(ghz_state((2, 2, 2)), basis_state((2, 2, 2), (0, 0, 0)))
    v = random_haar_state((2, 3), 1)
    assert locally_indistinguishable(v, v.scaled(np.exp(0.8j) * 4))


def test_moment_image_examples(phi):
    for y in moment_image(ghz_state((2, 2, 2))):
        np.testing.assert_allclose(y, 0, atol=1e-15)
    for y in moment_image(basis_state((2, 2, 2), (0, 0, 0))):
        np.testing.assert_allclose(y, np.diag([0.5, -0.5]), atol=1e-15)
    for y in moment_image(phi):
        np.testing.assert_allclose(y, np.diag([0.6, 0.3, 0.1]) - np.eye(3) / 3, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(DIMS, SEEDS)
def test_moment_image_traceless_and_equivariant(dims, seed):
    v = random_haar_state(dims, seed)
    u = random_local_tuple(dims, seed + 1)
    ys, zs = moment_image(v), moment_image(apply_tuple(v, u))
    for k in range(len(dims)):
        assert abs(np.trace(ys[k])) <= 1e-12
        w = u[k].conj()
        np.testing.assert_allclose(zs[k], w @ ys[k] @ w.conj().T, atol=1e-10)
