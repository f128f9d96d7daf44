import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from luequiv import (
    BlockStructure,
    ConfigInvalid,
    NonUnitaryWitness,
    NotGeneric,
    OptimizerConfig,
    apply_tuple,
    block_overlap_maximize,
    block_structure,
    canonicalize,
    generic_phase_match,
    ghz_state,
    identity_tuple,
    is_generic,
    make_state,
    random_haar_state,
    random_local_tuple,
    verify_witness,
)
from luequiv.spectra import all_spectral_data
from luequiv.stabilizer import (
    MATCHED,
    NUMERICALLY_UNMATCHED,
    RULED_OUT,
    diagonal_phase_tuple,
    solve_phase_congruence,
    sweeps_monotone,
)

X = np.array([[0, 1], [1, 0]], complex)


def bell(flipped=False):
    return make_state((2, 2), [0, 1, 1, 0] if flipped else [1, 0, 0, 1]).normalized()


def test_block_structure_examples(phi):
    assert block_structure(all_spectral_data(ghz_state((2, 2, 2)))).sizes == ((2,),) * 3
    assert block_structure(all_spectral_data(phi)).sizes == ((1, 1, 1),) * 3
    prod = make_state((2, 2, 2), np.eye(8)[0])
    assert block_structure(all_spectral_data(prod)).sizes == ((1, 1),) * 3


def test_is_generic():
    assert is_generic(BlockStructure(((1, 1, 1),) * 3))
    assert not is_generic(BlockStructure(((2,),) * 3))
    assert not is_generic(BlockStructure(((1, 1), (2,))))


def test_stabilizer_dim_formula():
    assert BlockStructure(((2,),) * 3).stabilizer_dim() == 9
    assert BlockStructure(((1, 1, 1),) * 3).stabilizer_dim() == 6
    assert BlockStructure(((1,) * 4,) * 5).stabilizer_dim() == 5 * 3


def test_phase_match_rules_out_psi_phi(psi, phi):
    res = generic_phase_match(canonicalize(psi), canonicalize(phi))
    assert res.status == RULED_OUT
    assert "supports differ" in res.detail
    assert res.witness is None


def test_phase_match_recovers_phases(phi):
    # |Phi'> = sqrt2 a e^{i p1}|000> + a e^{i p2}|111> + b e^{i p3}|222>
    p = np.array([0.3, 1.1, -0.7])
    amps = phi.amplitudes.copy()
    for i in range(3):
        amps[np.ravel_multi_index((i, i, i), (3, 3, 3))] *= np.exp(1j * p[i])
    phi2 = make_state(phi.dims, amps)
    res = generic_phase_match(phi2, phi, blocks=BlockStructure(((1, 1, 1),) * 3))
    assert res.status == MATCHED
    assert verify_witness(phi2, phi, res.witness, 1e-12)
    got = np.angle(np.prod([np.diag(m) for m in res.witness], axis=0))
    # up to a global phase
    np.testing.assert_allclose(np.exp(1j * (got - got[0])), np.exp(1j * (p - p[0])), atol=1e-12)


def test_phase_match_identity(phi):
    res = generic_phase_match(phi, phi, blocks=BlockStructure(((1, 1, 1),) * 3))
    assert res.status == MATCHED
    for m in res.witness:
        np.testing.assert_allclose(m, np.eye(3), atol=1e-14)


def test_phase_match_refuses_degenerate():
    g = canonicalize(ghz_state((2, 2, 2)))
    with pytest.raises(NotGeneric):
        generic_phase_match(g, g)


def test_phase_match_detects_modulus_mismatch():
    a = make_state((2, 2), [0.8, 0, 0, 0.6])
    b = make_state((2, 2), [0.6, 0, 0, 0.8])
    res = generic_phase_match(a, b, blocks=BlockStructure(((1, 1), (1, 1))))
    assert res.status == RULED_OUT and "moduli" in res.detail


def test_phase_system_inconsistent_mod_2pi():
    # two qubits, amplitudes on all four basis states: the relative phase
    # arg a00 - arg a01 - arg a10 + arg a11 is a local-phase invariant
    a = make_state((2, 2), [1, 1, 1, 1])
    b = make_state((2, 2), [1, 1, 1, -1])
    res = generic_phase_match(a, b, blocks=BlockStructure(((1, 1), (1, 1))))
    assert res.status == RULED_OUT and "inconsistent" in res.detail


def test_congruence_needs_integer_elimination():
    # 2 x = 1 (mod 2pi) and x = 0.5 + pi (mod 2pi) are consistent; real
    # elimination would divide the first congruence by two and miss this
    A = [[2], [1]]
    rhs = [1.0, 0.5 + np.pi]
    x = solve_phase_congruence(A, rhs)
    res = (np.array(A) @ x - rhs + np.pi) % (2 * np.pi) - np.pi
    assert np.abs(res).max() <= 1e-12


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(2, 2, 2), (2, 3, 4), (3, 3, 2)]), st.integers(0, 2**31),
       st.floats(-10, 10))
def test_phase_match_complete_on_generic(dims, seed, shift):
    a = canonicalize(random_haar_state(dims, seed))
    rng = np.random.default_rng(seed)
    phases = [rng.uniform(-np.pi, np.pi, d) for d in dims]
    b = apply_tuple(a.state, diagonal_phase_tuple(phases))
    res = generic_phase_match(a, b)
    assert res.status == MATCHED
    assert verify_witness(a.state, b, res.witness, 1e-10)
    # gauge: phi_1 -> phi_1 + c together with theta -> theta - c changes nothing
    phases[0] = phases[0] + shift
    b2 = apply_tuple(a.state, diagonal_phase_tuple(phases)).scaled(np.exp(-1j * shift))
    assert generic_phase_match(a, b2).status == MATCHED


def test_block_search_ghz_rotated():
    g = ghz_state((2, 2, 2))
    for seed in range(5):
        r = apply_tuple(g, random_local_tuple((2, 2, 2), seed))
        ca, cb = canonicalize(g), canonicalize(r)
        res = block_overlap_maximize(ca, cb, BlockStructure(ca.blocks), OptimizerConfig(seed=seed))
        assert res.status == MATCHED and res.overlap >= 1 - 1e-7
        assert verify_witness(ca.state, cb.state, res.witness, 1e-6)
        assert sweeps_monotone(res.history)


def test_block_search_bell_flip():
    res = block_overlap_maximize(bell(), bell(True), BlockStructure(((2,), (2,))))
    assert res.status == MATCHED
    assert verify_witness(bell(), bell(True), res.witness, 1e-6)
    assert verify_witness(bell(), bell(True), [np.eye(2), X], 1e-12)


def test_block_search_identity_first_sweep():
    v = canonicalize(random_haar_state((2, 3), 1))
    res = block_overlap_maximize(v, v, BlockStructure(v.blocks))
    assert res.status == MATCHED and res.best_restart == 0
    assert res.overlap == pytest.approx(1.0, abs=1e-14)
    assert len(res.history) == 1 and len(res.history[0]) <= 2


def test_block_search_unmatched_is_not_a_proof():
    a, b = random_haar_state((2, 2), 1), random_haar_state((2, 2), 2)
    res = block_overlap_maximize(a, b, BlockStructure(((2,), (2,))), OptimizerConfig(restarts=3))
    assert res.status == NUMERICALLY_UNMATCHED
    assert "not a proof" in res.detail
    assert sweeps_monotone(res.history)


def test_block_search_respects_blocks():
    a = canonicalize(apply_tuple(ghz_state((2, 2, 2)), random_local_tuple((2, 2, 2), 3)))
    blocks = BlockStructure(((1, 1), (2,), (2,)))
    res = block_overlap_maximize(a, a.state, blocks, OptimizerConfig(restarts=4))
    assert blocks.respects(res.witness)


def test_block_search_deterministic():
    a = canonicalize(random_haar_state((2, 2, 2), 5))
    b = apply_tuple(a.state, random_local_tuple((2, 2, 2), 6))
    blocks = BlockStructure(((2,),) * 3)
    cfg = OptimizerConfig(restarts=5, seed=11, stop_at_match=False)
    r1 = block_overlap_maximize(a, b, blocks, cfg)
    r2 = block_overlap_maximize(a, b, blocks, cfg)
    assert r1.history == r2.history and r1.best_restart == r2.best_restart


@pytest.mark.parametrize("kw", [{"restarts": 0}, {"max_sweeps": 0}, {"eps_opt": 2.0}, {"conv": 0}])
def test_config_invalid(kw):
    with pytest.raises(ConfigInvalid):
        block_overlap_maximize(bell(), bell(), BlockStructure(((2,), (2,))), OptimizerConfig(**kw))


def test_verify_witness_examples(psi, phi):
    g = ghz_state((2, 2, 2))
    assert verify_witness(g, g, identity_tuple(g.dims))
    assert verify_witness(bell(), bell(True), [np.eye(2), X])
    rng = np.random.default_rng(0)
    for _ in range(10):
        t = diagonal_phase_tuple([rng.uniform(-3, 3, 3) for _ in range(3)])
        assert not verify_witness(psi, phi, t)
    with pytest.raises(NonUnitaryWitness):
        verify_witness(g, g, [np.eye(2) * 2] * 3)
    assert not verify_witness(bell(), bell(True), [np.eye(2), X], blocks=BlockStructure(((1, 1),) * 2))
