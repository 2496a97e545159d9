import math

import numpy as np
import pytest

from spinphoton import qstate as qs
from reference_states import double_reflection_state, rand_amp_pair, three_photon_readout_state

SQH = 1.0 / math.sqrt(2.0)


def random_state(rng, labels):
    v = rng.normal(size=2 ** len(labels)) + 1j * rng.normal(size=2 ** len(labels))
    return qs.PureState(tuple(labels), v / np.linalg.norm(v))


def random_unitary(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# --- basis conventions -------------------------------------------------------

def test_derived_photon_bases_orthonormal():
    for a, b in [(qs.KET_H, qs.KET_V), (qs.KET_P45, qs.KET_M45)]:
        assert abs(np.vdot(a, a) - 1) < 1e-15
        assert abs(np.vdot(b, b) - 1) < 1e-15
        assert abs(np.vdot(a, b)) < 1e-15


def test_circular_components_of_named_states():
    assert np.allclose(qs.KET_H, [SQH, SQH])
    assert np.allclose(qs.KET_V, [SQH, -SQH])
    assert np.allclose(qs.KET_P45, [SQH, 1j * SQH])
    assert np.allclose(qs.KET_M45, [SQH, -1j * SQH])


# --- tensor ------------------------------------------------------------------

def test_tensor_basis_vector():
    t = qs.tensor(qs.ket_state(qs.photon(1), "R"), qs.ket_state(qs.spin(1), "up"))
    assert np.array_equal(t.amplitudes, [1, 0, 0, 0])
    assert t.register == (qs.photon(1), qs.spin(1))


def test_tensor_linearity():
    t = qs.tensor(qs.ket_state(qs.photon(1), "H"), qs.ket_state(qs.spin(1), "up"))
    assert np.allclose(t.amplitudes, [SQH, 0, SQH, 0], atol=1e-15)


def test_tensor_hand_multiplied_kron():
    p1 = qs.qubit_state(qs.photon(1), 0.6, 0.8)
    p2 = qs.qubit_state(qs.photon(2), 0.8, 0.6)
    assert np.allclose(qs.tensor(p1, p2).amplitudes, [0.48, 0.36, 0.64, 0.48], atol=1e-15)


def test_tensor_duplicate_label_rejected():
    a = qs.ket_state(qs.photon(1), "R")
    with pytest.raises(ValueError, match="duplicate qubit"):
        qs.tensor(a, qs.ket_state(qs.photon(1), "L"))


def test_tensor_norm_tracking_multiplies():
    a = qs.PureState((qs.photon(1),), [1, 0], 0.5)
    b = qs.PureState((qs.photon(2),), [0, 1], 0.5)
    assert qs.tensor(a, b).norm_tracking == pytest.approx(0.25)


def test_register_cap():
    states = [qs.ket_state(qs.photon(i), "R") for i in range(9)]
    with pytest.raises(ValueError, match="register cap"):
        qs.tensor_all(states)


# --- apply_unitary -----------------------------------------------------------

HADAMARD = np.array([[1, 1], [1, -1]]) / math.sqrt(2.0)


def test_hadamard_on_up():
    out = qs.apply_unitary(qs.ket_state(qs.spin(1), "up"), [qs.spin(1)], HADAMARD)
    assert np.allclose(out.amplitudes, [SQH, SQH], atol=1e-15)


def test_hadamard_involution():
    rng = np.random.default_rng(3)
    st = random_state(rng, [qs.photon(1), qs.spin(1)])
    out = qs.apply_unitary(st, [qs.spin(1)], HADAMARD)
    out = qs.apply_unitary(out, [qs.spin(1)], HADAMARD)
    assert np.max(np.abs(out.amplitudes - st.amplitudes)) < 1e-12


def test_hadamard_maps_minus_superposition_to_down():
    st = qs.qubit_state(qs.spin(1), SQH, -SQH)
    out = qs.apply_unitary(st, [qs.spin(1)], HADAMARD)
    assert np.allclose(out.amplitudes, [0, 1], atol=1e-15)


def test_unitarity_preserved_on_random_states():
    rng = np.random.default_rng(11)
    labels = [qs.photon(1), qs.photon(2), qs.spin(1)]
    for _ in range(1000):
        st = random_state(rng, labels)
        u = random_unitary(rng, 2)
        out = qs.apply_unitary(st, [labels[int(rng.integers(3))]], u)
        assert abs(out.squared_norm() - 1.0) < 1e-12


def test_two_qubit_unitary_embedding():
    rng = np.random.default_rng(5)
    labels = [qs.photon(1), qs.photon(2), qs.spin(1)]
    st = random_state(rng, labels)
    u = random_unitary(rng, 4)
    out = qs.apply_unitary(st, [qs.photon(2), qs.spin(1)], u)
    full = np.kron(np.eye(2), u)
    assert np.max(np.abs(out.amplitudes - full @ st.amplitudes)) < 1e-12


def test_apply_unitary_rejects_non_unitary():
    with pytest.raises(ValueError, match="not unitary"):
        qs.apply_unitary(qs.ket_state(qs.spin(1), "up"), [qs.spin(1)],
                         np.array([[1, 0], [0, 2]]))


def test_apply_unitary_rejects_unknown_target():
    with pytest.raises(ValueError, match="not in register"):
        qs.apply_unitary(qs.ket_state(qs.spin(1), "up"), [qs.spin(2)], HADAMARD)


# --- apply_diagonal_pair -------------------------------------------------------

def test_diagonal_pair_coupled_component():
    st = qs.tensor(qs.ket_state(qs.photon(1), "L"), qs.ket_state(qs.spin(1), "up"))
    out = qs.apply_diagonal_pair(st, qs.photon(1), qs.spin(1), 1j, 1)
    assert np.allclose(out.amplitudes, [0, 0, 1j, 0], atol=1e-15)


def test_diagonal_pair_uncoupled_component_unchanged():
    st = qs.tensor(qs.ket_state(qs.photon(1), "R"), qs.ket_state(qs.spin(1), "up"))
    out = qs.apply_diagonal_pair(st, qs.photon(1), qs.spin(1), 1j, 1)
    assert np.array_equal(out.amplitudes, st.amplitudes)


def test_diagonal_pair_double_reflection_matches_reference():
    rng = np.random.default_rng(23)
    for _ in range(20):
        a1, b1 = rand_amp_pair(rng)
        a2, b2 = rand_amp_pair(rng)
        st = qs.tensor_all([
            qs.qubit_state(qs.photon(1), a1, b1),
            qs.qubit_state(qs.photon(2), a2, b2),
            qs.qubit_state(qs.spin(1), SQH, SQH),
        ])
        st = qs.apply_diagonal_pair(st, qs.photon(1), qs.spin(1), 1j, 1)
        st = qs.apply_diagonal_pair(st, qs.photon(2), qs.spin(1), 1j, 1)
        assert np.max(np.abs(st.amplitudes - double_reflection_state(a1, b1, a2, b2))) < 1e-12


def test_diagonal_pair_kind_check():
    st = qs.tensor(qs.ket_state(qs.photon(1), "R"), qs.ket_state(qs.spin(1), "up"))
    with pytest.raises(ValueError, match="not a photon"):
        qs.apply_diagonal_pair(st, qs.spin(1), qs.spin(1), 1j, 1)
    with pytest.raises(ValueError, match="not a spin"):
        qs.apply_diagonal_pair(st, qs.photon(1), qs.photon(1), 1j, 1)


def test_diagonal_pair_loss_updates_norm_tracking():
    st = qs.tensor(qs.ket_state(qs.photon(1), "H"), qs.ket_state(qs.spin(1), "up"))
    out = qs.apply_diagonal_pair(st, qs.photon(1), qs.spin(1), 0.8, 1.0)
    # |L,up> amplitude shrinks by 0.8: survival = 0.5 + 0.5 * 0.64
    assert out.norm_tracking == pytest.approx(0.82, abs=1e-12)
    assert out.squared_norm() == pytest.approx(0.82, abs=1e-12)


# --- measure -------------------------------------------------------------------

def test_measure_h_in_hv():
    outs = qs.measure(qs.ket_state(qs.photon(1), "H"), qs.photon(1), "HV")
    assert [o.label for o in outs] == ["H", "V"]
    assert outs[0].probability == pytest.approx(1.0, abs=1e-12)
    assert outs[1].probability == pytest.approx(0.0, abs=1e-12)


def test_measure_readout_photon_circular_uniform():
    st = qs.PureState(
        (qs.photon(1), qs.photon(2), qs.photon(3), qs.spin(1)),
        three_photon_readout_state(SQH, SQH, SQH, SQH),
    )
    outs = qs.measure(st, qs.photon(3), "45")
    assert outs[0].label == "+45" and outs[1].label == "-45"
    assert outs[0].probability == pytest.approx(0.5, abs=1e-12)
    assert outs[1].probability == pytest.approx(0.5, abs=1e-12)


def test_measure_spin_superposition():
    st = qs.qubit_state(qs.spin(1), SQH, SQH)
    outs = qs.measure(st, qs.spin(1), "updown")
    assert outs[0].probability == pytest.approx(0.5, abs=1e-12)
    assert outs[1].probability == pytest.approx(0.5, abs=1e-12)


def test_measure_completeness_on_unnormalized_states():
    rng = np.random.default_rng(17)
    labels = [qs.photon(1), qs.photon(2), qs.spin(1)]
    for _ in range(50):
        st = random_state(rng, labels)
        st = qs.apply_diagonal_pair(st, qs.photon(1), qs.spin(1), 0.7 + 0.2j, 0.95)
        for basis in ("RL", "HV", "45"):
            outs = qs.measure(st, qs.photon(2), basis)
            assert abs(sum(o.probability for o in outs) - st.squared_norm()) < 1e-12


def test_measure_post_state_norm_tracking_is_branch_probability():
    st = qs.tensor(qs.ket_state(qs.photon(1), "H"), qs.qubit_state(qs.spin(1), SQH, SQH))
    outs = qs.measure(st, qs.spin(1), "updown")
    for o in outs:
        assert o.post_state.norm_tracking == pytest.approx(o.probability, abs=1e-12)
        assert o.post_state.squared_norm() == pytest.approx(1.0, abs=1e-12)


def test_measure_basis_kind_mismatch():
    with pytest.raises(ValueError, match="unknown basis"):
        qs.measure(qs.ket_state(qs.spin(1), "up"), qs.spin(1), "HV")


# --- sampling --------------------------------------------------------------------

def _outcomes(probs):
    return [qs.ProjectiveOutcome(str(i), p, None) for i, p in enumerate(probs)]


def test_sample_single_branch():
    for seed in (0, 1, 42):
        assert qs.sample_outcome(_outcomes([1.0]), seed).label == "0"


def test_sample_degenerate_distribution():
    for seed in range(10):
        assert qs.sample_outcome(_outcomes([1.0, 0.0]), seed).label == "0"


def test_sample_identical_seed_identical_sequence():
    a = [qs.sample_outcome(_outcomes([0.3, 0.7]), np.random.default_rng(9)).label
         for _ in range(20)]
    rng = np.random.default_rng(9)
    b = [qs.sample_outcome(_outcomes([0.3, 0.7]), rng).label for _ in range(1)]
    assert a[0] == b[0]


def test_sample_law_of_large_numbers():
    rng = np.random.default_rng(101)
    outs = _outcomes([0.5, 0.5])
    n = 100_000
    hits = sum(qs.sample_outcome(outs, rng).label == "0" for _ in range(n))
    assert abs(hits / n - 0.5) < 0.01


def test_sample_empty_rejected():
    with pytest.raises(ValueError, match="no outcomes"):
        qs.sample_outcome([], 0)


def test_sample_unnormalized_rejected():
    with pytest.raises(ValueError, match="sum to 1"):
        qs.sample_outcome(_outcomes([0.5, 0.4]), 0)


# --- dephasing ---------------------------------------------------------------------

def bell_spins():
    return qs.PureState((qs.spin(1), qs.spin(2)),
                        np.array([1, 0, 0, 1]) / math.sqrt(2.0))


def test_dephase_zero_time_is_identity():
    rho = qs.to_density(bell_spins())
    out = qs.dephase_spin(rho, qs.spin(1), 0.0)
    assert np.array_equal(out.matrix, rho.matrix)


def test_dephase_long_time_kills_coherence():
    st = qs.qubit_state(qs.spin(1), SQH, SQH)
    out = qs.dephase_spin(qs.to_density(st), qs.spin(1), 1e6)
    assert np.allclose(out.matrix, np.diag([0.5, 0.5]), atol=1e-12)


def test_dephase_bell_fidelity_matches_closed_form():
    # both spins dephased for t/T2 each: F = (1 + exp(-2 t/T2)) / 2
    bell = bell_spins()
    for t in (1e-3, 0.1, 1.0):
        rho = qs.dephase_spin(qs.to_density(bell), qs.spin(1), t)
        rho = qs.dephase_spin(rho, qs.spin(2), t)
        expected = (1.0 + math.exp(-2.0 * t)) / 2.0
        assert qs.fidelity(bell, rho) == pytest.approx(expected, abs=1e-12)
    rho = qs.dephase_spin(qs.to_density(bell), qs.spin(1), 1e-3)
    rho = qs.dephase_spin(rho, qs.spin(2), 1e-3)
    assert qs.fidelity(bell, rho) >= 0.999


def test_dephase_preserves_trace_and_hermiticity():
    rng = np.random.default_rng(31)
    for _ in range(20):
        st = random_state(rng, [qs.spin(1), qs.photon(1)])
        rho = qs.dephase_spin(qs.to_density(st), qs.spin(1), float(rng.uniform(0, 3)))
        assert rho.trace() == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(rho.matrix - rho.matrix.conj().T)) < 1e-12


def test_dephase_rejects_negative_time_and_photons():
    rho = qs.to_density(bell_spins())
    with pytest.raises(ValueError, match="negative"):
        qs.dephase_spin(rho, qs.spin(1), -0.1)
    rho2 = qs.to_density(qs.ket_state(qs.photon(1), "H"))
    with pytest.raises(ValueError, match="not a spin"):
        qs.dephase_spin(rho2, qs.photon(1), 0.1)


# --- fidelity, partial trace, drop ----------------------------------------------

def test_fidelity_global_phase_blind():
    rng = np.random.default_rng(41)
    st = random_state(rng, [qs.photon(1), qs.spin(1)])
    for _ in range(20):
        theta = rng.uniform(0, 2 * math.pi)
        rotated = qs.PureState(st.register, np.exp(1j * theta) * st.amplitudes)
        assert qs.fidelity(st, rotated) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_symmetric_and_bounded():
    rng = np.random.default_rng(43)
    a = random_state(rng, [qs.spin(1)])
    b = random_state(rng, [qs.spin(1)])
    assert qs.fidelity(a, b) == pytest.approx(qs.fidelity(b, a), abs=1e-12)
    assert 0.0 <= qs.fidelity(a, b) <= 1.0


def test_fidelity_pure_density_consistent():
    rng = np.random.default_rng(47)
    a = random_state(rng, [qs.spin(1), qs.photon(1)])
    b = random_state(rng, [qs.spin(1), qs.photon(1)])
    assert qs.fidelity(a, qs.to_density(b)) == pytest.approx(qs.fidelity(a, b), abs=1e-12)


def test_partial_trace_of_bell_is_maximally_mixed():
    red = qs.partial_trace(bell_spins(), [qs.spin(1)])
    assert np.allclose(red.matrix, np.eye(2) / 2, atol=1e-12)
    assert red.register == (qs.spin(1),)


def test_partial_trace_empty_keep_rejected():
    with pytest.raises(ValueError, match="nonempty"):
        qs.partial_trace(bell_spins(), [])


def test_drop_product_qubit():
    st = qs.tensor(qs.ket_state(qs.photon(1), "+45"), qs.qubit_state(qs.spin(1), 0.6, 0.8))
    out = qs.drop_qubit(st, qs.photon(1))
    assert out.register == (qs.spin(1),)
    assert np.allclose(out.amplitudes, [0.6, 0.8], atol=1e-12)


def test_drop_entangled_qubit_rejected():
    with pytest.raises(ValueError, match="entangled"):
        qs.drop_qubit(bell_spins(), qs.spin(1))


def test_normalize_restores_unit_norm():
    st = qs.PureState((qs.spin(1),), [0.3, 0.4], 0.25)
    out = qs.normalize(st)
    assert out.squared_norm() == pytest.approx(1.0, abs=1e-12)
    assert out.norm_tracking == pytest.approx(0.25)


def test_trion_relabel_lives_in_gates():  # placement sanity for the public API
    from spinphoton import trion_emission_map  # noqa: F401
