"""
Tests for the few-qubit state-vector core.

Covers:
- Bell basis construction, decomposition and reconstruction
- Veto phase gates and single-qubit gate application
- Bell measurement sampling and single-qubit projective measurement
- Seeded random streams and integer helpers
"""

import math

import numpy as np
import pytest

from bellveto.models.quantum import BELL_ORDER, BellOutcome, GateMatrix, MeasurementBasis, PureState
from bellveto.utils.bit_math import ceil_log2, floor_log2, lowest_set_bit, max_iterations
from bellveto.utils.quantum_core import (
    HADAMARD,
    PAULI_Z,
    TRAVEL_QUBIT,
    apply_gate,
    basis_state,
    bell_decompose,
    bell_measure,
    bell_phi_plus,
    bell_probabilities,
    bell_reconstruct,
    bell_state,
    fidelity,
    gates_commute,
    measure_qubit,
    phase_gate,
    phase_pair_state,
    sample_bell_outcomes,
)
from bellveto.utils.random_source import RandomSource


class TestStates:

    def test_phi_plus_amplitudes(self):
        s = 1 / math.sqrt(2)
        np.testing.assert_allclose(bell_phi_plus().amplitudes, [s, 0, 0, s], atol=1e-15)

    def test_unnormalized_state_rejected(self):
        with pytest.raises(ValueError):
            PureState(num_qubits=2, amplitudes=[1, 0, 0, 1])

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            PureState(num_qubits=2, amplitudes=[1, 0])

    def test_amplitudes_are_read_only(self):
        state = bell_phi_plus()
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0

    def test_basis_state_index(self):
        np.testing.assert_allclose(basis_state("10").amplitudes, [0, 0, 1, 0])

    def test_invalid_basis_bitstring(self):
        with pytest.raises(ValueError):
            basis_state("012")


class TestBellDecomposition:

    @pytest.mark.parametrize("outcome", BELL_ORDER)
    def test_bell_states_are_basis_vectors(self, outcome):
        coefficients = bell_decompose(bell_state(outcome))
        expected = np.zeros(4)
        expected[BELL_ORDER.index(outcome)] = 1.0
        np.testing.assert_allclose(np.abs(coefficients), expected, atol=1e-12)

    def test_reconstruct_inverts_decompose(self):
        state = phase_pair_state(0.7)
        rebuilt = bell_reconstruct(bell_decompose(state))
        np.testing.assert_allclose(rebuilt.amplitudes, state.amplitudes, atol=1e-12)

    def test_phase_pair_probabilities(self):
        # 1/√2(|00⟩ + e^{iφ}|11⟩) → P(Φ⁻) = sin²(φ/2)
        phi = math.pi / 3
        probabilities = bell_probabilities(phase_pair_state(phi))
        np.testing.assert_allclose(
            probabilities, [math.cos(phi / 2) ** 2, math.sin(phi / 2) ** 2, 0, 0], atol=1e-12
        )

    def test_three_qubit_state_rejected(self):
        with pytest.raises(ValueError):
            bell_decompose(basis_state("000"))


class TestPhaseGates:

    def test_first_gate_is_pauli_z(self):
        assert phase_gate(1).allclose(PAULI_Z)

    def test_second_gate_is_s(self):
        np.testing.assert_allclose(phase_gate(2).entries, np.diag([1, 1j]), atol=1e-15)

    def test_invalid_index(self):
        with pytest.raises(ValueError):
            phase_gate(0)

    def test_non_integer_index(self):
        with pytest.raises(TypeError):
            phase_gate(1.5)

    def test_phase_gates_commute(self):
        assert gates_commute(phase_gate(1), phase_gate(3))

    def test_hadamard_and_z_do_not_commute(self):
        assert not gates_commute(HADAMARD, PAULI_Z)

    def test_veto_on_travel_qubit_gives_phi_minus(self):
        state = apply_gate(bell_phi_plus(), phase_gate(1), TRAVEL_QUBIT)
        assert fidelity(state, bell_state(BellOutcome.PHI_MINUS)) == pytest.approx(1.0, abs=1e-12)

    def test_gate_on_either_qubit_of_phi_plus_agrees(self):
        # Diagonal phases act identically on home and travel halves of Φ⁺.
        gate = phase_gate(3)
        home = apply_gate(bell_phi_plus(), gate, 0)
        travel = apply_gate(bell_phi_plus(), gate, 1)
        np.testing.assert_allclose(home.amplitudes, travel.amplitudes, atol=1e-12)

    def test_target_out_of_range(self):
        with pytest.raises(ValueError):
            apply_gate(bell_phi_plus(), PAULI_Z, 2)

    def test_non_unitary_gate_rejected(self):
        with pytest.raises(ValueError):
            GateMatrix(entries=[[1, 1], [0, 1]])


class TestMeasurement:

    def test_deterministic_bell_measurement(self):
        rng = RandomSource(3)
        state = bell_state(BellOutcome.PSI_MINUS)
        assert all(bell_measure(state, rng) == BellOutcome.PSI_MINUS for _ in range(100))

    def test_sampled_frequencies(self):
        counts = sample_bell_outcomes(phase_pair_state(math.pi / 2), RandomSource(11), 100_000)
        frequency = counts[BellOutcome.PHI_MINUS] / 100_000
        assert frequency == pytest.approx(0.5, abs=4 * math.sqrt(0.25 / 100_000))
        assert counts[BellOutcome.PSI_PLUS] == 0

    def test_shots_must_be_positive(self):
        with pytest.raises(ValueError):
            sample_bell_outcomes(bell_phi_plus(), RandomSource(1), 0)

    def test_computational_measurement_collapses_pair(self):
        rng = RandomSource(5)
        for _ in range(50):
            bit, collapsed = measure_qubit(bell_phi_plus(), TRAVEL_QUBIT, MeasurementBasis.COMPUTATIONAL, rng)
            expected = basis_state("11" if bit else "00")
            assert fidelity(collapsed, expected) == pytest.approx(1.0, abs=1e-12)

    def test_hadamard_measurement_of_plus_is_certain(self):
        plus = apply_gate(basis_state("0"), HADAMARD, 0)
        rng = RandomSource(9)
        for _ in range(20):
            bit, collapsed = measure_qubit(plus, 0, MeasurementBasis.HADAMARD, rng)
            assert bit == 0
            assert fidelity(collapsed, plus) == pytest.approx(1.0, abs=1e-12)

    def test_fidelity_qubit_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(basis_state("0"), bell_phi_plus())


class TestRandomSource:

    def test_same_seed_same_stream(self):
        a, b = RandomSource(42), RandomSource(42)
        np.testing.assert_array_equal(a.uniforms(10), b.uniforms(10))

    def test_derived_streams_differ(self):
        a, b = RandomSource.derive(42, 0), RandomSource.derive(42, 1)
        assert not np.array_equal(a.uniforms(10), b.uniforms(10))

    def test_bernoulli_zero_draws_nothing(self):
        a, b = RandomSource(1), RandomSource(1)
        assert a.bernoulli(0.0) is False
        assert a.uniform() == b.uniform()

    def test_choose_indices_distinct(self):
        chosen = RandomSource(2).choose_indices(10, 4)
        assert len(set(chosen.tolist())) == 4


class TestBitMath:

    @pytest.mark.parametrize("n,floor,ceil", [(1, 0, 0), (2, 1, 1), (3, 1, 2), (8, 3, 3), (9, 3, 4)])
    def test_logs(self, n, floor, ceil):
        assert floor_log2(n) == floor
        assert ceil_log2(n) == ceil

    def test_lowest_set_bit(self):
        assert lowest_set_bit(1) == 1
        assert lowest_set_bit(12) == 3

    def test_max_iterations(self):
        assert max_iterations(8) == 4
        assert max_iterations(5) == 4

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            floor_log2(0)
