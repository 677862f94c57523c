"""
Dense state-vector simulator for few-qubit systems.

Basis ordering: qubit 0 is the most significant bit of the amplitude index. For a
Bell pair qubit 0 is the home qubit and qubit 1 the travel qubit, so
index = (home bit << 1) | travel bit.
"""

import logging
from typing import Any, Dict, Tuple, Union

import numpy as np

from ..models.quantum import (
    BELL_ORDER,
    BellOutcome,
    GateMatrix,
    MeasurementBasis,
    PureState,
    TOLERANCE,
)
from .random_source import RandomSource

logger = logging.getLogger(__name__)

HOME_QUBIT = 0
TRAVEL_QUBIT = 1

_SQRT_HALF = 1.0 / np.sqrt(2.0)

IDENTITY = GateMatrix(entries=np.eye(2))
PAULI_X = GateMatrix(entries=[[0, 1], [1, 0]])
PAULI_Y = GateMatrix(entries=[[0, -1j], [1j, 0]])
PAULI_Z = GateMatrix(entries=[[1, 0], [0, -1]])
HADAMARD = GateMatrix(entries=np.array([[1, 1], [1, -1]]) * _SQRT_HALF)

# Rows are Φ⁺, Φ⁻, Ψ⁺, Ψ⁻ in the computational basis (|00⟩, |01⟩, |10⟩, |11⟩).
BELL_VECTORS = np.array(
    [
        [1, 0, 0, 1],
        [1, 0, 0, -1],
        [0, 1, 1, 0],
        [0, 1, -1, 0],
    ],
    dtype=np.complex128,
) * _SQRT_HALF

GateLike = Union[GateMatrix, Any]


def _as_gate(gate: GateLike) -> GateMatrix:
    if isinstance(gate, GateMatrix):
        return gate
    return GateMatrix(entries=gate)


def _require_two_qubits(state: PureState) -> None:
    if state.num_qubits != 2:
        raise ValueError(f"Bell-basis operations need 2 qubits, got {state.num_qubits}")


def basis_state(bits: str) -> PureState:
    """Computational basis state from a bitstring such as ``"01"``."""
    if not bits or any(b not in "01" for b in bits):
        raise ValueError(f"Invalid basis bitstring: {bits!r}")
    vector = np.zeros(2 ** len(bits), dtype=np.complex128)
    vector[int(bits, 2)] = 1.0
    return PureState(num_qubits=len(bits), amplitudes=vector)


def bell_state(outcome: BellOutcome) -> PureState:
    """One of the four Bell states."""
    return PureState(num_qubits=2, amplitudes=BELL_VECTORS[BELL_ORDER.index(outcome)])


def bell_phi_plus() -> PureState:
    """|Φ⁺⟩ = 1/√2 (|00⟩ + |11⟩)."""
    return bell_state(BellOutcome.PHI_PLUS)


def phase_pair_state(phase: float) -> PureState:
    """1/√2 (|00⟩ + e^{iφ}|11⟩)."""
    return PureState(
        num_qubits=2,
        amplitudes=np.array([1, 0, 0, np.exp(1j * phase)], dtype=np.complex128) * _SQRT_HALF,
    )


def phase_gate(a: int) -> GateMatrix:
    """Veto gate P^(a) = diag(1, e^{iπ/2^{a−1}}).

    Args:
        a: Pair index, a ≥ 1

    Raises:
        ValueError: If a < 1
    """
    if isinstance(a, bool) or not isinstance(a, (int, np.integer)):
        raise TypeError(f"Pair index must be int, got {type(a).__name__}")
    if a < 1:
        raise ValueError(f"Pair index must be ≥ 1 (got {a})")
    return GateMatrix(entries=np.diag([1.0, np.exp(1j * np.pi / 2 ** (int(a) - 1))]))


def apply_gate(state: PureState, gate: GateLike, target: int) -> PureState:
    """Apply a single-qubit gate to ``target`` (I ⊗ … ⊗ G ⊗ … ⊗ I).

    Args:
        state: Joint state
        gate: 2×2 unitary (GateMatrix or array-like, validated)
        target: Qubit index, 0 ≤ target < num_qubits

    Returns:
        New state; the input is never modified

    Raises:
        ValueError: If the target is out of range or the gate is not a 2×2 unitary
    """
    matrix = _as_gate(gate)
    if matrix.dim != 2:
        raise ValueError(f"Single-qubit gate must be 2×2, got {matrix.dim}×{matrix.dim}")
    if not 0 <= target < state.num_qubits:
        raise ValueError(f"Target qubit {target} out of range for {state.num_qubits} qubits")

    tensor = state.amplitudes.reshape((2,) * state.num_qubits)
    moved = np.tensordot(matrix.entries, tensor, axes=([1], [target]))
    result = np.moveaxis(moved, 0, target).reshape(state.dimension)
    return PureState(num_qubits=state.num_qubits, amplitudes=result)


def gates_commute(first: GateLike, second: GateLike) -> bool:
    """True iff the two gates' products agree in both orders."""
    g1, g2 = _as_gate(first), _as_gate(second)
    return (g1 @ g2).allclose(g2 @ g1)


def bell_decompose(state: PureState) -> np.ndarray:
    """Coefficients of a 2-qubit state on (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻).

    Raises:
        ValueError: If the state does not have exactly 2 qubits
    """
    _require_two_qubits(state)
    return BELL_VECTORS.conj() @ state.amplitudes


def bell_reconstruct(coefficients: Any) -> PureState:
    """Σ c_i |Bell_i⟩ for coefficients in Bell order."""
    coefficients = np.asarray(coefficients, dtype=np.complex128)
    return PureState(num_qubits=2, amplitudes=BELL_VECTORS.T @ coefficients)


def bell_probabilities(state: PureState) -> np.ndarray:
    """Outcome probabilities in Bell order."""
    probabilities = np.abs(bell_decompose(state)) ** 2
    return probabilities / probabilities.sum()


def _bell_cdf(state: PureState) -> np.ndarray:
    return np.cumsum(bell_probabilities(state))


def bell_measure(state: PureState, rng: RandomSource) -> BellOutcome:
    """Projective Bell-basis measurement by inverse-CDF sampling (one uniform draw)."""
    index = int(np.searchsorted(_bell_cdf(state), rng.uniform(), side="right"))
    return BELL_ORDER[min(index, len(BELL_ORDER) - 1)]


def sample_bell_outcomes(
    state: PureState,
    rng: RandomSource,
    shots: int
) -> Dict[BellOutcome, int]:
    """Counts of ``shots`` independent Bell measurements of identical copies."""
    if shots < 1:
        raise ValueError(f"shots must be ≥ 1 (got {shots})")
    indices = np.searchsorted(_bell_cdf(state), rng.uniforms(shots), side="right")
    counts = np.bincount(np.minimum(indices, len(BELL_ORDER) - 1), minlength=len(BELL_ORDER))
    return {outcome: int(counts[i]) for i, outcome in enumerate(BELL_ORDER)}


def fidelity(s1: PureState, s2: PureState) -> float:
    """|⟨s1|s2⟩|².

    Raises:
        ValueError: On qubit-count mismatch
    """
    if s1.num_qubits != s2.num_qubits:
        raise ValueError(
            f"Cannot compare {s1.num_qubits}-qubit and {s2.num_qubits}-qubit states"
        )
    return float(min(1.0, abs(np.vdot(s1.amplitudes, s2.amplitudes)) ** 2))


def measure_qubit(
    state: PureState,
    target: int,
    basis: MeasurementBasis,
    rng: RandomSource
) -> Tuple[int, PureState]:
    """Projective measurement of one qubit; the post-measurement state is renormalized.

    Returns:
        Tuple of (outcome bit, post-measurement state). In the Hadamard basis bit 0
        means |+⟩ and bit 1 means |−⟩.
    """
    if not 0 <= target < state.num_qubits:
        raise ValueError(f"Target qubit {target} out of range for {state.num_qubits} qubits")

    rotated = apply_gate(state, HADAMARD, target) if basis == MeasurementBasis.HADAMARD else state
    shift = state.num_qubits - 1 - target
    target_bits = (np.arange(state.dimension) >> shift) & 1

    p_one = float(np.sum(rotated.probabilities[target_bits == 1]))
    bit = int(rng.uniform() < p_one)

    projected = np.where(target_bits == bit, rotated.amplitudes, 0.0)
    projected = projected / np.linalg.norm(projected)
    collapsed = PureState(num_qubits=state.num_qubits, amplitudes=projected)

    if basis == MeasurementBasis.HADAMARD:
        collapsed = apply_gate(collapsed, HADAMARD, target)
    logger.debug("Measured qubit %d in %s basis: %d", target, basis.value, bit)
    return bit, collapsed


__all__ = [
    "BELL_VECTORS",
    "HADAMARD",
    "HOME_QUBIT",
    "IDENTITY",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "TOLERANCE",
    "TRAVEL_QUBIT",
    "apply_gate",
    "basis_state",
    "bell_decompose",
    "bell_measure",
    "bell_phi_plus",
    "bell_probabilities",
    "bell_reconstruct",
    "bell_state",
    "fidelity",
    "gates_commute",
    "measure_qubit",
    "phase_gate",
    "phase_pair_state",
    "sample_bell_outcomes",
]
