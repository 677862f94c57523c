"""Insecure-hop model: noise, loss, intercept-resend attack and decoy checks."""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..models.channel import (
    AdversaryKind,
    ChannelConfig,
    DecoyConfig,
    HopReport,
    NoiseKind,
    NoiseModel,
)
from ..models.quantum import MeasurementBasis, PureState
from ..utils.quantum_core import PAULI_X, PAULI_Y, PAULI_Z, apply_gate, measure_qubit
from ..utils.random_source import RandomSource

logger = logging.getLogger(__name__)

_DEPOLARIZING_PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)
_BASES = (MeasurementBasis.COMPUTATIONAL, MeasurementBasis.HADAMARD)


def apply_noise(
    state: PureState,
    travel_qubit: int,
    noise: NoiseModel,
    rng: RandomSource
) -> PureState:
    """Sample one Pauli error realization of the hop noise on the travel qubit."""
    if noise.is_noise_free:
        return state
    if not rng.bernoulli(noise.p):
        return state
    if noise.kind == NoiseKind.DEPHASING:
        return apply_gate(state, PAULI_Z, travel_qubit)
    pauli = _DEPOLARIZING_PAULIS[rng.integer(3)]
    return apply_gate(state, pauli, travel_qubit)


def intercept_resend(
    state: PureState,
    travel_qubit: int,
    rng: RandomSource
) -> PureState:
    """Measure the travel qubit in a random basis and forward the observed eigenstate."""
    basis = _BASES[rng.integer(2)]
    bit, collapsed = measure_qubit(state, travel_qubit, basis, rng)
    logger.debug("Intercept-resend on travel qubit: basis=%s bit=%d", basis.value, bit)
    return collapsed


def transmit(
    joint_state: PureState,
    travel_qubit: int,
    config: ChannelConfig,
    rng: RandomSource
) -> Tuple[PureState, bool]:
    """Carry the travel qubit of ``joint_state`` across one hop.

    Loss is drawn first; a lost qubit returns the input state with ``lost=True``.
    Otherwise the noise model is applied, then the adversary (if any).

    Args:
        joint_state: State of the Bell pair
        travel_qubit: Index of the travelling qubit
        config: Channel configuration
        rng: Run-local random source

    Returns:
        Tuple of (state after the hop, qubit_lost)
    """
    if not 0 <= travel_qubit < joint_state.num_qubits:
        raise ValueError(
            f"Travel qubit {travel_qubit} out of range for {joint_state.num_qubits} qubits"
        )
    if config.is_noise_free:
        return joint_state, False

    if rng.bernoulli(config.loss_probability):
        return joint_state, True

    state = apply_noise(joint_state, travel_qubit, config.noise, rng)
    if config.adversary == AdversaryKind.INTERCEPT_RESEND:
        state = intercept_resend(state, travel_qubit, rng)
    return state, False


def _decoy_flip_probability(noise: NoiseModel, basis: np.ndarray) -> np.ndarray:
    """Per-decoy flip probability of a state prepared in ``basis`` (0=Z, 1=X)."""
    if noise.is_noise_free:
        return np.zeros(basis.shape)
    if noise.kind == NoiseKind.DEPHASING:
        # Z leaves computational states alone and flips |±⟩.
        return np.where(basis == 1, noise.p, 0.0)
    return np.full(basis.shape, 2.0 * noise.p / 3.0)


def decoy_round(
    hop: int,
    config: DecoyConfig,
    adversary: AdversaryKind,
    rng: RandomSource,
    noise: Optional[NoiseModel] = None,
    pair_index: Optional[int] = None
) -> HopReport:
    """Send ``delta1`` BB84 decoys over one hop and count disturbed ones.

    The receiving party measures every decoy in its preparation basis once the
    sender announces it. An intercept-resend attacker measures each decoy in a
    random basis and resends the observed eigenstate.

    Args:
        hop: Hop index (0..n)
        config: Decoy parameters
        adversary: Attacker on this hop
        rng: Run-local random source
        noise: Hop noise model (decoys share the channel with the travel qubit)
        pair_index: Pair whose travel qubit the decoys accompany

    Returns:
        HopReport with decoys_sent and decoy_errors
    """
    noise = noise or NoiseModel()
    count = config.delta1
    if count == 0:
        return HopReport(hop_index=hop, pair_index=pair_index)

    prep_basis = rng.bits(count)
    prep_bit = rng.bits(count)

    state_basis = prep_basis
    state_bit = prep_bit
    if adversary == AdversaryKind.INTERCEPT_RESEND:
        eve_basis = rng.bits(count)
        guesses = rng.bits(count)
        state_bit = np.where(eve_basis == prep_basis, prep_bit, guesses)
        state_basis = eve_basis

    if not noise.is_noise_free:
        flips = rng.uniforms(count) < _decoy_flip_probability(noise, state_basis)
        state_bit = np.where(flips, 1 - state_bit, state_bit)

    # A state in the wrong basis gives a uniformly random result.
    measured = np.where(state_basis == prep_basis, state_bit, rng.bits(count))
    errors = int(np.count_nonzero(measured != prep_bit))

    return HopReport(
        hop_index=hop,
        pair_index=pair_index,
        decoys_sent=count,
        decoy_errors=errors,
    )


def pooled_error_rate(reports: Sequence[HopReport]) -> float:
    """Σ errors / Σ sent over all reports (0 when nothing was sent)."""
    sent = sum(r.decoys_sent for r in reports)
    if sent == 0:
        return 0.0
    return sum(r.decoy_errors for r in reports) / sent


def should_abort(reports: List[HopReport], config: DecoyConfig) -> bool:
    """True iff a qubit was lost or the pooled decoy error rate exceeds the threshold."""
    if any(r.qubit_lost for r in reports):
        return True
    return pooled_error_rate(reports) > config.disturbance_threshold
