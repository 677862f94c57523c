"""
Deterministic Bell-state anonymous veto protocol and the iterative baseline.

The VA prepares h Bell pairs |Φ⁺⟩, keeps the home qubits and sends the travel
qubits through voters V_0 … V_{n-1} and back. A vetoing voter applies P^(a) to
travel qubit a, so pair a ends in 1/√2(|00⟩ + e^{ikπ/2^{a-1}}|11⟩) where k is
the number of vetoes. Pair a yields Φ⁻ with certainty iff the a-th least
significant bit of k is the lowest set bit, hence any Φ⁻ outcome means k ≥ 1.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, List, Optional, Protocol, Tuple, Union

from ..models.auth import AuthResult
from ..models.channel import ChannelConfig, HopReport
from ..models.protocol import (
    Announcement,
    PairCountRule,
    PairRecord,
    ProtocolParams,
    Qav6PhaseConvention,
    Qav6Result,
    TallyResult,
    VoteVector,
    pairs_for,
)
from ..models.quantum import BellOutcome, GateMatrix, PureState
from ..utils.bit_math import max_iterations
from ..utils.quantum_core import (
    TRAVEL_QUBIT,
    apply_gate,
    bell_measure,
    bell_phi_plus,
    phase_gate,
    phase_pair_state,
)
from ..utils.random_source import RandomSource
from .auth_service import AuthService
from .channel_service import decoy_round, pooled_error_rate, should_abort, transmit

logger = logging.getLogger(__name__)


def pair_count(n: int, rule: PairCountRule = PairCountRule.FLOOR) -> int:
    """Number of Bell pairs h for n voters.

    floor rule: ⌊log₂ n⌋ + 1; ceil rule: ⌈log₂ n⌉ + 1.

    Raises:
        ValueError: If n < 1
    """
    return pairs_for(n, PairCountRule(rule))


def _check_k_a(k: int, a: int) -> None:
    if k < 0:
        raise ValueError(f"Veto count must be ≥ 0 (got {k})")
    if a < 1:
        raise ValueError(f"Pair index must be ≥ 1 (got {a})")


def expected_pair_phase(k: int, a: int) -> float:
    """Relative phase (kπ/2^{a-1}) mod 2π accumulated on pair a."""
    _check_k_a(k, a)
    return math.pi * (k % 2 ** a) / 2 ** (a - 1)


def deterministic_outcome(k: int, a: int) -> Optional[BellOutcome]:
    """Certain outcome of pair a, or None when the outcome is genuinely random."""
    _check_k_a(k, a)
    residue = k % 2 ** a
    if residue == 0:
        return BellOutcome.PHI_PLUS
    if residue == 2 ** (a - 1):
        return BellOutcome.PHI_MINUS
    return None


def outcome_distribution(k: int, a: int) -> Tuple[float, float]:
    """(P(Φ⁺), P(Φ⁻)) = (cos²(kπ/2^a), sin²(kπ/2^a)) under the ideal channel."""
    certain = deterministic_outcome(k, a)
    if certain == BellOutcome.PHI_PLUS:
        return 1.0, 0.0
    if certain == BellOutcome.PHI_MINUS:
        return 0.0, 1.0
    angle = math.pi * (k % 2 ** a) / 2 ** a
    p_minus = math.sin(angle) ** 2
    return 1.0 - p_minus, p_minus


def ideal_pair_state(k: int, a: int) -> PureState:
    """1/√2 (|00⟩ + e^{ikπ/2^{a-1}}|11⟩)."""
    return phase_pair_state(expected_pair_phase(k, a))


def decide(records: List[PairRecord]) -> bool:
    """Veto iff any outcome is Φ⁻. Ψ± outcomes are channel faults, never vetoes."""
    return any(r.outcome == BellOutcome.PHI_MINUS for r in records)


def announce(result: TallyResult) -> Announcement:
    """Public bulletin: ordered outcomes and verdict, without phases or k."""
    return Announcement(
        outcomes=result.outcomes,
        veto_detected=result.veto_detected,
        aborted=result.aborted,
    )


def verify_announcement(announcement: Announcement) -> bool:
    """A voter's consistency check of the announced verdict against the outcomes."""
    if announcement.aborted:
        return announcement.veto_detected is None
    return announcement.veto_detected == any(
        o == BellOutcome.PHI_MINUS for o in announcement.outcomes
    )


class Backend(Protocol):
    """Physical realization of one Bell pair carried through the protocol."""

    name: str

    def prepare(self) -> Any: ...

    def apply_veto(self, state: Any, a: int, strict: bool = True) -> Any: ...

    def transit(
        self, state: Any, channel: ChannelConfig, rng: RandomSource
    ) -> Tuple[Any, bool]: ...

    def logical(self, state: Any) -> PureState: ...

    def measure(self, state: Any, rng: RandomSource) -> BellOutcome: ...


@lru_cache(maxsize=64)
def _veto_gate(a: int) -> GateMatrix:
    return phase_gate(a)


class QubitBackend:
    """Abstract two-qubit state-vector realization (home = qubit 0, travel = qubit 1)."""

    name = "abstract"

    def prepare(self) -> PureState:
        return bell_phi_plus()

    def apply_veto(self, state: PureState, a: int, strict: bool = True) -> PureState:
        return apply_gate(state, _veto_gate(a), TRAVEL_QUBIT)

    def transit(
        self, state: PureState, channel: ChannelConfig, rng: RandomSource
    ) -> Tuple[PureState, bool]:
        return transmit(state, TRAVEL_QUBIT, channel, rng)

    def logical(self, state: PureState) -> PureState:
        return state

    def measure(self, state: PureState, rng: RandomSource) -> BellOutcome:
        return bell_measure(state, rng)


def get_backend(name: str) -> Backend:
    """Backend by CLI name: 'abstract' or 'photonic'."""
    if name == "abstract":
        return QubitBackend()
    if name == "photonic":
        from .photonic_service import PhotonicBackend
        return PhotonicBackend()
    raise ValueError(f"Unknown backend: {name!r} (expected 'abstract' or 'photonic')")


@dataclass
class Circulation:
    """Pre-measurement view of one distribution round."""
    states: List[Any]
    logical_states: List[PureState]
    gate_indices: List[int]
    hop_reports: List[HopReport] = field(default_factory=list)
    qubits_used: int = 0
    lost_at: Optional[Tuple[int, int]] = None

    @property
    def lost(self) -> bool:
        return self.lost_at is not None


class ProtocolService:
    """Runs the deterministic protocol and the iterative baseline over one channel."""

    def __init__(
        self,
        params: ProtocolParams,
        channel: Optional[ChannelConfig] = None,
        backend: Union[str, Backend] = "abstract"
    ):
        """Initialize protocol service.

        Args:
            params: Voter count, pair count and authentication settings
            channel: Hop model shared by every travel qubit (default: ideal)
            backend: Backend name or instance
        """
        self.params = params
        self.channel = channel or ChannelConfig.ideal()
        self.backend = get_backend(backend) if isinstance(backend, str) else backend
        self._auth = AuthService(params.signature_length, params.auth_threshold)

    def _check_votes(self, votes: VoteVector) -> None:
        if votes.n != self.params.n:
            raise ValueError(f"Vote vector has {votes.n} entries, expected n={self.params.n}")

    def _authenticate(self, rng: RandomSource) -> Tuple[List[AuthResult], Optional[str]]:
        if not self.params.authenticate:
            return [], None
        results = self._auth.authenticate(self.params.n, rng, self.params.impostors)
        rejected = [r.voter for r in results if not r.accepted]
        if rejected:
            return results, f"authentication failed for voters {rejected}"
        return results, None

    def _circulate(
        self,
        votes: VoteVector,
        rng: RandomSource,
        gate_indices: List[int]
    ) -> Circulation:
        """Prepare one pair per gate index and relay every travel qubit VA→V_0→…→VA."""
        backend = self.backend
        channel = self.channel
        delta1 = channel.decoy.delta1
        strict = channel.is_noise_free

        states = [backend.prepare() for _ in gate_indices]
        qubits_used = 2 * len(gate_indices)
        reports: List[HopReport] = []

        for hop in range(self.params.n + 1):
            vetoes = hop < self.params.n and votes.bits[hop]
            for j, gate_index in enumerate(gate_indices):
                state, lost = backend.transit(states[j], channel, rng)
                report = decoy_round(
                    hop, channel.decoy, channel.adversary, rng,
                    noise=channel.noise, pair_index=j + 1,
                )
                qubits_used += 1 + delta1
                if lost:
                    reports.append(report.model_copy(update={"qubit_lost": True}))
                    logger.info("Travel qubit of pair %d lost on hop %d", j + 1, hop)
                    return Circulation(
                        states=states,
                        logical_states=[backend.logical(s) for s in states],
                        gate_indices=list(gate_indices),
                        hop_reports=reports,
                        qubits_used=qubits_used,
                        lost_at=(hop, j + 1),
                    )
                reports.append(report)
                if vetoes:
                    state = backend.apply_veto(state, gate_index, strict=strict)
                states[j] = state
            logger.debug("Hop %d complete", hop)

        return Circulation(
            states=states,
            logical_states=[backend.logical(s) for s in states],
            gate_indices=list(gate_indices),
            hop_reports=reports,
            qubits_used=qubits_used,
        )

    def _channel_abort_reason(self, circulation: Circulation) -> Optional[str]:
        if circulation.lost:
            hop, pair = circulation.lost_at
            return f"travel qubit of pair {pair} lost on hop {hop}"
        if should_abort(circulation.hop_reports, self.channel.decoy):
            rate = pooled_error_rate(circulation.hop_reports)
            return (
                f"decoy disturbance {rate:.4f} exceeds threshold "
                f"{self.channel.decoy.disturbance_threshold}"
            )
        return None

    def evolve(self, votes: VoteVector, rng: RandomSource) -> Circulation:
        """Distribute and relay all h pairs without measuring them."""
        self._check_votes(votes)
        return self._circulate(votes, rng, list(range(1, self.params.pair_count + 1)))

    def run(self, votes: VoteVector, rng: RandomSource) -> TallyResult:
        """One complete run of the deterministic protocol.

        Raises:
            ValueError: If the vote vector length differs from n
        """
        self._check_votes(votes)
        k = votes.k
        logger.info("Protocol run: n=%d h=%d backend=%s",
                    self.params.n, self.params.pair_count, self.backend.name)

        auth_results, reason = self._authenticate(rng)
        if reason:
            return self._aborted(reason, auth_results=auth_results)

        circulation = self._circulate(votes, rng, list(range(1, self.params.pair_count + 1)))
        reason = self._channel_abort_reason(circulation)
        if reason:
            return self._aborted(
                reason,
                auth_results=auth_results,
                hop_reports=circulation.hop_reports,
                qubits_used=circulation.qubits_used,
            )

        records = [
            PairRecord(
                a=a,
                outcome=self.backend.measure(state, rng),
                predicted_deterministic=deterministic_outcome(k, a),
                phase=expected_pair_phase(k, a),
            )
            for a, state in zip(circulation.gate_indices, circulation.states)
        ]
        faults = sum(1 for r in records if not r.outcome.is_phi)

        common = dict(
            records=records,
            channel_faults=faults,
            qubits_used=circulation.qubits_used,
            backend=self.backend.name,
            hop_reports=circulation.hop_reports,
            auth_results=auth_results,
        )
        if faults and self.channel.noise.is_noise_free:
            reason = f"Bell consistency check failed: {faults} Psi outcome(s)"
            logger.info("Run aborted: %s", reason)
            return TallyResult(aborted=True, abort_reason=reason, **common)

        verdict = decide(records)
        logger.info("Verdict: veto_detected=%s", verdict)
        return TallyResult(veto_detected=verdict, **common)

    def _aborted(self, reason: str, **fields) -> TallyResult:
        logger.info("Run aborted: %s", reason)
        return TallyResult(aborted=True, abort_reason=reason, backend=self.backend.name, **fields)

    def _qav6_gate_index(self, t: int) -> int:
        if self.params.qav6_phase_convention == Qav6PhaseConvention.LITERAL:
            return t + 1
        return t

    def run_qav6(self, votes: VoteVector, rng: RandomSource) -> Qav6Result:
        """Iterative baseline: one fresh pair per iteration, per-veto phase π/2^{t-1}.

        Stops at the first Φ⁻ (veto) or after ⌈1 + log₂ n⌉ all-Φ⁺ iterations.
        """
        self._check_votes(votes)
        k = votes.k
        limit = max_iterations(self.params.n)
        records: List[PairRecord] = []
        qubits_used = 0
        faults = 0

        _, reason = self._authenticate(rng)
        if reason:
            return Qav6Result(aborted=True, abort_reason=reason)

        for t in range(1, limit + 1):
            gate_index = self._qav6_gate_index(t)
            circulation = self._circulate(votes, rng, [gate_index])
            qubits_used += circulation.qubits_used
            reason = self._channel_abort_reason(circulation)
            if reason:
                return Qav6Result(
                    aborted=True, abort_reason=reason, iterations_used=t,
                    records=records, qubits_used=qubits_used, channel_faults=faults,
                )

            outcome = self.backend.measure(circulation.states[0], rng)
            records.append(PairRecord(
                a=t,
                outcome=outcome,
                predicted_deterministic=deterministic_outcome(k, gate_index),
                phase=expected_pair_phase(k, gate_index),
            ))
            if not outcome.is_phi:
                faults += 1
                if self.channel.noise.is_noise_free:
                    return Qav6Result(
                        aborted=True,
                        abort_reason=f"Bell consistency check failed in iteration {t}",
                        iterations_used=t, records=records,
                        qubits_used=qubits_used, channel_faults=faults,
                    )
            if outcome == BellOutcome.PHI_MINUS:
                logger.info("Iterative protocol: veto found in iteration %d", t)
                return Qav6Result(
                    veto_detected=True, iterations_used=t, records=records,
                    qubits_used=qubits_used, channel_faults=faults,
                )

        return Qav6Result(
            veto_detected=False, iterations_used=limit, records=records,
            qubits_used=qubits_used, channel_faults=faults,
        )


def run_protocol(
    votes: VoteVector,
    channel: ChannelConfig,
    params: ProtocolParams,
    rng: RandomSource,
    backend: Union[str, Backend] = "abstract"
) -> TallyResult:
    """Execute the deterministic protocol once."""
    return ProtocolService(params, channel, backend).run(votes, rng)


def run_qav6(
    votes: VoteVector,
    channel: ChannelConfig,
    rng: RandomSource,
    params: Optional[ProtocolParams] = None,
    backend: Union[str, Backend] = "abstract"
) -> Qav6Result:
    """Execute the iterative Bell-state baseline once."""
    params = params or ProtocolParams(n=votes.n)
    return ProtocolService(params, channel, backend).run_qav6(votes, rng)
