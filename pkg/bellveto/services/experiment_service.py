"""
Experiment drivers behind the CLI subcommands.

Every trial draws from its own RandomSource derived from (seed, trial index),
so serial and parallel execution aggregate to identical reports.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from ..models.channel import (
    AdversaryKind,
    ChannelConfig,
    DecoyConfig,
    NoiseKind,
    NoiseModel,
)
from ..models.protocol import ProtocolParams, VoteVector
from ..models.quantum import BellOutcome
from ..models.report import ExperimentReport, RunSpec, Subcommand, SweepParameter
from ..utils.quantum_core import fidelity, sample_bell_outcomes
from ..utils.random_source import RandomSource
from .auth_service import AuthService
from .channel_service import decoy_round
from .efficiency_service import comparison_table, instrumented_qubit_count
from .protocol_service import ProtocolService, announce, outcome_distribution, verify_announcement

logger = logging.getLogger(__name__)

DEFAULT_EFFICIENCY_N = [2, 4, 8, 16]
STANDARD_ERROR_BAND = 4.0


def build_channel(spec: RunSpec) -> ChannelConfig:
    p = 0.0 if spec.noise == NoiseKind.IDEAL else spec.p
    return ChannelConfig(
        noise=NoiseModel(kind=spec.noise, p=p),
        loss_probability=spec.loss,
        adversary=spec.adversary,
        decoy=DecoyConfig(delta1=spec.delta1, disturbance_threshold=spec.threshold),
    )


def build_params(spec: RunSpec) -> ProtocolParams:
    return ProtocolParams(
        n=spec.n,
        pair_count_rule=spec.pair_rule,
        authenticate=spec.authenticate,
        signature_length=spec.signature_length,
        auth_threshold=spec.auth_threshold,
    )


def resolve_votes(spec: RunSpec, rng: RandomSource) -> VoteVector:
    """Explicit bitstring, or k vetoes placed uniformly at random (k defaults to 0)."""
    if spec.votes is not None:
        return VoteVector.from_bitstring(spec.votes)
    k = spec.k or 0
    bits = [False] * spec.n
    if k:
        for i in rng.choose_indices(spec.n, k):
            bits[int(i)] = True
    return VoteVector(bits=bits)


def _summarize(index: int, votes: VoteVector, result) -> Dict[str, Any]:
    return {
        "index": index,
        "votes": votes.to_bitstring(),
        "k": votes.k,
        "veto_detected": result.veto_detected,
        "aborted": result.aborted,
        "abort_reason": result.abort_reason,
        "channel_faults": result.channel_faults,
        "qubits_used": result.qubits_used,
        "phi_minus_pairs": [r.a for r in result.records if r.outcome == BellOutcome.PHI_MINUS],
    }


def protocol_trial(spec: RunSpec, index: int) -> Dict[str, Any]:
    """One protocol run on stream (seed, index) with spec-resolved votes."""
    rng = RandomSource.derive(spec.seed, index)
    votes = resolve_votes(spec, rng)
    service = ProtocolService(build_params(spec), build_channel(spec), spec.backend)
    return _summarize(index, votes, service.run(votes, rng))


def exhaustive_trial(spec: RunSpec, index: int) -> Dict[str, Any]:
    """Run the vote vector whose bit i is voter V_i's veto, for index = vector value."""
    rng = RandomSource.derive(spec.seed, index)
    votes = VoteVector.from_int(index, spec.n)
    service = ProtocolService(build_params(spec), build_channel(spec), spec.backend)
    return _summarize(index, votes, service.run(votes, rng))


def decoy_trial(spec: RunSpec, index: int) -> Dict[str, Any]:
    """One hop's decoy round under the spec's adversary and noise."""
    rng = RandomSource.derive(spec.seed, index)
    channel = build_channel(spec)
    report = decoy_round(0, channel.decoy, channel.adversary, rng, noise=channel.noise)
    return {"index": index, "sent": report.decoys_sent, "errors": report.decoy_errors}


def _run_chunk(
    trial: Callable[[RunSpec, int], Dict[str, Any]],
    spec: RunSpec,
    indices: List[int]
) -> List[Dict[str, Any]]:
    return [trial(spec, i) for i in indices]


def run_trials(
    trial: Callable[[RunSpec, int], Dict[str, Any]],
    spec: RunSpec,
    indices: Sequence[int],
    workers: int = 1
) -> List[Dict[str, Any]]:
    """Evaluate ``trial`` for every index, in index order.

    Args:
        trial: Module-level trial function (must be picklable)
        spec: Run specification passed to every trial
        indices: Trial indices
        workers: Worker processes; 1 runs serially

    Returns:
        Trial summaries sorted by index
    """
    indices = list(indices)
    if workers <= 1 or len(indices) < 2:
        return _run_chunk(trial, spec, indices)

    chunks = [list(c) for c in np.array_split(np.array(indices), workers) if len(c)]
    results: List[Dict[str, Any]] = []
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(_run_chunk, trial, spec, [int(i) for i in chunk])
            for chunk in chunks
        ]
        for future in as_completed(futures):
            results.extend(future.result())
    return sorted(results, key=lambda r: r["index"])


def _rate(count: int, total: int) -> float:
    return count / total if total else 0.0


def aggregate_runs(summaries: List[Dict[str, Any]], pair_count: int) -> Dict[str, Any]:
    """Verdict error rates, abort rate and per-pair Φ⁻ frequency over completed runs."""
    total = len(summaries)
    completed = [s for s in summaries if not s["aborted"]]
    false_positive = sum(1 for s in completed if s["k"] == 0 and s["veto_detected"])
    false_negative = sum(1 for s in completed if s["k"] >= 1 and not s["veto_detected"])
    per_pair = [
        _rate(sum(1 for s in completed if a in s["phi_minus_pairs"]), len(completed))
        for a in range(1, pair_count + 1)
    ]
    return {
        "trials": total,
        "completed": len(completed),
        "abort_rate": _rate(total - len(completed), total),
        "false_positive_rate": _rate(false_positive, total),
        "false_negative_rate": _rate(false_negative, total),
        "veto_rate": _rate(sum(1 for s in completed if s["veto_detected"]), len(completed)),
        "channel_fault_rate": _rate(sum(1 for s in completed if s["channel_faults"]), len(completed)),
        "phi_minus_rate_per_pair": per_pair,
    }


class ExperimentService:
    """Runs one CLI subcommand and packages its ExperimentReport."""

    def __init__(self, spec: RunSpec):
        """Initialize experiment service.

        Args:
            spec: Validated run specification
        """
        self.spec = spec
        self._handlers = {
            Subcommand.TALLY: self.tally,
            Subcommand.EXHAUSTIVE: self.exhaustive,
            Subcommand.SWEEP: self.sweep,
            Subcommand.EFFICIENCY: self.efficiency,
            Subcommand.ADVERSARY: self.adversary,
            Subcommand.AUTH: self.auth,
            Subcommand.BACKEND: self.backend,
        }

    def run(self) -> ExperimentReport:
        """Dispatch on the spec's subcommand and time it."""
        logger.info("Running %s (seed=%d)", self.spec.subcommand.value, self.spec.seed)
        started = time.perf_counter()
        report = self._handlers[self.spec.subcommand]()
        return report.model_copy(update={"wall_clock_seconds": time.perf_counter() - started})

    def _report(self, **fields) -> ExperimentReport:
        return ExperimentReport(spec=self.spec, seed=self.spec.seed, **fields)

    def tally(self) -> ExperimentReport:
        """A single election, or verdict statistics over ``trials`` elections."""
        spec = self.spec
        if spec.trials > 1:
            summaries = run_trials(protocol_trial, spec, range(spec.trials), spec.workers)
            pair_count = build_params(spec).pair_count
            return self._report(results=aggregate_runs(summaries, pair_count))

        rng = RandomSource.derive(spec.seed, 0)
        votes = resolve_votes(spec, rng)
        service = ProtocolService(build_params(spec), build_channel(spec), spec.backend)
        result = service.run(votes, rng)
        announcement = announce(result)
        return self._report(
            results={
                "veto_detected": result.veto_detected,
                "aborted": result.aborted,
                "abort_reason": result.abort_reason,
                "outcomes": [o.value for o in result.outcomes],
                "announcement_verified": verify_announcement(announcement),
                "qubits_used": result.qubits_used,
            },
            runs=[{"votes": votes.to_bitstring(), "k": votes.k, **result.model_dump(mode="json")}],
        )

    def exhaustive(self) -> ExperimentReport:
        """Every vote vector of length n; counterexamples are runs whose verdict ≠ (k ≥ 1)."""
        spec = self.spec
        summaries = run_trials(exhaustive_trial, spec, range(2 ** spec.n), spec.workers)
        counterexamples = [
            s["votes"] for s in summaries
            if s["aborted"] or s["veto_detected"] != (s["k"] >= 1)
        ]
        if counterexamples:
            logger.warning("%d counterexample(s) for n=%d", len(counterexamples), spec.n)
        return self._report(results={
            "vectors": len(summaries),
            "counterexamples": counterexamples,
            "aborted": sum(1 for s in summaries if s["aborted"]),
            "passed": not counterexamples,
        })

    def sweep(self) -> ExperimentReport:
        """Monte Carlo verdict statistics at each grid value of p or loss.

        Raises:
            ValueError: If sweeping p over the ideal channel
        """
        spec = self.spec
        parameter = spec.sweep
        if parameter == SweepParameter.P and spec.noise == NoiseKind.IDEAL:
            raise ValueError("sweeping p needs --noise dephasing or depolarizing")
        grid = spec.grid or [getattr(spec, parameter.value)]

        table: List[Dict[str, Any]] = []
        for value in grid:
            point = RunSpec.model_validate({**spec.model_dump(), parameter.value: float(value)})
            summaries = run_trials(protocol_trial, point, range(spec.trials), spec.workers)
            row = {parameter.value: float(value)}
            row.update(aggregate_runs(summaries, build_params(point).pair_count))
            table.append(row)
            logger.info("Sweep %s=%g: abort_rate=%.4f", parameter.value, value, row["abort_rate"])
        return self._report(table=table)

    def efficiency(self) -> ExperimentReport:
        spec = self.spec
        n_values = spec.n_values or DEFAULT_EFFICIENCY_N
        table = comparison_table(n_values, spec.delta1, spec.pair_rule)
        rows = []
        for row in table.rows:
            record = row.as_record()
            record["q_instrumented"] = instrumented_qubit_count(row.n, spec.delta1)
            rows.append(record)
        return self._report(table=rows, results={"notes": table.notes})

    def adversary(self) -> ExperimentReport:
        """Intercept-resend statistics: per-decoy errors, single-hop detection, protocol aborts."""
        spec = self.spec
        if spec.delta1 < 1:
            raise ValueError("the adversary experiment needs --delta1 ≥ 1")
        attacked = RunSpec.model_validate(
            {**spec.model_dump(), "adversary": AdversaryKind.INTERCEPT_RESEND}
        )
        build_channel(attacked)  # rejects thresholds that cannot separate the attack

        rounds = run_trials(decoy_trial, attacked, range(spec.trials), spec.workers)
        sent = sum(r["sent"] for r in rounds)
        errors = sum(r["errors"] for r in rounds)
        detected = sum(1 for r in rounds if r["errors"] > 0)

        # Protocol runs use a disjoint block of trial indices.
        offset = spec.trials
        runs = run_trials(protocol_trial, attacked, range(offset, offset + spec.trials), spec.workers)
        aborts = sum(1 for r in runs if r["aborted"])

        return self._report(results={
            "per_decoy_error_rate": _rate(errors, sent),
            "single_round_detection_rate": _rate(detected, len(rounds)),
            "expected_detection_rate": 1.0 - 0.75 ** spec.delta1,
            "protocol_abort_rate": _rate(aborts, len(runs)),
        })

    def auth(self) -> ExperimentReport:
        """Honest and forged signature statistics at the configured length and threshold."""
        spec = self.spec
        service = AuthService(spec.signature_length, spec.auth_threshold)
        honest_rates: List[float] = []
        forged_rates: List[float] = []
        honest_rejected = 0
        forged_rejected = 0
        for i in range(spec.trials):
            rng = RandomSource.derive(spec.seed, i)
            honest = service.authenticate_voter(0, rng)
            forged = service.authenticate_voter(0, rng, impostor=True)
            honest_rates.append(honest.mismatch_rate)
            forged_rates.append(forged.mismatch_rate)
            honest_rejected += not honest.accepted
            forged_rejected += not forged.accepted

        return self._report(results={
            "honest_max_mismatch_rate": max(honest_rates),
            "honest_rejection_rate": _rate(honest_rejected, spec.trials),
            "forger_mean_mismatch_rate": float(np.mean(forged_rates)),
            "forger_rejection_rate": _rate(forged_rejected, spec.trials),
        })

    def backend(self) -> ExperimentReport:
        """Compare abstract and photonic outcome statistics for every k ∈ 0..n.

        The first k voters veto; each pair is sampled ``trials`` times per backend.
        """
        from .photonic_service import sample_photonic_outcomes

        spec = self.spec
        params = build_params(spec).model_copy(update={"authenticate": False})
        channel = ChannelConfig.ideal(delta1=0)
        abstract = ProtocolService(params, channel, "abstract")
        photonic = ProtocolService(params, channel, "photonic")

        table: List[Dict[str, Any]] = []
        for k in range(spec.n + 1):
            votes = VoteVector(bits=[i < k for i in range(spec.n)])
            rng = RandomSource.derive(spec.seed, k)
            reference = abstract.evolve(votes, rng)
            optical = photonic.evolve(votes, rng)
            for a, state, photon, logical in zip(
                reference.gate_indices, reference.states,
                optical.states, optical.logical_states,
            ):
                counts_abstract = sample_bell_outcomes(state, rng, spec.trials)
                counts_photonic = sample_photonic_outcomes(
                    photon, rng, spec.trials, resolve_polarization=True
                )
                _, p_minus = outcome_distribution(k, a)
                freq_abstract = counts_abstract[BellOutcome.PHI_MINUS] / spec.trials
                freq_photonic = counts_photonic[BellOutcome.PHI_MINUS] / spec.trials
                deviation = abs(freq_abstract - freq_photonic)
                standard_error = math.sqrt(2.0 * p_minus * (1.0 - p_minus) / spec.trials)
                table.append({
                    "k": k,
                    "a": a,
                    "p_phi_minus": p_minus,
                    "abstract_phi_minus": freq_abstract,
                    "photonic_phi_minus": freq_photonic,
                    "deviation": deviation,
                    "standard_error": standard_error,
                    "within_band": deviation <= max(STANDARD_ERROR_BAND * standard_error, 1.0 / spec.trials),
                    "fidelity": fidelity(state, logical),
                })

        return self._report(
            table=table,
            results={
                "max_deviation": max(r["deviation"] for r in table),
                "min_fidelity": min(r["fidelity"] for r in table),
                "all_within_band": all(r["within_band"] for r in table),
            },
        )
