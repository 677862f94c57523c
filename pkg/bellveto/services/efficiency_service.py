"""Closed-form qubit efficiency of the deterministic and iterative protocols."""

import logging
from fractions import Fraction
from typing import List, Sequence

from ..models.efficiency import EfficiencyInputs, EfficiencyRow, EfficiencyTable
from ..models.protocol import PairCountRule, ProtocolParams, VoteVector, pairs_for
from ..models.channel import ChannelConfig
from ..utils.bit_math import ceil_log2, max_iterations
from ..utils.export import records_to_csv
from ..utils.random_source import RandomSource

logger = logging.getLogger(__name__)


def qubits_per_round(n: int, delta1: int) -> int:
    """(n+1)(1+δ₁) + 2: one pair's travel qubit and decoys over n+1 hops, plus creation."""
    if n < 1:
        raise ValueError(f"Voter count must be ≥ 1 (got {n})")
    if delta1 < 0:
        raise ValueError(f"delta1 must be ≥ 0 (got {delta1})")
    return (n + 1) * (1 + delta1) + 2


def qubit_total_deterministic(n: int, delta1: int) -> int:
    """[(n+1)(1+δ₁) + 2](⌈log₂ n⌉ + 1)."""
    return qubits_per_round(n, delta1) * (ceil_log2(n) + 1)


def eta_deterministic(n: int, delta1: int) -> Fraction:
    inputs = EfficiencyInputs(n=n, delta1=delta1)
    return Fraction(inputs.c, qubit_total_deterministic(n, delta1) + inputs.b)


def eta_qav6(n: int, delta1: int, l: int) -> Fraction:
    """1 / ([(n+1)(1+δ₁) + 2] · l), 1 ≤ l ≤ ⌈1 + log₂ n⌉.

    Raises:
        ValueError: If l is out of bounds
    """
    inputs = EfficiencyInputs(n=n, delta1=delta1, l=l)
    return Fraction(inputs.c, qubits_per_round(n, delta1) * l + inputs.b)


def comparison_table(
    n_values: Sequence[int],
    delta1: int,
    rule: PairCountRule = PairCountRule.FLOOR
) -> EfficiencyTable:
    """One row per voter count with exact fractions.

    Raises:
        ValueError: If ``n_values`` is empty
    """
    if not n_values:
        raise ValueError("n_values must not be empty")

    rows: List[EfficiencyRow] = []
    for n in n_values:
        h = pairs_for(n, rule)
        h_efficiency = pairs_for(n, PairCountRule.CEIL)
        rows.append(EfficiencyRow(
            n=n,
            h=h,
            h_efficiency=h_efficiency,
            q_total=qubit_total_deterministic(n, delta1),
            eta_det=eta_deterministic(n, delta1),
            eta_qav6_worst=eta_qav6(n, delta1, max_iterations(n)),
            rule_discrepancy=h != h_efficiency,
        ))

    notes = ["q_total and eta use h = ceil(log2 n) + 1"]
    flagged = [r.n for r in rows if r.rule_discrepancy]
    if flagged:
        notes.append(f"{rule.value} rule gives a different h for n in {flagged}")
    matching = [r.n for r in rows if r.eta_qav6_worst == r.eta_det]
    if matching:
        notes.append(f"eta_qav6_worst equals eta_det for n in {matching}")
    return EfficiencyTable(delta1=delta1, pair_rule=rule, rows=rows, notes=notes)


def table_to_csv(table: EfficiencyTable) -> str:
    return records_to_csv([row.as_record() for row in table.rows])


def instrumented_qubit_count(n: int, delta1: int, seed: int = 0) -> int:
    """Qubits a ceil-rule protocol run actually sends with δ₁ decoys per hop."""
    from .protocol_service import ProtocolService

    params = ProtocolParams(n=n, pair_count_rule=PairCountRule.CEIL, authenticate=False)
    service = ProtocolService(params, ChannelConfig.ideal(delta1=delta1))
    result = service.run(VoteVector(bits=[False] * n), RandomSource(seed))
    logger.debug("Instrumented run n=%d delta1=%d used %d qubits", n, delta1, result.qubits_used)
    return result.qubits_used
