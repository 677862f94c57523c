"""Pydantic models for protocol inputs, per-pair records and tally results."""

import math
from enum import Enum
from typing import FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..utils.bit_math import ceil_log2, floor_log2
from .auth import DEFAULT_AUTH_THRESHOLD, DEFAULT_SIGNATURE_LENGTH, AuthResult
from .channel import HopReport
from .quantum import BellOutcome


class PairCountRule(str, Enum):
    FLOOR = "floor"
    CEIL = "ceil"


class Qav6PhaseConvention(str, Enum):
    """Per-veto phase of the iterative protocol at iteration t (t ≥ 1)."""
    CONSISTENT = "consistent"  # π / 2^(t-1)
    LITERAL = "literal"        # π / 2^t


def pairs_for(n: int, rule: PairCountRule = PairCountRule.FLOOR) -> int:
    if n < 1:
        raise ValueError(f"Voter count must be ≥ 1 (got {n})")
    if rule == PairCountRule.CEIL:
        return ceil_log2(n) + 1
    return floor_log2(n) + 1


class ProtocolParams(BaseModel):
    """Voter count, Bell-pair count and authentication settings of one run."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, description="Voter count")
    pair_count_rule: PairCountRule = PairCountRule.FLOOR
    h: Optional[int] = Field(default=None, ge=1, description="Bell-pair count")
    authenticate: bool = True
    signature_length: int = Field(default=DEFAULT_SIGNATURE_LENGTH, ge=1)
    auth_threshold: float = Field(default=DEFAULT_AUTH_THRESHOLD, ge=0.0, le=1.0)
    impostors: FrozenSet[int] = Field(default_factory=frozenset)
    qav6_phase_convention: Qav6PhaseConvention = Qav6PhaseConvention.CONSISTENT

    @model_validator(mode="after")
    def _derive_pair_count(self) -> "ProtocolParams":
        expected = pairs_for(self.n, self.pair_count_rule)
        if self.h is None:
            object.__setattr__(self, "h", expected)
        elif self.h != expected:
            raise ValueError(
                f"h={self.h} does not match the {self.pair_count_rule.value} rule "
                f"for n={self.n} (expected {expected})"
            )
        bad = [i for i in self.impostors if not 0 <= i < self.n]
        if bad:
            raise ValueError(f"Impostor indices {bad} out of range for n={self.n}")
        return self

    @property
    def pair_count(self) -> int:
        return int(self.h)


class VoteVector(BaseModel):
    """Secret veto bits; bits[i] is True iff voter V_i vetoes."""

    model_config = ConfigDict(frozen=True)

    bits: Tuple[bool, ...]

    @field_validator("bits", mode="before")
    @classmethod
    def _coerce_bits(cls, value):
        return tuple(bool(b) for b in value)

    @classmethod
    def from_bitstring(cls, bitstring: str) -> "VoteVector":
        """Parse '0100' (V_0 first)."""
        text = bitstring.strip()
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"Votes must be a non-empty 0/1 string, got {bitstring!r}")
        return cls(bits=[c == "1" for c in text])

    @classmethod
    def from_int(cls, value: int, n: int) -> "VoteVector":
        """Bit i of ``value`` is voter V_i's veto."""
        return cls(bits=[(value >> i) & 1 for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def k(self) -> int:
        """Number of vetoes."""
        return sum(self.bits)

    def to_bitstring(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)


class PairRecord(BaseModel):
    """Bell outcome of pair ``a`` plus the simulator's knowledge of its phase."""

    model_config = ConfigDict(frozen=True)

    a: int = Field(ge=1)
    outcome: BellOutcome
    predicted_deterministic: Optional[BellOutcome] = None
    phase: float = Field(ge=0.0, lt=2 * math.pi)


class TallyResult(BaseModel):
    """Verdict, per-pair records and abort status of one protocol run.

    ``veto_detected`` is None when the run aborted (no verdict).
    """

    model_config = ConfigDict(frozen=True)

    veto_detected: Optional[bool] = None
    records: List[PairRecord] = Field(default_factory=list)
    aborted: bool = False
    abort_reason: Optional[str] = None
    channel_faults: int = Field(default=0, ge=0)
    qubits_used: int = Field(default=0, ge=0)
    backend: str = "abstract"
    hop_reports: List[HopReport] = Field(default_factory=list)
    auth_results: List[AuthResult] = Field(default_factory=list)

    @model_validator(mode="after")
    def _verdict_matches_outcomes(self) -> "TallyResult":
        if self.aborted:
            if self.veto_detected is not None:
                raise ValueError("an aborted run carries no verdict")
        else:
            any_minus = any(r.outcome == BellOutcome.PHI_MINUS for r in self.records)
            if self.veto_detected != any_minus:
                raise ValueError("veto_detected must equal (any outcome is PhiMinus)")
        return self

    @property
    def outcomes(self) -> List[BellOutcome]:
        return [r.outcome for r in self.records]


class Qav6Result(BaseModel):
    """Verdict and iteration history of the iterative Bell-state protocol."""

    model_config = ConfigDict(frozen=True)

    veto_detected: Optional[bool] = None
    iterations_used: int = Field(default=0, ge=0)
    records: List[PairRecord] = Field(default_factory=list)
    aborted: bool = False
    abort_reason: Optional[str] = None
    channel_faults: int = Field(default=0, ge=0)
    qubits_used: int = Field(default=0, ge=0)


class Announcement(BaseModel):
    """What the VA publishes: ordered Bell outcomes and the verdict, nothing else."""

    model_config = ConfigDict(frozen=True)

    outcomes: List[BellOutcome] = Field(default_factory=list)
    veto_detected: Optional[bool] = None
    aborted: bool = False
