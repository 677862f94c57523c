"""Pydantic models for experiment specs and reports."""

import json
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .channel import AdversaryKind, NoiseKind
from .protocol import PairCountRule

REPORT_VERSION = "1.0.0"
MAX_EXHAUSTIVE_N = 16


class Subcommand(str, Enum):
    TALLY = "tally"
    EXHAUSTIVE = "exhaustive"
    SWEEP = "sweep"
    EFFICIENCY = "efficiency"
    ADVERSARY = "adversary"
    AUTH = "auth"
    BACKEND = "backend"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class SweepParameter(str, Enum):
    P = "p"
    LOSS = "loss"


class RunSpec(BaseModel):
    """Everything needed to reproduce one CLI invocation."""

    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    n: int = Field(default=4, ge=1)
    votes: Optional[str] = Field(default=None, description="Explicit vote bitstring, V_0 first")
    k: Optional[int] = Field(default=None, ge=0, description="Random vote vector with k vetoes")
    seed: int
    trials: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)
    backend: str = "abstract"
    noise: NoiseKind = NoiseKind.IDEAL
    p: float = Field(default=0.0, ge=0.0, le=1.0)
    loss: float = Field(default=0.0, ge=0.0, le=1.0)
    adversary: AdversaryKind = AdversaryKind.NONE
    delta1: int = Field(default=0, ge=0)
    threshold: float = Field(default=0.125, ge=0.0, le=1.0)
    authenticate: bool = True
    signature_length: int = Field(default=256, ge=1)
    auth_threshold: float = Field(default=0.125, ge=0.0, le=1.0)
    pair_rule: PairCountRule = PairCountRule.FLOOR
    sweep: SweepParameter = SweepParameter.P
    grid: List[float] = Field(default_factory=list)
    n_values: List[int] = Field(default_factory=list)
    output_format: OutputFormat = OutputFormat.JSON
    out: Optional[str] = None

    @model_validator(mode="after")
    def _check_votes(self) -> "RunSpec":
        if self.votes is not None:
            text = self.votes.strip()
            if not text or any(c not in "01" for c in text):
                raise ValueError(f"votes must be a 0/1 string, got {self.votes!r}")
            if len(text) != self.n:
                raise ValueError(f"votes has length {len(text)} but n={self.n}")
            if self.k is not None:
                raise ValueError("give either --votes or --k, not both")
        if self.k is not None and self.k > self.n:
            raise ValueError(f"k={self.k} exceeds n={self.n}")
        if self.backend not in ("abstract", "photonic"):
            raise ValueError(f"backend must be 'abstract' or 'photonic', got {self.backend!r}")
        if self.subcommand == Subcommand.EXHAUSTIVE and self.n > MAX_EXHAUSTIVE_N:
            raise ValueError(f"exhaustive runs are limited to n ≤ {MAX_EXHAUSTIVE_N} (got {self.n})")
        return self


class ExperimentReport(BaseModel):
    """Spec echo plus results of one subcommand."""

    spec: RunSpec
    version: str = REPORT_VERSION
    seed: int
    results: Dict[str, Any] = Field(default_factory=dict)
    runs: List[Dict[str, Any]] = Field(default_factory=list)
    table: List[Dict[str, Any]] = Field(default_factory=list)
    wall_clock_seconds: Optional[float] = None

    def payload(self, include_wall_clock: bool = True) -> Dict[str, Any]:
        if include_wall_clock:
            return self.model_dump(mode="json")
        # Worker count changes scheduling only, never the results.
        return self.model_dump(mode="json", exclude={"wall_clock_seconds": True, "spec": {"workers"}})

    def to_json(self, include_wall_clock: bool = True) -> str:
        return json.dumps(self.payload(include_wall_clock), sort_keys=True, indent=2)

    def canonical_json(self) -> str:
        """Sorted-key JSON without wall clock or worker count; stable across reruns."""
        return json.dumps(self.payload(include_wall_clock=False), sort_keys=True, separators=(",", ":"))
