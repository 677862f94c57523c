"""Pydantic models for qubit-efficiency figures."""

from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

from ..utils.bit_math import max_iterations
from .protocol import PairCountRule


class EfficiencyInputs(BaseModel):
    """Quantities entering η = c / (q_total + b)."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    delta1: int = Field(default=0, ge=0)
    c: int = Field(default=1, description="Classical output bits (the veto bit)")
    b: int = Field(default=0, ge=0, description="Auxiliary classical bits")
    l: Optional[int] = Field(default=None, ge=1, description="Iterations of the iterative protocol")

    @model_validator(mode="after")
    def _check_bounds(self) -> "EfficiencyInputs":
        if self.c != 1:
            raise ValueError(f"the veto outcome is a single classical bit (got c={self.c})")
        if self.l is not None and self.l > max_iterations(self.n):
            raise ValueError(
                f"l={self.l} exceeds the iteration bound {max_iterations(self.n)} for n={self.n}"
            )
        return self


class EfficiencyRow(BaseModel):
    """One row of the comparison table."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    h: int = Field(description="Pair count under the rule in force")
    h_efficiency: int = Field(description="Pair count used by the efficiency formula (ceil rule)")
    q_total: int
    eta_det: Fraction
    eta_qav6_worst: Fraction
    rule_discrepancy: bool = False

    @field_serializer("eta_det", "eta_qav6_worst")
    def _serialize_fraction(self, value: Fraction) -> str:
        return f"{value.numerator}/{value.denominator}"

    def as_record(self) -> Dict[str, Any]:
        """Flat row with exact fractions and their decimal rendering."""
        record = self.model_dump()
        record["eta_det_decimal"] = float(self.eta_det)
        record["eta_qav6_worst_decimal"] = float(self.eta_qav6_worst)
        return record


class EfficiencyTable(BaseModel):
    """Efficiency comparison across voter counts."""

    model_config = ConfigDict(frozen=True)

    delta1: int
    pair_rule: PairCountRule
    rows: List[EfficiencyRow]
    notes: List[str] = Field(default_factory=list)
