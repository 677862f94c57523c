"""Pydantic models for dense few-qubit states and gates."""

from enum import Enum
from typing import Any, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Tolerance for normalization and unitarity checks.
TOLERANCE = 1e-10

MAX_QUBITS = 4


def _as_frozen_complex(value: Any) -> np.ndarray:
    array = np.array(value, dtype=np.complex128)
    array.flags.writeable = False
    return array


class BellOutcome(str, Enum):
    """Bell-basis measurement outcome."""
    PHI_PLUS = "PhiPlus"
    PHI_MINUS = "PhiMinus"
    PSI_PLUS = "PsiPlus"
    PSI_MINUS = "PsiMinus"

    @property
    def is_phi(self) -> bool:
        return self in (BellOutcome.PHI_PLUS, BellOutcome.PHI_MINUS)


# Fixed basis order used for decomposition, sampling and serialization.
BELL_ORDER: List[BellOutcome] = [
    BellOutcome.PHI_PLUS,
    BellOutcome.PHI_MINUS,
    BellOutcome.PSI_PLUS,
    BellOutcome.PSI_MINUS,
]


class MeasurementBasis(str, Enum):
    """Single-qubit measurement basis."""
    COMPUTATIONAL = "computational"
    HADAMARD = "hadamard"


class PureState(BaseModel):
    """Normalized amplitude vector; qubit 0 is the most significant bit of the index."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    num_qubits: int = Field(ge=1, le=MAX_QUBITS)
    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _coerce_amplitudes(cls, value: Any) -> np.ndarray:
        array = _as_frozen_complex(value)
        if array.ndim != 1:
            raise ValueError(f"amplitudes must be a flat vector, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise ValueError("amplitudes must be finite")
        return array

    @model_validator(mode="after")
    def _check_shape_and_norm(self) -> "PureState":
        expected = 2 ** self.num_qubits
        if self.amplitudes.shape[0] != expected:
            raise ValueError(
                f"{self.num_qubits} qubits need {expected} amplitudes, "
                f"got {self.amplitudes.shape[0]}"
            )
        norm = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm - 1.0) > TOLERANCE:
            raise ValueError(f"state is not normalized (norm² = {norm!r})")
        return self

    @property
    def dimension(self) -> int:
        return 2 ** self.num_qubits

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


class GateMatrix(BaseModel):
    """Unitary acting on one qubit (2×2) or two qubits (4×4)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _coerce_entries(cls, value: Any) -> np.ndarray:
        array = _as_frozen_complex(value)
        if array.shape not in ((2, 2), (4, 4)):
            raise ValueError(f"gate must be 2×2 or 4×4, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise ValueError("gate entries must be finite")
        identity = np.eye(array.shape[0], dtype=np.complex128)
        if not np.allclose(array.conj().T @ array, identity, atol=TOLERANCE, rtol=0.0):
            raise ValueError("gate is not unitary")
        return array

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def __matmul__(self, other: "GateMatrix") -> "GateMatrix":
        return GateMatrix(entries=self.entries @ other.entries)

    def allclose(self, other: "GateMatrix", atol: float = TOLERANCE) -> bool:
        return self.dim == other.dim and bool(
            np.allclose(self.entries, other.entries, atol=atol, rtol=0.0)
        )
