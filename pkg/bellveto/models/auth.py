"""Pydantic models for BB84-state voter signatures."""

from enum import IntEnum
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

DEFAULT_SIGNATURE_LENGTH = 256
DEFAULT_AUTH_THRESHOLD = 0.125


class BB84Symbol(IntEnum):
    """BB84 preparation state; code // 2 is the basis, code % 2 the bit."""
    ZERO = 0
    ONE = 1
    PLUS = 2
    MINUS = 3

    @property
    def basis(self) -> int:
        return int(self) // 2

    @property
    def bit(self) -> int:
        return int(self) % 2


def as_symbol_array(sequence: Any) -> np.ndarray:
    """Coerce a sequence of BB84Symbol (or codes) to a read-only int8 array."""
    if isinstance(sequence, np.ndarray):
        array = sequence.astype(np.int8, copy=True)
    else:
        array = np.array([int(s) for s in sequence], dtype=np.int8)
    if array.ndim != 1:
        raise ValueError(f"Symbol sequence must be flat, got shape {array.shape}")
    if array.size and (array.min() < 0 or array.max() > 3):
        raise ValueError("Symbol codes must lie in 0..3")
    array.flags.writeable = False
    return array


class EliminatedSignature(BaseModel):
    """Per-position state the VA's measurement rules out as the preparation state."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eliminated: np.ndarray
    basis_used: np.ndarray

    @field_validator("eliminated", mode="before")
    @classmethod
    def _coerce_eliminated(cls, value: Any) -> np.ndarray:
        return as_symbol_array(value)

    @field_validator("basis_used", mode="before")
    @classmethod
    def _coerce_basis(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=np.int8)
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def _eliminated_in_measured_basis(self) -> "EliminatedSignature":
        if self.eliminated.shape != self.basis_used.shape:
            raise ValueError("eliminated and basis_used lengths differ")
        if np.any(self.eliminated // 2 != self.basis_used):
            raise ValueError("eliminated state must lie in the measurement basis")
        return self

    def __len__(self) -> int:
        return int(self.eliminated.shape[0])


class AuthResult(BaseModel):
    """Outcome of verifying one voter's revealed sequence."""

    model_config = ConfigDict(frozen=True)

    voter: Optional[int] = None
    mismatch_rate: float = Field(ge=0.0, le=1.0)
    threshold: float = Field(ge=0.0, le=1.0)
    accepted: bool

    @model_validator(mode="after")
    def _accepted_matches_rate(self) -> "AuthResult":
        if self.accepted != (self.mismatch_rate <= self.threshold):
            raise ValueError("accepted must equal (mismatch_rate <= threshold)")
        return self
