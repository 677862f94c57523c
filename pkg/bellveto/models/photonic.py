"""Pydantic models for the single-photon polarization-path encoding and quantum walks."""

import math
from enum import Enum
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .quantum import TOLERANCE

# Mode labels in amplitude order: polarization ⊗ path.
PHOTON_MODES = ("H0", "H1", "V0", "V1")


def _frozen_complex(value: Any) -> np.ndarray:
    array = np.array(value, dtype=np.complex128)
    if not np.all(np.isfinite(array)):
        raise ValueError("amplitudes must be finite")
    array.flags.writeable = False
    return array


def _check_norm(array: np.ndarray) -> None:
    norm = float(np.sum(np.abs(array) ** 2))
    if abs(norm - 1.0) > TOLERANCE:
        raise ValueError(f"state is not normalized (norm² = {norm!r})")


class PhotonState(BaseModel):
    """One photon: α|H,0⟩ + β|H,1⟩ + γ|V,0⟩ + δ|V,1⟩."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> np.ndarray:
        array = _frozen_complex(value)
        if array.shape != (4,):
            raise ValueError(f"photon state needs 4 amplitudes, got shape {array.shape}")
        _check_norm(array)
        return array

    @classmethod
    def mode(cls, label: str) -> "PhotonState":
        """Single occupied mode, e.g. ``PhotonState.mode("H0")``."""
        vector = np.zeros(4, dtype=np.complex128)
        vector[PHOTON_MODES.index(label)] = 1.0
        return cls(amplitudes=vector)

    @property
    def alpha(self) -> complex:
        return complex(self.amplitudes[0])

    @property
    def beta(self) -> complex:
        return complex(self.amplitudes[1])

    @property
    def gamma(self) -> complex:
        return complex(self.amplitudes[2])

    @property
    def delta(self) -> complex:
        return complex(self.amplitudes[3])

    @property
    def cross_weight(self) -> float:
        """Population of |H,1⟩ and |V,0⟩ (outside the Φ plane)."""
        return float(abs(self.amplitudes[1]) ** 2 + abs(self.amplitudes[2]) ** 2)


class ElementKind(str, Enum):
    BEAM_SPLITTER = "beam_splitter"
    HALF_WAVE_PLATE = "half_wave_plate"
    QUARTER_WAVE_PLATE = "quarter_wave_plate"
    PHASE_SHIFTER = "phase_shifter"


class OpticalElement(BaseModel):
    """Linear-optical element acting on polarization ⊗ path.

    ``angle`` is the plate rotation α or the phase-shifter phase θ, in radians.
    ``path`` restricts a wave plate to one spatial mode; a phase shifter always
    sits in one mode.
    """

    model_config = ConfigDict(frozen=True)

    kind: ElementKind
    angle: float = 0.0
    path: Optional[int] = Field(default=None, ge=0, le=1)

    @model_validator(mode="after")
    def _check_placement(self) -> "OpticalElement":
        if not math.isfinite(self.angle):
            raise ValueError("angle must be finite")
        if self.kind == ElementKind.PHASE_SHIFTER and self.path is None:
            raise ValueError("a phase shifter must sit in path 0 or 1")
        if self.kind == ElementKind.BEAM_SPLITTER and self.path is not None:
            raise ValueError("a beam splitter acts on both paths")
        return self

    @classmethod
    def beam_splitter(cls) -> "OpticalElement":
        return cls(kind=ElementKind.BEAM_SPLITTER)

    @classmethod
    def hwp(cls, alpha: float, path: Optional[int] = None) -> "OpticalElement":
        return cls(kind=ElementKind.HALF_WAVE_PLATE, angle=alpha, path=path)

    @classmethod
    def qwp(cls, alpha: float, path: Optional[int] = None) -> "OpticalElement":
        return cls(kind=ElementKind.QUARTER_WAVE_PLATE, angle=alpha, path=path)

    @classmethod
    def phase_shifter(cls, theta: float, path: int) -> "OpticalElement":
        return cls(kind=ElementKind.PHASE_SHIFTER, angle=theta, path=path)


class CoinParams(BaseModel):
    """Parameters of the SU(2) coin e^{ip}[[e^{iq}cosθ, e^{ir}sinθ], [−e^{−ir}sinθ, e^{−iq}cosθ]]."""

    model_config = ConfigDict(frozen=True)

    p: float = 0.0
    q: float = 0.0
    r: float = 0.0
    theta: float = 0.0

    @classmethod
    def hadamard(cls) -> "CoinParams":
        """Balanced coin used as the Hadamard walk coin."""
        return cls(theta=math.pi / 4)

    @classmethod
    def identity(cls) -> "CoinParams":
        return cls()


class ShiftKind(str, Enum):
    S_MINUS_ON_A = "S_minus_on_a"  # coin |a⟩ moves l → l−1
    S_PLUS_ON_B = "S_plus_on_b"    # coin |b⟩ moves l → l+1


class WalkState(BaseModel):
    """Coin ⊗ position amplitudes on the window [l_min, l_max]; row 0 is coin |a⟩."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    l_min: int
    l_max: int
    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> np.ndarray:
        array = _frozen_complex(value)
        _check_norm(array)
        return array

    @model_validator(mode="after")
    def _check_window(self) -> "WalkState":
        if self.l_max < self.l_min:
            raise ValueError(f"empty window [{self.l_min}, {self.l_max}]")
        if self.amplitudes.shape != (2, self.width):
            raise ValueError(
                f"amplitudes must have shape (2, {self.width}), got {self.amplitudes.shape}"
            )
        return self

    @classmethod
    def localized(
        cls,
        coin: Any = (1.0, 0.0),
        position: int = 0,
        radius: int = 64
    ) -> "WalkState":
        """Walker at ``position`` with the given coin state, window ±radius around it."""
        l_min, l_max = position - radius, position + radius
        amplitudes = np.zeros((2, l_max - l_min + 1), dtype=np.complex128)
        amplitudes[:, position - l_min] = np.asarray(coin, dtype=np.complex128)
        return cls(l_min=l_min, l_max=l_max, amplitudes=amplitudes)

    @property
    def width(self) -> int:
        return self.l_max - self.l_min + 1

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.l_min, self.l_max + 1)
