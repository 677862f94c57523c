"""Pydantic models for the insecure quantum channel between hops."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Per-decoy error rate an intercept-resend attacker induces.
INTERCEPT_RESEND_DISTURBANCE = 0.25

DEFAULT_DISTURBANCE_THRESHOLD = 0.125
DEFAULT_DECOYS_PER_HOP = 8


class NoiseKind(str, Enum):
    IDEAL = "ideal"
    DEPHASING = "dephasing"
    DEPOLARIZING = "depolarizing"


class AdversaryKind(str, Enum):
    NONE = "none"
    INTERCEPT_RESEND = "intercept_resend"


class NoiseModel(BaseModel):
    """Stochastic Pauli noise applied to a travel qubit on every hop."""

    model_config = ConfigDict(frozen=True)

    kind: NoiseKind = NoiseKind.IDEAL
    p: float = Field(default=0.0, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _ideal_has_no_strength(self) -> "NoiseModel":
        if self.kind == NoiseKind.IDEAL and self.p != 0.0:
            raise ValueError(f"ideal noise takes no strength (got p={self.p})")
        return self

    @property
    def is_noise_free(self) -> bool:
        return self.kind == NoiseKind.IDEAL or self.p == 0.0


class DecoyConfig(BaseModel):
    """Decoy-state eavesdropping check parameters."""

    model_config = ConfigDict(frozen=True)

    delta1: int = Field(default=DEFAULT_DECOYS_PER_HOP, ge=0, description="Decoys per hop")
    disturbance_threshold: float = Field(default=DEFAULT_DISTURBANCE_THRESHOLD, ge=0.0, le=1.0)


class ChannelConfig(BaseModel):
    """Noise, loss, adversary and decoy parameters governing every hop."""

    model_config = ConfigDict(frozen=True)

    noise: NoiseModel = Field(default_factory=NoiseModel)
    loss_probability: float = Field(default=0.0, ge=0.0, le=1.0)
    adversary: AdversaryKind = AdversaryKind.NONE
    decoy: DecoyConfig = Field(default_factory=DecoyConfig)

    @model_validator(mode="after")
    def _threshold_separates_attack(self) -> "ChannelConfig":
        if self.adversary == AdversaryKind.INTERCEPT_RESEND and self.decoy.delta1 > 0:
            threshold = self.decoy.disturbance_threshold
            if not 0.0 < threshold < INTERCEPT_RESEND_DISTURBANCE:
                raise ValueError(
                    f"disturbance threshold {threshold} must lie strictly between 0 and "
                    f"{INTERCEPT_RESEND_DISTURBANCE} to detect intercept-resend"
                )
        return self

    @classmethod
    def ideal(cls, delta1: int = DEFAULT_DECOYS_PER_HOP) -> "ChannelConfig":
        return cls(decoy=DecoyConfig(delta1=delta1))

    @property
    def is_noise_free(self) -> bool:
        """No stochastic noise, loss or adversary on any hop."""
        return (
            self.noise.is_noise_free
            and self.loss_probability == 0.0
            and self.adversary == AdversaryKind.NONE
        )


class HopReport(BaseModel):
    """Decoy statistics and loss flag for one hop of one travel qubit.

    Hop i carries the qubit into voter V_i; hop n returns it to the VA.
    """

    model_config = ConfigDict(frozen=True)

    hop_index: int = Field(ge=0)
    pair_index: Optional[int] = Field(default=None, ge=1)
    decoys_sent: int = Field(default=0, ge=0)
    decoy_errors: int = Field(default=0, ge=0)
    qubit_lost: bool = False

    @model_validator(mode="after")
    def _errors_within_sent(self) -> "HopReport":
        if self.decoy_errors > self.decoys_sent:
            raise ValueError(
                f"decoy_errors ({self.decoy_errors}) exceeds decoys_sent ({self.decoys_sent})"
            )
        return self
