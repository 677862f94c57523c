"""
Configuration models for the veto simulator.
Uses Pydantic Settings for unified configuration from environment variables, .env files, and CLI args.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from .auth import DEFAULT_AUTH_THRESHOLD, DEFAULT_SIGNATURE_LENGTH
from .channel import (
    DEFAULT_DECOYS_PER_HOP,
    DEFAULT_DISTURBANCE_THRESHOLD,
    AdversaryKind,
    NoiseKind,
)
from .protocol import PairCountRule, Qav6PhaseConvention

DEFAULT_SEED = 1729

# Per-invocation keys a config file may carry alongside the settings.
RUN_KEYS = frozenset({"n", "votes", "k", "out", "sweep", "grid", "n_values"})


class SimulationConfig(BaseSettings):
    """Seeds, trial counts and protocol variant."""

    model_config = SettingsConfigDict(
        env_prefix='QAV_SIM_',
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore'
    )

    seed: int = Field(default=DEFAULT_SEED, description="Master seed for every run")
    trials: int = Field(default=10000, ge=1, description="Monte Carlo trials per data point")
    workers: int = Field(default=1, ge=1, description="Worker processes for trial batches")
    backend: str = Field(default="abstract", description="abstract or photonic")
    pair_rule: PairCountRule = Field(default=PairCountRule.FLOOR, description="Bell-pair count rule")
    qav6_phase_convention: Qav6PhaseConvention = Field(
        default=Qav6PhaseConvention.CONSISTENT,
        description="Per-veto phase schedule of the iterative protocol"
    )


class ChannelDefaults(BaseSettings):
    """Default hop model."""

    model_config = SettingsConfigDict(
        env_prefix='QAV_CHANNEL_',
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore'
    )

    noise: NoiseKind = Field(default=NoiseKind.IDEAL, description="ideal, dephasing or depolarizing")
    p: float = Field(default=0.0, ge=0.0, le=1.0, description="Noise strength per hop")
    loss: float = Field(default=0.0, ge=0.0, le=1.0, description="Loss probability per hop")
    adversary: AdversaryKind = Field(default=AdversaryKind.NONE, description="Hop adversary")
    delta1: int = Field(default=DEFAULT_DECOYS_PER_HOP, ge=0, description="Decoys per hop")
    threshold: float = Field(
        default=DEFAULT_DISTURBANCE_THRESHOLD, ge=0.0, le=1.0,
        description="Pooled decoy error rate that aborts a run"
    )


class AuthDefaults(BaseSettings):
    """Voter signature settings."""

    model_config = SettingsConfigDict(
        env_prefix='QAV_AUTH_',
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore'
    )

    enabled: bool = Field(default=True, description="Authenticate voters before distribution")
    signature_length: int = Field(default=DEFAULT_SIGNATURE_LENGTH, ge=1)
    threshold: float = Field(default=DEFAULT_AUTH_THRESHOLD, ge=0.0, le=1.0)


class OutputConfig(BaseSettings):
    """Report output settings."""

    model_config = SettingsConfigDict(
        env_prefix='QAV_OUTPUT_',
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore'
    )

    format: str = Field(default="json", description="json or csv")
    reports_dir: str = Field(default="reports", description="Directory for --out paths given as bare names")


class AppConfig(BaseSettings):
    """Main application configuration."""

    model_config = SettingsConfigDict(
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore'
    )

    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    channel: ChannelDefaults = Field(default_factory=ChannelDefaults)
    auth: AuthDefaults = Field(default_factory=AuthDefaults)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @classmethod
    def from_file(cls, path: Path) -> Tuple["AppConfig", Dict[str, Any]]:
        """Layer a JSON config file over environment and .env values.

        The file may be nested by section ({"channel": {"p": 0.05}}) or flat
        with CLI flag names ({"p": 0.05, "delta1": 16, "n": 8}).

        Returns:
            Tuple of (merged config, run-level keys such as n and votes)

        Raises:
            ValueError: If the file is not a JSON object or names an unknown key
        """
        data = json.loads(Path(path).read_text(encoding='utf-8'))
        if not isinstance(data, dict):
            raise ValueError(f"Config file {path} must hold a JSON object")
        run_keys = {k: v for k, v in data.items() if k.replace("-", "_") in RUN_KEYS}
        settings = {k: v for k, v in data.items() if k not in run_keys}
        return cls().merged(settings), {k.replace("-", "_"): v for k, v in run_keys.items()}

    def merged(self, overrides: Dict[str, Any]) -> "AppConfig":
        """Copy with section or flat-key overrides applied and re-validated.

        Only values set by the environment, .env or an override count as set on
        the copy; everything else stays at its default.
        """
        sections = {
            "simulation": self.simulation.model_dump(exclude_unset=True),
            "channel": self.channel.model_dump(exclude_unset=True),
            "auth": self.auth.model_dump(exclude_unset=True),
            "output": self.output.model_dump(exclude_unset=True),
        }
        for key, value in overrides.items():
            if value is None:
                continue
            if key in sections and isinstance(value, dict):
                sections[key].update(value)
                continue
            name = key.replace("-", "_")
            section = _FLAT_KEYS.get(name)
            if section is None:
                raise ValueError(f"Unknown configuration key: {key!r}")
            sections[section][_FLAT_ALIASES.get(name, name)] = value

        return AppConfig.model_construct(
            simulation=SimulationConfig.model_validate(sections["simulation"]),
            channel=ChannelDefaults.model_validate(sections["channel"]),
            auth=AuthDefaults.model_validate(sections["auth"]),
            output=OutputConfig.model_validate(sections["output"]),
        )

    def is_set(self, section: str, key: str) -> bool:
        """True when the value came from the environment, .env, a config file or a flag."""
        return key in getattr(self, section).model_fields_set

    def flat(self) -> Dict[str, Any]:
        """Section.key → value, for display."""
        rows: Dict[str, Any] = {}
        for name in ("simulation", "channel", "auth", "output"):
            for key, value in getattr(self, name).model_dump(mode="json").items():
                rows[f"{name}.{key}"] = value
        return rows


# Flat key → owning section, matching the CLI flag names.
_FLAT_KEYS = {
    "seed": "simulation",
    "trials": "simulation",
    "workers": "simulation",
    "backend": "simulation",
    "pair_rule": "simulation",
    "qav6_phase_convention": "simulation",
    "noise": "channel",
    "p": "channel",
    "loss": "channel",
    "adversary": "channel",
    "delta1": "channel",
    "threshold": "channel",
    "auth": "auth",
    "signature_length": "auth",
    "auth_threshold": "auth",
    "format": "output",
    "reports_dir": "output",
}

_FLAT_ALIASES = {
    "auth": "enabled",
    "auth_threshold": "threshold",
}


# Global config instance (lazy-loaded)
_config: Optional[AppConfig] = None


def get_config() -> AppConfig:
    """Get or create the global configuration instance."""
    global _config
    if _config is None:
        _config = AppConfig()
    return _config


def set_config(config: Optional[AppConfig]) -> None:
    """Replace the global configuration (None resets to lazy loading)."""
    global _config
    _config = config
