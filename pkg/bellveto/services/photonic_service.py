"""
Photonic realization of one Bell pair in a single photon.

Polarization carries the home qubit and the spatial path carries the travel
qubit: |H,0⟩ ≡ |00⟩, |H,1⟩ ≡ |01⟩, |V,0⟩ ≡ |10⟩, |V,1⟩ ≡ |11⟩.
"""

import logging
import math
from typing import Dict, List, Tuple

import numpy as np

from ..models.channel import ChannelConfig
from ..models.photonic import OpticalElement, PhotonState
from ..models.quantum import BELL_ORDER, BellOutcome, PureState
from ..utils.optics import apply_elements
from ..utils.quantum_core import TRAVEL_QUBIT
from ..utils.random_source import RandomSource
from .channel_service import transmit

logger = logging.getLogger(__name__)

# Largest |H,1⟩ + |V,0⟩ population accepted as a valid protocol state.
CROSS_SUPPORT_TOLERANCE = 1e-9

BELL_PREPARATION: List[OpticalElement] = [
    OpticalElement.beam_splitter(),
    OpticalElement.hwp(math.pi / 4, path=1),
]

# Interferometric Bell analyzer: HWP(π/4) in the returning mode, then recombine.
BELL_ANALYZER: List[OpticalElement] = [
    OpticalElement.hwp(math.pi / 4, path=1),
    OpticalElement.beam_splitter(),
]


def prepare_bell_photonic() -> PhotonState:
    """|H,0⟩ → BS → HWP(π/4) in path 1 → (|H,0⟩ + |V,1⟩)/√2."""
    return apply_elements(PhotonState.mode("H0"), BELL_PREPARATION)


def to_logical(photon: PhotonState) -> PureState:
    """Relabel polarization as qubit 0 and path as qubit 1."""
    return PureState(num_qubits=2, amplitudes=photon.amplitudes)


def from_logical(state: PureState) -> PhotonState:
    if state.num_qubits != 2:
        raise ValueError(f"A photon encodes 2 qubits, got {state.num_qubits}")
    return PhotonState(amplitudes=state.amplitudes)


def _require_phi_plane(photon: PhotonState) -> None:
    if photon.cross_weight > CROSS_SUPPORT_TOLERANCE:
        raise ValueError(
            f"photon has {photon.cross_weight:.3e} population in |H,1⟩/|V,0⟩; "
            "not a valid protocol state"
        )


def veto_phase(a: int) -> float:
    if a < 1:
        raise ValueError(f"Pair index must be ≥ 1 (got {a})")
    return math.pi / 2 ** (a - 1)


def apply_veto_photonic(photon: PhotonState, a: int, strict: bool = True) -> PhotonState:
    """Phase shifter at π/2^{a-1} in path 1, the mode travelling through the voters.

    Args:
        photon: Current photon state
        a: Pair index
        strict: Reject states with |H,1⟩/|V,0⟩ support

    Raises:
        ValueError: If ``strict`` and the photon leaves the Φ plane
    """
    if strict:
        _require_phi_plane(photon)
    return apply_elements(photon, [OpticalElement.phase_shifter(veto_phase(a), path=1)])


def detector_intensities(photon: PhotonState) -> np.ndarray:
    """Click probabilities of the four output ports (H0, H1, V0, V1) after the analyzer."""
    analyzed = apply_elements(photon, BELL_ANALYZER)
    intensities = np.abs(analyzed.amplitudes) ** 2
    return intensities / intensities.sum()


def _outcome_cdf(photon: PhotonState, resolve_polarization: bool) -> Tuple[np.ndarray, list]:
    intensities = detector_intensities(photon)
    if resolve_polarization:
        # Ports H0, H1, V0, V1 correspond to Φ⁺, Φ⁻, Ψ⁺, Ψ⁻.
        return np.cumsum(intensities), BELL_ORDER
    _require_phi_plane(photon)
    path0 = intensities[0] + intensities[2]
    return np.array([path0, 1.0]), [BellOutcome.PHI_PLUS, BellOutcome.PHI_MINUS]


def bell_measure_photonic(
    photon: PhotonState,
    rng: RandomSource,
    resolve_polarization: bool = False
) -> BellOutcome:
    """Interferometric Bell measurement with single-photon detectors.

    A click in path 0 (the mode kept by the VA) reads Φ⁺ and in path 1 reads Φ⁻.
    With ``resolve_polarization`` the detectors also split H from V, which
    identifies Ψ± as well; otherwise Φ-plane support is required.

    Raises:
        ValueError: If not resolving polarization and the photon leaves the Φ plane
    """
    cdf, labels = _outcome_cdf(photon, resolve_polarization)
    index = int(np.searchsorted(cdf, rng.uniform(), side="right"))
    return labels[min(index, len(labels) - 1)]


def sample_photonic_outcomes(
    photon: PhotonState,
    rng: RandomSource,
    shots: int,
    resolve_polarization: bool = False
) -> Dict[BellOutcome, int]:
    """Detector statistics over ``shots`` identically prepared photons."""
    if shots < 1:
        raise ValueError(f"shots must be ≥ 1 (got {shots})")
    cdf, labels = _outcome_cdf(photon, resolve_polarization)
    indices = np.minimum(np.searchsorted(cdf, rng.uniforms(shots), side="right"), len(labels) - 1)
    counts = np.bincount(indices, minlength=len(labels))
    return {label: int(counts[i]) for i, label in enumerate(labels)}


class PhotonicBackend:
    """Protocol backend carrying each Bell pair as one photon."""

    name = "photonic"

    def prepare(self) -> PhotonState:
        return prepare_bell_photonic()

    def apply_veto(self, state: PhotonState, a: int, strict: bool = True) -> PhotonState:
        return apply_veto_photonic(state, a, strict=strict)

    def transit(
        self, state: PhotonState, channel: ChannelConfig, rng: RandomSource
    ) -> Tuple[PhotonState, bool]:
        logical, lost = transmit(to_logical(state), TRAVEL_QUBIT, channel, rng)
        return from_logical(logical), lost

    def logical(self, state: PhotonState) -> PureState:
        return to_logical(state)

    def measure(self, state: PhotonState, rng: RandomSource) -> BellOutcome:
        return bell_measure_photonic(state, rng, resolve_polarization=True)
