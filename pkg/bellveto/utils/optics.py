"""
Jones-calculus matrices for the linear-optical element set.

Photon amplitudes are ordered (|H,0⟩, |H,1⟩, |V,0⟩, |V,1⟩), i.e. polarization ⊗ path
with polarization as the more significant factor. Every 4×4 action is built as a
Kronecker product of a 2×2 polarization (Jones) operator and a 2×2 path operator.
"""

from typing import Iterable

import numpy as np

from ..models.photonic import CoinParams, ElementKind, OpticalElement, PhotonState
from ..models.quantum import GateMatrix

_SQRT_HALF = 1.0 / np.sqrt(2.0)

BEAM_SPLITTER = np.array([[1, 1], [1, -1]], dtype=np.complex128) * _SQRT_HALF

_I2 = np.eye(2, dtype=np.complex128)
_PATH_PROJECTORS = (
    np.diag([1.0, 0.0]).astype(np.complex128),
    np.diag([0.0, 1.0]).astype(np.complex128),
)


def _rotation(alpha: float) -> np.ndarray:
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c, s], [-s, c]], dtype=np.complex128)


def _retarder(alpha: float, retardation: float) -> np.ndarray:
    """Wave plate with fast axis at ``alpha`` and the given retardation."""
    return _rotation(-alpha) @ np.diag([1.0, np.exp(1j * retardation)]) @ _rotation(alpha)


def hwp_jones(alpha: float) -> np.ndarray:
    """[[cos 2α, sin 2α], [sin 2α, −cos 2α]]."""
    c, s = np.cos(2 * alpha), np.sin(2 * alpha)
    return np.array([[c, s], [s, -c]], dtype=np.complex128)


def qwp_jones(alpha: float) -> np.ndarray:
    """Quarter-wave plate (retardation π/2) at rotation angle α."""
    return _retarder(alpha, np.pi / 2)


def jones_matrix(element: OpticalElement) -> GateMatrix:
    """2×2 polarization action of a wave plate.

    Raises:
        ValueError: For elements that do not act on polarization
    """
    if element.kind == ElementKind.HALF_WAVE_PLATE:
        return GateMatrix(entries=hwp_jones(element.angle))
    if element.kind == ElementKind.QUARTER_WAVE_PLATE:
        return GateMatrix(entries=qwp_jones(element.angle))
    raise ValueError(f"{element.kind.value} has no polarization Jones matrix")


def _polarization_in_path(jones: np.ndarray, path) -> np.ndarray:
    if path is None:
        return np.kron(jones, _I2)
    return np.kron(jones, _PATH_PROJECTORS[path]) + np.kron(_I2, _PATH_PROJECTORS[1 - path])


def element_action(element: OpticalElement) -> GateMatrix:
    """4×4 unitary of an element on polarization ⊗ path.

    Raises:
        ValueError: If the resulting matrix is not unitary
    """
    if element.kind == ElementKind.BEAM_SPLITTER:
        matrix = np.kron(_I2, BEAM_SPLITTER)
    elif element.kind == ElementKind.PHASE_SHIFTER:
        phases = np.ones(2, dtype=np.complex128)
        phases[element.path] = np.exp(1j * element.angle)
        matrix = np.kron(_I2, np.diag(phases))
    else:
        matrix = _polarization_in_path(jones_matrix(element).entries, element.path)
    return GateMatrix(entries=matrix)


def apply_element(photon: PhotonState, element: OpticalElement) -> PhotonState:
    return PhotonState(amplitudes=element_action(element).entries @ photon.amplitudes)


def apply_elements(photon: PhotonState, elements: Iterable[OpticalElement]) -> PhotonState:
    """Send the photon through ``elements`` in order."""
    for element in elements:
        photon = apply_element(photon, element)
    return photon


def coin_matrix(params: CoinParams) -> GateMatrix:
    """General SU(2) coin with a global phase e^{ip}."""
    c, s = np.cos(params.theta), np.sin(params.theta)
    matrix = np.exp(1j * params.p) * np.array(
        [
            [np.exp(1j * params.q) * c, np.exp(1j * params.r) * s],
            [-np.exp(-1j * params.r) * s, np.exp(-1j * params.q) * c],
        ],
        dtype=np.complex128,
    )
    return GateMatrix(entries=matrix)


def waveplate_coin(alpha_q1: float, alpha_h: float, alpha_q2: float) -> GateMatrix:
    """Coin stage QWP(α_q1) → HWP(α_h) → QWP(α_q2) as one Jones matrix."""
    return GateMatrix(entries=qwp_jones(alpha_q2) @ hwp_jones(alpha_h) @ qwp_jones(alpha_q1))
