"""Coined discrete-time quantum walk on a line (coin ⊗ position)."""

from typing import Union

import numpy as np

from ..models.photonic import CoinParams, ShiftKind, WalkState
from ..models.quantum import GateMatrix
from .optics import coin_matrix

CoinLike = Union[CoinParams, GateMatrix]


def _coin_entries(coin: CoinLike) -> np.ndarray:
    if isinstance(coin, CoinParams):
        return coin_matrix(coin).entries
    if coin.dim != 2:
        raise ValueError(f"coin must be 2×2, got {coin.dim}×{coin.dim}")
    return coin.entries


def _with_amplitudes(walk: WalkState, amplitudes: np.ndarray) -> WalkState:
    return WalkState(l_min=walk.l_min, l_max=walk.l_max, amplitudes=amplitudes)


def apply_coin(walk: WalkState, coin: CoinLike) -> WalkState:
    """Coin unitary on the coin factor at every position."""
    return _with_amplitudes(walk, _coin_entries(coin) @ walk.amplitudes)


def apply_shift(walk: WalkState, shift: ShiftKind) -> WalkState:
    """Conditional shift: S₋ᵃ moves coin |a⟩ left, S₊ᵇ moves coin |b⟩ right.

    Raises:
        ValueError: If a nonzero amplitude would leave the window
    """
    amplitudes = np.array(walk.amplitudes)
    if shift == ShiftKind.S_MINUS_ON_A:
        if amplitudes[0, 0] != 0:
            raise ValueError(f"walk overflows the window at l_min={walk.l_min}")
        amplitudes[0, :-1] = amplitudes[0, 1:]
        amplitudes[0, -1] = 0
    else:
        if amplitudes[1, -1] != 0:
            raise ValueError(f"walk overflows the window at l_max={walk.l_max}")
        amplitudes[1, 1:] = amplitudes[1, :-1]
        amplitudes[1, 0] = 0
    return _with_amplitudes(walk, amplitudes)


def dtqw_step(walk: WalkState, coin: CoinLike, shift: ShiftKind) -> WalkState:
    """Coin on every position followed by one conditional shift."""
    return apply_shift(apply_coin(walk, coin), shift)


def full_step(walk: WalkState, coin: CoinLike) -> WalkState:
    """Coin, then S₋ᵃ, then S₊ᵇ."""
    moved = dtqw_step(walk, coin, ShiftKind.S_MINUS_ON_A)
    return apply_shift(moved, ShiftKind.S_PLUS_ON_B)


def run_walk(walk: WalkState, coin: CoinLike, steps: int) -> WalkState:
    if steps < 0:
        raise ValueError(f"steps must be ≥ 0 (got {steps})")
    for _ in range(steps):
        walk = full_step(walk, coin)
    return walk


def position_distribution(walk: WalkState) -> np.ndarray:
    """Probability per position in the window, summed over the coin."""
    return np.sum(np.abs(walk.amplitudes) ** 2, axis=0)


def dense_walk_operator(coin: CoinLike, width: int) -> np.ndarray:
    """One full step as a dense (2·width)×(2·width) matrix, index = coin·width + site.

    Sites that would leave the window are dropped, so the matrix is only
    unitary on states that stay inside it.
    """
    identity = np.eye(width, dtype=np.complex128)
    coin_op = np.kron(_coin_entries(coin), identity)

    left = np.eye(width, k=1, dtype=np.complex128)
    right = np.eye(width, k=-1, dtype=np.complex128)
    a_proj = np.diag([1.0, 0.0]).astype(np.complex128)
    b_proj = np.diag([0.0, 1.0]).astype(np.complex128)

    s_minus = np.kron(a_proj, left) + np.kron(b_proj, identity)
    s_plus = np.kron(b_proj, right) + np.kron(a_proj, identity)
    return s_plus @ s_minus @ coin_op
