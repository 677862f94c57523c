"""BB84-state quantum digital signature for voter eligibility."""

import logging
from typing import Any, Collection, List

import numpy as np

from ..models.auth import (
    DEFAULT_AUTH_THRESHOLD,
    DEFAULT_SIGNATURE_LENGTH,
    AuthResult,
    EliminatedSignature,
    as_symbol_array,
)
from ..utils.random_source import RandomSource

logger = logging.getLogger(__name__)


def voter_generate(length: int, rng: RandomSource) -> np.ndarray:
    """Uniformly random BB84 symbol codes the voter keeps as its secret sequence.

    Raises:
        ValueError: If length < 1
    """
    if length < 1:
        raise ValueError(f"Signature length must be ≥ 1 (got {length})")
    return as_symbol_array(rng.generator.integers(0, 4, size=length))


def forge(length: int, rng: RandomSource) -> np.ndarray:
    """An impostor's reveal: a uniform guess at someone else's sequence."""
    return voter_generate(length, rng)


def va_measure(sequence: Any, rng: RandomSource) -> EliminatedSignature:
    """Measure every transmitted symbol in a random basis and record the excluded state.

    A matching basis reproduces the prepared bit; a conjugate basis gives a uniform
    bit. The eliminated state is the orthogonal partner of the observed outcome.
    """
    codes = as_symbol_array(sequence)
    count = codes.shape[0]
    basis = rng.bits(count).astype(np.int8)
    random_bits = rng.bits(count).astype(np.int8)
    outcome = np.where(basis == codes // 2, codes % 2, random_bits)
    return EliminatedSignature(eliminated=basis * 2 + (1 - outcome), basis_used=basis)


def verify(
    revealed: Any,
    sig: EliminatedSignature,
    threshold: float = DEFAULT_AUTH_THRESHOLD
) -> AuthResult:
    """Compare a revealed sequence against the eliminated signature.

    A position mismatches when the revealed symbol is the very state the VA
    ruled out.

    Raises:
        ValueError: If the lengths differ
    """
    codes = as_symbol_array(revealed)
    if codes.shape[0] != len(sig):
        raise ValueError(
            f"Revealed sequence has {codes.shape[0]} symbols, signature has {len(sig)}"
        )
    rate = float(np.mean(codes == sig.eliminated)) if codes.shape[0] else 0.0
    return AuthResult(mismatch_rate=rate, threshold=threshold, accepted=rate <= threshold)


class AuthService:
    """Runs the signature exchange for every voter before qubit distribution."""

    def __init__(
        self,
        signature_length: int = DEFAULT_SIGNATURE_LENGTH,
        threshold: float = DEFAULT_AUTH_THRESHOLD
    ):
        """Initialize auth service.

        Args:
            signature_length: BB84 symbols per signature
            threshold: Maximum accepted mismatch rate
        """
        if signature_length < 1:
            raise ValueError(f"Signature length must be ≥ 1 (got {signature_length})")
        self.signature_length = signature_length
        self.threshold = threshold

    def authenticate_voter(
        self,
        voter: int,
        rng: RandomSource,
        impostor: bool = False
    ) -> AuthResult:
        """Register, measure and verify one voter.

        Args:
            voter: Voter index
            rng: Run-local random source
            impostor: The revealing party does not hold the genuine sequence
        """
        sequence = voter_generate(self.signature_length, rng)
        signature = va_measure(sequence, rng)
        revealed = forge(self.signature_length, rng) if impostor else sequence
        result = verify(revealed, signature, self.threshold)
        return result.model_copy(update={"voter": voter})

    def authenticate(
        self,
        voter_count: int,
        rng: RandomSource,
        impostors: Collection[int] = ()
    ) -> List[AuthResult]:
        """Authenticate voters V_0..V_{n-1}.

        Returns:
            One AuthResult per voter, in voter order
        """
        results = [
            self.authenticate_voter(i, rng, impostor=i in impostors)
            for i in range(voter_count)
        ]
        rejected = [r.voter for r in results if not r.accepted]
        if rejected:
            logger.info("Authentication rejected voters %s", rejected)
        return results
