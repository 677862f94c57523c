"""
Tests for BB84-state voter signatures.
"""

import numpy as np
import pytest

from bellveto.models.auth import AuthResult, BB84Symbol, EliminatedSignature, as_symbol_array
from bellveto.services.auth_service import AuthService, forge, va_measure, verify, voter_generate
from bellveto.utils.random_source import RandomSource


class TestSymbols:

    def test_basis_and_bit(self):
        assert (BB84Symbol.MINUS.basis, BB84Symbol.MINUS.bit) == (1, 1)
        assert (BB84Symbol.ONE.basis, BB84Symbol.ONE.bit) == (0, 1)

    def test_invalid_codes(self):
        with pytest.raises(ValueError):
            as_symbol_array([0, 4])

    def test_eliminated_must_lie_in_measured_basis(self):
        with pytest.raises(ValueError):
            EliminatedSignature(eliminated=[BB84Symbol.PLUS], basis_used=[0])


class TestSignature:

    def test_generate_length(self):
        assert voter_generate(256, RandomSource(1)).shape == (256,)

    def test_generate_rejects_empty(self):
        with pytest.raises(ValueError):
            voter_generate(0, RandomSource(1))

    def test_matching_basis_eliminates_orthogonal_state(self):
        sequence = [BB84Symbol.ZERO] * 64
        signature = va_measure(sequence, RandomSource(3))
        z_positions = signature.basis_used == 0
        assert np.all(signature.eliminated[z_positions] == BB84Symbol.ONE)

    def test_generated_symbols_are_uniform(self):
        counts = np.bincount(voter_generate(100_000, RandomSource(17)), minlength=4)
        np.testing.assert_allclose(counts / 100_000, [0.25] * 4, atol=0.006)

    def test_conjugate_basis_eliminates_plus_or_minus_evenly(self):
        sequence = [BB84Symbol.ZERO] * 20_000
        signature = va_measure(sequence, RandomSource(5))
        x_eliminated = signature.eliminated[signature.basis_used == 1]
        assert x_eliminated.size > 9_000
        assert set(np.unique(x_eliminated).tolist()) <= {int(BB84Symbol.PLUS), int(BB84Symbol.MINUS)}
        assert np.mean(x_eliminated == BB84Symbol.PLUS) == pytest.approx(0.5, abs=0.01)
        assert np.mean(x_eliminated == BB84Symbol.MINUS) == pytest.approx(0.5, abs=0.01)

    def test_length_mismatch(self):
        signature = va_measure(voter_generate(8, RandomSource(1)), RandomSource(2))
        with pytest.raises(ValueError):
            verify(voter_generate(9, RandomSource(3)), signature)

    def test_honest_voters_never_mismatch(self):
        for seed in range(200):
            rng = RandomSource(seed)
            sequence = voter_generate(256, rng)
            result = verify(sequence, va_measure(sequence, rng))
            assert result.mismatch_rate == 0.0
            assert result.accepted

    def test_forgers_rejected(self):
        service = AuthService(signature_length=256, threshold=0.125)
        trials = 10_000
        rejected = 0
        rates = []
        for i in range(trials):
            result = service.authenticate_voter(0, RandomSource.derive(99, i), impostor=True)
            rejected += not result.accepted
            rates.append(result.mismatch_rate)
        assert rejected / trials > 0.999
        assert np.mean(rates) == pytest.approx(0.25, abs=0.005)

    def test_forge_is_uniform_guess(self):
        assert forge(16, RandomSource(1)).shape == (16,)

    def test_authenticate_returns_one_result_per_voter(self):
        results = AuthService().authenticate(5, RandomSource(4), impostors={1})
        assert [r.voter for r in results] == list(range(5))
        assert [r.accepted for r in results] == [True, False, True, True, True]

    def test_accepted_flag_must_match_rate(self):
        with pytest.raises(ValueError):
            AuthResult(mismatch_rate=0.3, threshold=0.125, accepted=True)
