"""
Tests for the hop model: noise, loss, intercept-resend and decoy checks.
"""

import math

import numpy as np
import pytest

from bellveto.models.channel import (
    AdversaryKind,
    ChannelConfig,
    DecoyConfig,
    HopReport,
    NoiseKind,
    NoiseModel,
)
from bellveto.models.protocol import ProtocolParams, VoteVector
from bellveto.models.quantum import BellOutcome
from bellveto.services.channel_service import (
    apply_noise,
    decoy_round,
    pooled_error_rate,
    should_abort,
    transmit,
)
from bellveto.services.protocol_service import ProtocolService
from bellveto.utils.quantum_core import TRAVEL_QUBIT, bell_measure, bell_phi_plus, fidelity
from bellveto.utils.random_source import RandomSource


def _dephasing(p, delta1=0):
    return ChannelConfig(
        noise=NoiseModel(kind=NoiseKind.DEPHASING, p=p),
        decoy=DecoyConfig(delta1=delta1),
    )


class TestChannelConfig:

    def test_ideal_noise_takes_no_strength(self):
        with pytest.raises(ValueError):
            NoiseModel(kind=NoiseKind.IDEAL, p=0.1)

    def test_threshold_must_separate_attack(self):
        with pytest.raises(ValueError):
            ChannelConfig(
                adversary=AdversaryKind.INTERCEPT_RESEND,
                decoy=DecoyConfig(delta1=8, disturbance_threshold=0.3),
            )

    def test_zero_strength_noise_is_noise_free(self):
        assert _dephasing(0.0).is_noise_free

    def test_hop_report_errors_bounded(self):
        with pytest.raises(ValueError):
            HopReport(hop_index=0, decoys_sent=2, decoy_errors=3)


class TestTransmit:

    def test_ideal_channel_is_identity(self):
        state = bell_phi_plus()
        out, lost = transmit(state, TRAVEL_QUBIT, ChannelConfig.ideal(), RandomSource(1))
        assert out is state
        assert lost is False

    def test_certain_loss(self):
        _, lost = transmit(bell_phi_plus(), TRAVEL_QUBIT, ChannelConfig(loss_probability=1.0), RandomSource(1))
        assert lost

    def test_travel_qubit_out_of_range(self):
        with pytest.raises(ValueError):
            transmit(bell_phi_plus(), 2, ChannelConfig.ideal(), RandomSource(1))

    def test_full_dephasing_flips_phase(self):
        noise = NoiseModel(kind=NoiseKind.DEPHASING, p=1.0)
        out = apply_noise(bell_phi_plus(), TRAVEL_QUBIT, noise, RandomSource(1))
        assert bell_measure(out, RandomSource(2)) == BellOutcome.PHI_MINUS

    def test_dephasing_noise_law(self):
        # k = 0 over 5 hops: Φ⁻ iff an odd number of Z flips.
        p, hops, trials = 0.05, 5, 100_000
        channel = _dephasing(p)
        rng = RandomSource(12)
        minus = 0
        for _ in range(trials):
            state = bell_phi_plus()
            for _ in range(hops):
                state, _ = transmit(state, TRAVEL_QUBIT, channel, rng)
            minus += bell_measure(state, rng) == BellOutcome.PHI_MINUS
        expected = (1 - (1 - 2 * p) ** hops) / 2
        assert minus / trials == pytest.approx(expected, abs=0.005)

    def test_intercept_resend_disturbs_pair(self):
        channel = ChannelConfig(adversary=AdversaryKind.INTERCEPT_RESEND)
        rng = RandomSource(4)
        fidelities = [
            fidelity(transmit(bell_phi_plus(), TRAVEL_QUBIT, channel, rng)[0], bell_phi_plus())
            for _ in range(200)
        ]
        np.testing.assert_allclose(fidelities, 0.5, atol=1e-12)


class TestDecoys:

    def test_no_adversary_no_errors(self):
        rng = RandomSource(1)
        reports = [decoy_round(h, DecoyConfig(delta1=16), AdversaryKind.NONE, rng) for h in range(500)]
        assert pooled_error_rate(reports) == 0.0
        assert not should_abort(reports, DecoyConfig())

    def test_zero_decoys(self):
        report = decoy_round(0, DecoyConfig(delta1=0), AdversaryKind.INTERCEPT_RESEND, RandomSource(1))
        assert report.decoys_sent == 0

    def test_intercept_resend_statistics(self):
        trials, delta1 = 100_000, 16
        rng = RandomSource(2718)
        config = DecoyConfig(delta1=delta1)
        errors = np.empty(trials, dtype=int)
        for i in range(trials):
            errors[i] = decoy_round(0, config, AdversaryKind.INTERCEPT_RESEND, rng).decoy_errors
        assert errors.sum() / (trials * delta1) == pytest.approx(0.25, abs=0.01)
        assert np.mean(errors > 0) == pytest.approx(1 - 0.75 ** delta1, abs=0.01)

    def test_dephasing_disturbs_hadamard_decoys_only(self):
        p, rounds = 0.2, 20_000
        rng = RandomSource(8)
        noise = NoiseModel(kind=NoiseKind.DEPHASING, p=p)
        reports = [decoy_round(0, DecoyConfig(delta1=8), AdversaryKind.NONE, rng, noise=noise)
                   for _ in range(rounds)]
        se = math.sqrt((p / 2) * (1 - p / 2) / (rounds * 8))
        assert pooled_error_rate(reports) == pytest.approx(p / 2, abs=4 * se)

    def test_pooled_rate_and_abort(self):
        reports = [
            HopReport(hop_index=0, decoys_sent=8, decoy_errors=1),
            HopReport(hop_index=1, decoys_sent=8, decoy_errors=3),
        ]
        assert pooled_error_rate(reports) == pytest.approx(0.25)
        assert should_abort(reports, DecoyConfig(disturbance_threshold=0.125))

    def test_lost_report_aborts(self):
        assert should_abort([HopReport(hop_index=0, qubit_lost=True)], DecoyConfig())


class TestProtocolUnderAttack:

    def test_no_false_aborts(self):
        service = ProtocolService(ProtocolParams(n=4, authenticate=False), ChannelConfig.ideal(delta1=16))
        for i in range(300):
            votes = VoteVector.from_int(i % 16, 4)
            assert not service.run(votes, RandomSource.derive(5, i)).aborted

    def test_intercept_resend_aborts(self):
        channel = ChannelConfig(adversary=AdversaryKind.INTERCEPT_RESEND, decoy=DecoyConfig(delta1=16))
        service = ProtocolService(ProtocolParams(n=4, authenticate=False), channel)
        aborted = sum(
            service.run(VoteVector(bits=[0] * 4), RandomSource.derive(6, i)).aborted
            for i in range(200)
        )
        assert aborted / 200 > 0.99

    def test_depolarizing_faults_do_not_count_as_vetoes(self):
        channel = ChannelConfig(
            noise=NoiseModel(kind=NoiseKind.DEPOLARIZING, p=0.3),
            decoy=DecoyConfig(delta1=0),
        )
        service = ProtocolService(ProtocolParams(n=3, authenticate=False), channel)
        faults = 0
        for i in range(300):
            result = service.run(VoteVector(bits=[0] * 3), RandomSource.derive(7, i))
            assert not result.aborted
            faults += result.channel_faults
            assert result.veto_detected == any(o == BellOutcome.PHI_MINUS for o in result.outcomes)
        assert faults > 0
