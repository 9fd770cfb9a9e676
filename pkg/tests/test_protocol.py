"""Protocol engine: params, oracle, encoding, stages, full sessions."""

import json
import math

import numpy as np
import pytest

from certbit.adversary import ClassicalFlip, Honest
from certbit.protocol import (
    DEFAULT_ENCODING,
    Declaration,
    EncodingRule,
    IdealCommitmentOracle,
    ProtocolParams,
    ReductionScenario,
    Stage,
    Verdict,
    default_scenario,
    draw_challenge,
    encode_spins,
    honest_declarations,
    run_session,
    spin_labels,
    verify_reveal,
    verify_tested,
)
from certbit.quantum import Basis, SpinLabel, spin_state
from certbit.spacetime import Event, Message, validate_schedule


class TestProtocolParams:
    def test_ratio_enforced(self):
        with pytest.raises(ValueError, match="4\\*m"):
            ProtocolParams(n0=8, m=4)

    def test_ratio_relaxed_for_tests(self):
        params = ProtocolParams(n0=3, m=2, strict=False)
        assert params.n_tested == 1

    def test_m_positive(self):
        with pytest.raises(ValueError, match="m must be"):
            ProtocolParams(n0=8, m=0)

    def test_knob_range(self):
        with pytest.raises(ValueError, match="flip_probability"):
            ProtocolParams(n0=64, m=16, flip_probability=1.5)

    def test_epsilon_triple(self):
        params = ProtocolParams(n0=64, m=16, epsilon=0.01, flip_probability=0.1, leak_probability=0.2)
        assert params.epsilons == (0.01, 0.1, 0.2)


class TestEncoding:
    def test_default_table(self):
        # The bit-pair to spin-state correspondence used on the wire.
        assert DEFAULT_ENCODING.label((0, 0)) is SpinLabel.UP
        assert DEFAULT_ENCODING.label((0, 1)) is SpinLabel.DOWN
        assert DEFAULT_ENCODING.label((1, 0)) is SpinLabel.LEFT
        assert DEFAULT_ENCODING.label((1, 1)) is SpinLabel.RIGHT

    def test_bijective_inverse(self):
        for pair in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            assert DEFAULT_ENCODING.pair(DEFAULT_ENCODING.label(pair)) == pair

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError, match="bijective"):
            EncodingRule(
                {
                    (0, 0): SpinLabel.UP,
                    (0, 1): SpinLabel.UP,
                    (1, 0): SpinLabel.LEFT,
                    (1, 1): SpinLabel.RIGHT,
                }
            )

    def test_encode_spins(self):
        states = encode_spins((0, 0, 1, 1))
        assert states[0].allclose(spin_state(SpinLabel.UP))
        assert states[1].allclose(spin_state(SpinLabel.RIGHT))
        assert spin_labels((0, 1, 1, 0)) == [SpinLabel.DOWN, SpinLabel.LEFT]

    def test_odd_length_rejected(self):
        with pytest.raises(ValueError, match="pair"):
            encode_spins((0, 1, 1))


class TestOracle:
    def test_ideal_reveal_returns_committed(self, rng):
        oracle = IdealCommitmentOracle()
        for index, bit in enumerate((0, 1, 1, 0)):
            oracle.commit(index, bit, rng)
        assert [oracle.reveal(i) for i in range(4)] == [0, 1, 1, 0]
        assert oracle.leaked_view == {}

    def test_classical_bits_only(self, rng):
        oracle = IdealCommitmentOracle()
        with pytest.raises(ValueError, match="classical bits"):
            oracle.commit(0, 0.5, rng)

    def test_double_commit_rejected(self, rng):
        oracle = IdealCommitmentOracle()
        oracle.commit(0, 1, rng)
        with pytest.raises(ValueError, match="already committed"):
            oracle.commit(0, 0, rng)

    def test_missing_reveal_raises(self):
        with pytest.raises(KeyError):
            IdealCommitmentOracle().reveal(3)

    def test_flip_knob_changes_certified_bits(self, rng):
        oracle = IdealCommitmentOracle(flip_probability=1.0)
        oracle.commit(0, 0, rng)
        assert oracle.reveal(0) == 1

    def test_leak_knob_exposes_view(self, rng):
        oracle = IdealCommitmentOracle(leak_probability=1.0)
        oracle.commit(0, 1, rng)
        assert oracle.leaked_view == {0: 1}


class TestChallenge:
    def test_subset_size(self, rng):
        params = ProtocolParams(n0=3, m=2, strict=False)
        assert len(draw_challenge(params, rng)) == 1

    def test_degenerate_empty_subset(self, rng):
        params = ProtocolParams(n0=2, m=2, strict=False)
        assert draw_challenge(params, rng) == ()

    def test_uniform_membership(self, rng):
        # Each index of 8 appears in a size-4 subset with frequency 1/2.
        params = ProtocolParams(n0=8, m=4, strict=False)
        draws = 100_000
        counts = np.zeros(8)
        for _ in range(draws):
            for index in draw_challenge(params, rng):
                counts[index] += 1
        frequencies = counts / draws
        assert np.all(np.abs(frequencies - 0.5) < 0.01)


class TestVerifyTested:
    def test_honest_accepts_with_certainty(self, rng):
        bits = (0, 0, 0, 1, 1, 0, 1, 1)
        stored = {i: s for i, s in enumerate(encode_spins(bits))}
        revealed = {i: (bits[2 * i], bits[2 * i + 1]) for i in range(4)}
        for _ in range(25):
            outcome = verify_tested(range(4), revealed, stored, DEFAULT_ENCODING, rng)
            assert outcome.accepted

    def test_conjugate_swap_detected_half_the_time(self, rng):
        # A particle in the conjugate basis passes the check with p = 1/2.
        trials = 100_000
        revealed = {0: (0, 0)}  # claims UP
        passes = 0
        for _ in range(trials):
            stored = {0: spin_state(SpinLabel.RIGHT)}
            if verify_tested([0], revealed, stored, DEFAULT_ENCODING, rng).accepted:
                passes += 1
        assert abs(passes / trials - 0.5) < 0.005

    def test_empty_subset_vacuous_accept(self, rng):
        outcome = verify_tested([], {}, {}, DEFAULT_ENCODING, rng)
        assert outcome.accepted and outcome.checks == ()

    def test_missing_reveal_raises(self, rng):
        stored = {0: spin_state(SpinLabel.UP)}
        with pytest.raises(KeyError, match="missing oracle reveal"):
            verify_tested([0], {}, stored, DEFAULT_ENCODING, rng)

    def test_rejection_names_first_failure(self, rng):
        stored = {0: spin_state(SpinLabel.UP), 1: spin_state(SpinLabel.UP)}
        revealed = {0: (0, 0), 1: (0, 1)}  # particle 1 is orthogonal to its claim
        outcome = verify_tested([0, 1], revealed, stored, DEFAULT_ENCODING, rng)
        assert not outcome.accepted
        assert outcome.reject_index == 1


class TestDeclarations:
    def test_bit_zero_on_z_particle(self):
        (declaration,) = honest_declarations(0, [7], [SpinLabel.UP])
        assert declaration.particle == 7
        assert declaration.basis_for(0) is Basis.Z
        assert declaration.basis_for(1) is Basis.X

    def test_bit_one_on_x_particle(self):
        (declaration,) = honest_declarations(1, [2], [SpinLabel.LEFT])
        assert declaration.basis_for(1) is Basis.X
        assert declaration.basis_for(0) is Basis.Z

    def test_one_declaration_per_untested_particle(self):
        labels = [SpinLabel.UP, SpinLabel.LEFT, SpinLabel.RIGHT]
        declarations = honest_declarations(0, [1, 4, 5], labels)
        assert len(declarations) == 3
        assert [d.particle for d in declarations] == [1, 4, 5]


class TestVerifyReveal:
    def _setup(self, bit, labels):
        particles = tuple(range(len(labels)))
        declarations = honest_declarations(bit, particles, labels)
        stored = {i: spin_state(label) for i, label in enumerate(labels)}
        return declarations, stored

    def test_honest_reveal_accepts(self, rng):
        labels = [SpinLabel.UP, SpinLabel.LEFT, SpinLabel.RIGHT, SpinLabel.DOWN]
        declarations, stored = self._setup(1, labels)
        for _ in range(25):
            outcome = verify_reveal(1, labels, declarations, stored, rng)
            assert outcome.accepted

    def test_wrong_length_rejected_without_measurement(self, rng):
        labels = [SpinLabel.UP, SpinLabel.DOWN]
        declarations, stored = self._setup(0, labels)
        outcome = verify_reveal(0, labels[:1], declarations, stored, rng)
        assert not outcome.accepted
        assert outcome.reason == "claim length mismatch"

    def test_label_outside_declared_basis_rejected(self, rng):
        labels = [SpinLabel.UP]
        declarations, stored = self._setup(0, labels)
        outcome = verify_reveal(0, [SpinLabel.LEFT], declarations, stored, rng)
        assert not outcome.accepted
        assert outcome.reason == "claimed label outside declared basis"

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_k_false_declarations_pass_rate(self, k, make_rng):
        # Pass probability is 2^-k: each false declaration forces a
        # conjugate-basis measurement matched by a uniform guess.
        rng = make_rng(800 + k)
        labels = [SpinLabel.UP] * 4
        particles = tuple(range(4))
        stored = {i: spin_state(SpinLabel.UP) for i in particles}
        declarations = []
        for i in particles:
            basis = Basis.Z if i >= k else Basis.X  # first k are false for bit 0
            declarations.append(Declaration(i, basis))
        trials = 40_000
        passes = 0
        for _ in range(trials):
            claims = []
            for i in particles:
                if i < k:
                    claims.append((SpinLabel.RIGHT, SpinLabel.LEFT)[rng.bit()])
                else:
                    claims.append(SpinLabel.UP)
            if verify_reveal(0, claims, tuple(declarations), stored, rng).accepted:
                passes += 1
        expected = 2.0**-k
        sigma = math.sqrt(expected * (1 - expected) / trials)
        assert abs(passes / trials - expected) < 4 * sigma


class TestRunSession:
    def test_honest_accepts_and_reveals_committed_bit(self, make_rng):
        params = ProtocolParams(n0=16, m=4)
        for seed in range(10):
            strategy = Honest()
            transcript = run_session(strategy, params, randomness=make_rng(seed))
            assert transcript.verdict is Verdict.ACCEPT
            assert transcript.claimed_bit == strategy.last_bit

    def test_exhaustive_small_sizes(self, make_rng):
        # Honest completeness at every small size, many seeds.
        for n0, m in [(2, 1), (3, 1), (4, 1), (4, 2), (6, 2), (8, 2)]:
            params = ProtocolParams(n0=n0, m=m, strict=False)
            for seed in range(40):
                transcript = run_session(Honest(), params, randomness=make_rng(1000 + seed))
                assert transcript.verdict is Verdict.ACCEPT

    def test_transcript_structure(self, make_rng):
        params = ProtocolParams(n0=16, m=4)
        transcript = run_session(Honest(), params, randomness=make_rng(3))
        assert len(transcript.committed_bits) == 32
        assert len(transcript.challenge) == 12
        assert len(transcript.untested) == 4
        assert len(transcript.declarations) == 4
        assert transcript.t_r > transcript.t_c
        assert validate_schedule(transcript.schedule) == []

    def test_suspended_commitments_never_opened(self, make_rng):
        params = ProtocolParams(n0=16, m=4)
        transcript = run_session(Honest(), params, randomness=make_rng(4))
        suspended = {j for i in transcript.untested for j in (2 * i, 2 * i + 1)}
        assert not (suspended & transcript.opened_indices)
        assert len(transcript.opened_indices) == 2 * params.n_tested

    def test_classical_flip_reject_rate(self, make_rng):
        # Acceptance of a k-false reveal is 2^-k; measured over sessions.
        params = ProtocolParams(n0=8, m=2, strict=False)
        rng = make_rng(77)
        trials = 400
        accepted = sum(
            run_session(ClassicalFlip(k=1), params, randomness=rng).accepted
            for _ in range(trials)
        )
        assert abs(accepted / trials - 0.5) < 0.1

    def test_flip_k_exceeding_m_rejected(self, make_rng):
        params = ProtocolParams(n0=8, m=2, strict=False)
        with pytest.raises(ValueError, match="exceeds"):
            run_session(ClassicalFlip(k=3), params, randomness=make_rng(5))

    def test_superluminal_schedule_aborts(self, make_rng):
        def tamper(messages):
            out = []
            for message in messages:
                if message.payload == "spin[0]":
                    message = Message(
                        message.sender,
                        message.receiver,
                        message.emit,
                        Event(message.emit.t, message.receive.x),
                        message.payload,
                    )
                out.append(message)
            return out

        scenario = ReductionScenario(tamper=tamper)
        params = ProtocolParams(n0=16, m=4)
        transcript = run_session(Honest(), params, scenario=scenario, randomness=make_rng(6))
        assert transcript.verdict is Verdict.ABORT
        assert transcript.failed_stage is Stage.SCHEDULE
        assert len(transcript.violations) == 1
        assert transcript.violations[0].payload == "spin[0]"

    def test_suspension_rounds_extend_schedule(self, make_rng):
        params = ProtocolParams(n0=16, m=4)
        quiet = run_session(Honest(), params, scenario=default_scenario(0), randomness=make_rng(7))
        suspended = run_session(Honest(), params, scenario=default_scenario(5), randomness=make_rng(7))
        assert suspended.verdict is Verdict.ACCEPT
        assert suspended.claimed_bit == quiet.claimed_bit  # same randomness, same outcome
        beats = [m for m in suspended.schedule.messages if m.payload.startswith("heartbeat")]
        assert len(beats) == 10
        reveal_quiet = [m for m in quiet.schedule.messages if m.payload == "reveal"][0]
        reveal_late = [m for m in suspended.schedule.messages if m.payload == "reveal"][0]
        assert reveal_late.emit.t > reveal_quiet.emit.t

    def test_records_serialize(self, make_rng):
        params = ProtocolParams(n0=16, m=4)
        transcript = run_session(Honest(), params, randomness=make_rng(8))
        records = transcript.to_records()
        assert records[0]["type"] == "params"
        assert records[-1]["type"] == "verdict"
        for record in records:
            assert record["schema"] == 1
            json.dumps(record)

    def test_wrong_bit_count_is_a_parameter_error(self, make_rng):
        class ShortChanger(Honest):
            def commit_bits(self, params, randomness):
                return (0, 1, 1)

        params = ProtocolParams(n0=16, m=4)
        with pytest.raises(ValueError, match="expected 32"):
            run_session(ShortChanger(), params, randomness=make_rng(10))

    def test_params_seed_fallback(self):
        params = ProtocolParams(n0=16, m=4, seed=123)
        first = run_session(Honest(), params)
        second = run_session(Honest(), params)
        assert first.committed_bits == second.committed_bits

    def test_missing_randomness_and_seed_rejected(self):
        params = ProtocolParams(n0=16, m=4)
        with pytest.raises(ValueError, match="seed"):
            run_session(Honest(), params)

    def test_default_geometry_commitment_time(self, make_rng):
        # Confirmations land on B1 (distance 2 from B0) at t = 1: t_c = 3.
        params = ProtocolParams(n0=16, m=4)
        transcript = run_session(Honest(), params, randomness=make_rng(9))
        assert transcript.t_c == pytest.approx(3.0, abs=1e-12)
        b0 = transcript.schedule.site("B0")
        expected = max(
            c.t + math.dist(c.x, b0.position) for c in transcript.schedule.confirmations
        )
        assert transcript.t_c == pytest.approx(expected, abs=1e-12)
