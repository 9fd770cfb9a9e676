"""State machine for the oracle-certified bit-commitment reduction.

One run: a batch of 2*N0 ideal-oracle commitments to random bits, a
sequence of N0 conjugate-basis spin particles correlated with the
committed pairs, a random challenge opening all but M of them, basis
declarations that bind a single protocol bit to the surviving particles,
an optional suspension period, and a final reveal that the verifier
checks by single-shot measurements.

The commitment oracle is ideal by default: a revealed bit always equals
the committed bit, and nothing leaks before reveal.  Two knobs let it be
degraded deliberately (see :class:`IdealCommitmentOracle`); the oracle
accepts classical bits only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Protocol, runtime_checkable

from .quantum import (
    Basis,
    SpinLabel,
    StateVector,
    measure_label,
    spin_state,
)
from .rng import RandomStream
from .spacetime import (
    Event,
    Message,
    Schedule,
    Site,
    Violation,
    earliest_commitment_time,
    validate_schedule,
)

__all__ = [
    "ProtocolParams",
    "EncodingRule",
    "DEFAULT_ENCODING",
    "Declaration",
    "IdealCommitmentOracle",
    "Verdict",
    "Stage",
    "TestedCheck",
    "TestedOutcome",
    "RevealOutcome",
    "SessionTranscript",
    "ReductionScenario",
    "default_scenario",
    "encode_spins",
    "draw_challenge",
    "verify_tested",
    "honest_declarations",
    "verify_reveal",
    "run_session",
    "AliceStrategy",
]


@dataclass(frozen=True)
class ProtocolParams:
    """Sizes and oracle knobs for one reduction run.

    ``n0 >> m`` is operationalized as ``n0 >= min_ratio * m``; pass
    ``strict=False`` to relax it for small test instances.  ``n1`` is the
    security parameter handed to the commitment oracle (recorded, since the
    ideal oracle needs none).  ``flip_probability`` and ``leak_probability``
    degrade the oracle; at zero it is ideal.
    """

    n0: int
    m: int
    n1: int = 128
    epsilon: float = 0.0
    flip_probability: float = 0.0
    leak_probability: float = 0.0
    seed: int | None = None
    min_ratio: int = 4
    strict: bool = True

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.n0 < self.m:
            raise ValueError(f"n0={self.n0} must be >= m={self.m}")
        if self.strict and self.n0 < self.min_ratio * self.m:
            raise ValueError(
                f"n0={self.n0} must be >= {self.min_ratio}*m={self.min_ratio * self.m}"
                " (pass strict=False for degenerate test sizes)"
            )
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError("epsilon must lie in [0, 1)")
        for name in ("flip_probability", "leak_probability"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")

    @property
    def n_commitments(self) -> int:
        return 2 * self.n0

    @property
    def n_tested(self) -> int:
        return self.n0 - self.m

    @property
    def epsilons(self) -> tuple[float, float, float]:
        """The (hiding, fidelity-defect, leak) triple in force."""
        return (self.epsilon, self.flip_probability, self.leak_probability)


class EncodingRule:
    """Bijection between committed bit pairs and the four spin states."""

    def __init__(self, mapping: dict[tuple[int, int], SpinLabel]):
        if sorted(mapping) != [(0, 0), (0, 1), (1, 0), (1, 1)]:
            raise ValueError("encoding must cover exactly the four bit pairs")
        if len(set(mapping.values())) != 4:
            raise ValueError("encoding must be bijective")
        self._to_label = dict(mapping)
        self._to_pair = {label: pair for pair, label in mapping.items()}

    def label(self, pair: tuple[int, int]) -> SpinLabel:
        return self._to_label[(pair[0], pair[1])]

    def pair(self, label: SpinLabel) -> tuple[int, int]:
        return self._to_pair[label]


# (0,0) -> up, (0,1) -> down, (1,0) -> left, (1,1) -> right: the first bit
# selects the basis, the second the eigenstate within it.
DEFAULT_ENCODING = EncodingRule(
    {
        (0, 0): SpinLabel.UP,
        (0, 1): SpinLabel.DOWN,
        (1, 0): SpinLabel.LEFT,
        (1, 1): SpinLabel.RIGHT,
    }
)


@dataclass(frozen=True)
class Declaration:
    """Public binding of each possible protocol bit to a basis for one particle.

    Reads as: if the protocol bit is 0 the particle is an eigenstate of
    ``basis_for_zero``, if it is 1 an eigenstate of the conjugate basis.
    """

    particle: int
    basis_for_zero: Basis

    @property
    def basis_for_one(self) -> Basis:
        return self.basis_for_zero.conjugate()

    def basis_for(self, bit: int) -> Basis:
        return self.basis_for_zero if bit == 0 else self.basis_for_one


class IdealCommitmentOracle:
    """Trusted functionality certifying that reveals return the committed bit.

    With both knobs at zero: ``reveal(i)`` returns exactly the bit passed to
    ``commit(i, bit)`` and the receiver learns nothing earlier.  With
    ``flip_probability`` > 0 the certified value differs from the committed
    input with that probability (a fidelity defect, drawn once at commit
    time); with ``leak_probability`` > 0 the certified value becomes part of
    the receiver's view at commit time.  Inputs are classical bits only.
    """

    def __init__(self, flip_probability: float = 0.0, leak_probability: float = 0.0):
        for name, value in (("flip_probability", flip_probability), ("leak_probability", leak_probability)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        self.flip_probability = flip_probability
        self.leak_probability = leak_probability
        self._committed: dict[int, int] = {}
        self._stored: dict[int, int] = {}
        self._opened: set[int] = set()
        self._leaked: dict[int, int] = {}

    def commit(self, index: int, bit: int, randomness: RandomStream) -> None:
        if bit not in (0, 1):
            raise ValueError("oracle accepts classical bits only")
        if index in self._stored:
            raise ValueError(f"index {index} already committed")
        stored = bit
        if self.flip_probability > 0.0 and randomness.random() < self.flip_probability:
            stored = 1 - bit
        self._committed[index] = bit
        self._stored[index] = stored
        if self.leak_probability > 0.0 and randomness.random() < self.leak_probability:
            self._leaked[index] = stored

    def reveal(self, index: int) -> int:
        if index not in self._stored:
            raise KeyError(f"no commitment at index {index}")
        self._opened.add(index)
        return self._stored[index]

    def stored_bits(self, count: int) -> tuple[int, ...]:
        return tuple(self._stored[i] for i in range(count))

    @property
    def opened_indices(self) -> frozenset[int]:
        return frozenset(self._opened)

    @property
    def leaked_view(self) -> dict[int, int]:
        """What the receiver saw before any reveal."""
        return dict(self._leaked)


class Verdict(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    ABORT = "abort"


class Stage(enum.Enum):
    SCHEDULE = "schedule"
    COMMIT = "commit"
    SPINS = "spins"
    CHALLENGE = "challenge"
    TESTED = "tested-verify"
    DECLARATIONS = "declarations"
    SUSPENSION = "suspension"
    REVEAL = "reveal"
    DONE = "done"


@dataclass(frozen=True)
class TestedCheck:
    particle: int
    revealed_pair: tuple[int, int]
    expected: SpinLabel
    outcome: SpinLabel
    passed: bool


@dataclass(frozen=True)
class TestedOutcome:
    accepted: bool
    checks: tuple[TestedCheck, ...]
    reject_index: int | None = None


@dataclass(frozen=True)
class RevealOutcome:
    accepted: bool
    reject_index: int | None = None
    reason: str = ""


def encode_spins(bits, rule: EncodingRule = DEFAULT_ENCODING) -> list[StateVector]:
    """Spin states for a committed bit string (pairs in transmission order)."""
    bits = tuple(int(b) for b in bits)
    if len(bits) % 2 != 0:
        raise ValueError("bit string must pair up")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0/1")
    return [
        spin_state(rule.label((bits[2 * i], bits[2 * i + 1])))
        for i in range(len(bits) // 2)
    ]


def spin_labels(bits, rule: EncodingRule = DEFAULT_ENCODING) -> list[SpinLabel]:
    bits = tuple(int(b) for b in bits)
    return [rule.label((bits[2 * i], bits[2 * i + 1])) for i in range(len(bits) // 2)]


def draw_challenge(params: ProtocolParams, randomness: RandomStream) -> tuple[int, ...]:
    """Uniformly random subset of n0 - m particle indices, sorted."""
    size = params.n_tested
    picked = randomness.permutation(params.n0)[:size]
    return tuple(sorted(int(i) for i in picked))


def verify_tested(
    tested,
    revealed_pairs: dict[int, tuple[int, int]],
    stored_spins,
    rule: EncodingRule,
    randomness: RandomStream,
) -> TestedOutcome:
    """Measure each challenged particle in the basis its opened pair names.

    Accepts iff every single-shot outcome is the exact eigenstate the pair
    encodes; rejects at the first failure (each particle is one copy).
    """
    checks = []
    for particle in tested:
        if particle not in revealed_pairs:
            raise KeyError(f"missing oracle reveal for particle {particle}")
        pair = revealed_pairs[particle]
        expected = rule.label(pair)
        outcome, _ = measure_label(stored_spins[particle], expected.basis, randomness)
        passed = outcome is expected
        checks.append(TestedCheck(particle, pair, expected, outcome, passed))
        if not passed:
            return TestedOutcome(False, tuple(checks), reject_index=particle)
    return TestedOutcome(True, tuple(checks))


def honest_declarations(bit: int, particles, labels) -> tuple[Declaration, ...]:
    """Truthful declarations: bind ``bit`` to each particle's actual basis."""
    out = []
    for particle, label in zip(particles, labels):
        basis = label.basis
        basis_for_zero = basis if bit == 0 else basis.conjugate()
        out.append(Declaration(particle, basis_for_zero))
    return tuple(out)


def verify_reveal(
    claimed_bit: int,
    claimed_labels,
    declarations,
    stored_spins,
    randomness: RandomStream,
) -> RevealOutcome:
    """Check a reveal claim against the declarations by measurement.

    Each untested particle is measured in the basis the declarations assign
    to the claimed bit; the claim passes only if every outcome matches the
    claimed eigenstate.  A malformed claim (wrong length, or a label outside
    its declared basis) is rejected without measurement.
    """
    claimed_labels = list(claimed_labels)
    if len(claimed_labels) != len(declarations):
        return RevealOutcome(False, reason="claim length mismatch")
    for declaration, label in zip(declarations, claimed_labels):
        if label.basis is not declaration.basis_for(claimed_bit):
            return RevealOutcome(
                False,
                reject_index=declaration.particle,
                reason="claimed label outside declared basis",
            )
    for declaration, label in zip(declarations, claimed_labels):
        basis = declaration.basis_for(claimed_bit)
        outcome, _ = measure_label(stored_spins[declaration.particle], basis, randomness)
        if outcome is not label:
            return RevealOutcome(False, reject_index=declaration.particle, reason="measurement mismatch")
    return RevealOutcome(True)


@runtime_checkable
class AliceStrategy(Protocol):
    """What a committer implementation must provide to ``run_session``."""

    name: str

    def commit_bits(self, params: ProtocolParams, randomness: RandomStream) -> tuple[int, ...]:
        ...

    def plan_declarations(self, particles, labels, randomness: RandomStream):
        ...

    def reveal_claim(self, particles, labels, declarations, randomness: RandomStream):
        ...


@dataclass(frozen=True)
class SessionTranscript:
    """Everything one run produced, stamped with schedule events."""

    params: ProtocolParams
    strategy: str
    committed_bits: tuple[int, ...]
    certified_bits: tuple[int, ...]
    sent_labels: tuple[SpinLabel, ...]
    challenge: tuple[int, ...]
    untested: tuple[int, ...]
    tested_checks: tuple[TestedCheck, ...]
    declarations: tuple[Declaration, ...]
    claimed_bit: int | None
    claimed_labels: tuple[SpinLabel, ...]
    verdict: Verdict
    failed_stage: Stage | None
    reject_index: int | None
    t_c: float
    t_r: float
    events: dict
    schedule: Schedule
    violations: tuple[Violation, ...]
    leaked_view: dict
    opened_indices: frozenset

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPT

    def to_records(self) -> list[dict]:
        """Line-delimited transcript records (schema v1)."""
        records = [
            {
                "schema": 1,
                "type": "params",
                "n0": self.params.n0,
                "m": self.params.m,
                "n1": self.params.n1,
                "epsilons": list(self.params.epsilons),
                "strategy": self.strategy,
            }
        ]
        for seq, message in enumerate(self.schedule.messages):
            records.append(
                {
                    "schema": 1,
                    "type": "message",
                    "seq": seq,
                    "from": message.sender,
                    "to": message.receiver,
                    "emit": {"t": message.emit.t, "x": list(message.emit.x)},
                    "receive": {"t": message.receive.t, "x": list(message.receive.x)},
                    "payload": message.payload,
                }
            )
        for name in sorted(self.events):
            event = self.events[name]
            records.append(
                {
                    "schema": 1,
                    "type": "stage",
                    "name": name,
                    "t": event.t,
                    "x": list(event.x),
                }
            )
        records.append(
            {
                "schema": 1,
                "type": "verdict",
                "verdict": self.verdict.value,
                "failed_stage": self.failed_stage.value if self.failed_stage else None,
                "reject_index": self.reject_index,
                "claimed_bit": self.claimed_bit,
                "challenge_size": len(self.challenge),
                "violations": [str(v) for v in self.violations],
            }
        )
        return records


@dataclass(frozen=True)
class ReductionScenario:
    """Site geometry and transmission timing for one reduction run.

    The default layout puts the verifier anchor ``B0`` at the origin at
    rest, with committer and verifier sites alternating along a line at
    unit separations.  All messages travel at light speed.  ``tamper``
    post-processes the built message list and exists so shipped scenarios
    can inject causal violations.
    """

    name: str = "line-default"
    sites: tuple[Site, ...] = (
        Site("B0", (0.0, 0.0, 0.0)),
        Site("A1", (1.0, 0.0, 0.0)),
        Site("B1", (2.0, 0.0, 0.0)),
        Site("A2", (3.0, 0.0, 0.0)),
    )
    b0_id: str = "B0"
    alice_id: str = "A1"
    oracle_pairs: tuple[tuple[str, str], ...] = (("A1", "B1"), ("A2", "B1"))
    spin_delay: float = 1.0
    suspension_rounds: int = 0
    tamper: Callable | None = None

    def site(self, site_id: str) -> Site:
        for site in self.sites:
            if site.id == site_id:
                return site
        raise KeyError(f"unknown site {site_id}")

    def _flight(self, sender: Site, receiver: Site, emit_t: float) -> tuple[Event, Event]:
        emit = sender.event_at(emit_t)
        receive_t = earliest_commitment_time(receiver, [emit])
        return emit, receiver.event_at(receive_t)

    def build_schedule(self, params: ProtocolParams) -> Schedule:
        b0 = self.site(self.b0_id)
        alice = self.site(self.alice_id)
        messages: list[Message] = []
        confirmations: list[Event] = []

        # Oracle commitments, one per committed bit, assigned round-robin
        # over the committer/receiver site pairs; confirmations are the
        # receive events.
        for index in range(params.n_commitments):
            a_id, b_id = self.oracle_pairs[index % len(self.oracle_pairs)]
            emit, receive = self._flight(self.site(a_id), self.site(b_id), 0.0)
            messages.append(Message(a_id, b_id, emit, receive, f"commit[{index}]"))
            confirmations.append(receive)

        t_c = earliest_commitment_time(b0, confirmations)
        commitment_point = b0.event_at(t_c)

        # Spin particles, emitted strictly after t_c.
        spins_emit_t = t_c + self.spin_delay
        spin_recv_t = spins_emit_t
        for i in range(params.n0):
            emit, receive = self._flight(alice, b0, spins_emit_t)
            messages.append(Message(self.alice_id, self.b0_id, emit, receive, f"spin[{i}]"))
            spin_recv_t = max(spin_recv_t, receive.t)

        # Challenge out, openings and declarations back.
        chal_emit, chal_recv = self._flight(b0, alice, spin_recv_t)
        messages.append(Message(self.b0_id, self.alice_id, chal_emit, chal_recv, "challenge"))

        t_r = t_c
        endpoints = sorted({b_id for _, b_id in self.oracle_pairs})
        for b_id in endpoints:
            open_emit, open_recv = self._flight(alice, self.site(b_id), chal_recv.t)
            messages.append(
                Message(self.alice_id, b_id, open_emit, open_recv, f"open-instruction[{b_id}]")
            )
            rev_emit, rev_recv = self._flight(self.site(b_id), b0, open_recv.t)
            messages.append(Message(b_id, self.b0_id, rev_emit, rev_recv, f"oracle-reveals[{b_id}]"))
            t_r = max(t_r, rev_recv.t)

        decl_emit, decl_recv = self._flight(alice, b0, chal_recv.t)
        messages.append(Message(self.alice_id, self.b0_id, decl_emit, decl_recv, "declarations"))

        # Content-free suspension heartbeats keep the commitment open.
        beat_t = max(t_r, decl_recv.t)
        for round_index in range(self.suspension_rounds):
            out_emit, out_recv = self._flight(b0, alice, beat_t)
            messages.append(
                Message(self.b0_id, self.alice_id, out_emit, out_recv, f"heartbeat-out[{round_index}]")
            )
            back_emit, back_recv = self._flight(alice, b0, out_recv.t)
            messages.append(
                Message(self.alice_id, self.b0_id, back_emit, back_recv, f"heartbeat-back[{round_index}]")
            )
            beat_t = back_recv.t

        reveal_emit, reveal_recv = self._flight(alice, b0, max(beat_t, chal_recv.t) + 1.0)
        messages.append(Message(self.alice_id, self.b0_id, reveal_emit, reveal_recv, "reveal"))

        if self.tamper is not None:
            messages = self.tamper(list(messages))

        return Schedule(
            sites={site.id: site for site in self.sites},
            messages=tuple(messages),
            commitment_point=commitment_point,
            t_c=t_c,
            t_r=t_r,
            confirmations=tuple(confirmations),
        )


def default_scenario(suspension_rounds: int = 0) -> ReductionScenario:
    return ReductionScenario(suspension_rounds=suspension_rounds)


def _message_event(schedule: Schedule, payload: str, which: str = "receive") -> Event | None:
    for message in schedule.messages:
        if message.payload == payload:
            return message.receive if which == "receive" else message.emit
    return None


def run_session(
    strategy,
    params: ProtocolParams,
    scenario: ReductionScenario | None = None,
    randomness: RandomStream | None = None,
    oracle: IdealCommitmentOracle | None = None,
    encoding: EncodingRule = DEFAULT_ENCODING,
) -> SessionTranscript:
    """Execute one full run and return its transcript.

    Stages: commit, spins, challenge, tested verification, declarations,
    suspension, reveal, verdict.  Any stage failure yields a transcript
    whose verdict is reject/abort with the stage recorded.  The suspended
    (untested) commitments are never opened.
    """
    if scenario is None:
        scenario = default_scenario()
    if randomness is None:
        if params.seed is None:
            raise ValueError("either pass a RandomStream or set params.seed")
        randomness = RandomStream(params.seed)
    if oracle is None:
        oracle = IdealCommitmentOracle(params.flip_probability, params.leak_probability)

    schedule = scenario.build_schedule(params)
    b0 = scenario.site(scenario.b0_id)

    def abort(stage: Stage, violations=(), **partial) -> SessionTranscript:
        return _transcript(
            params,
            strategy,
            schedule,
            verdict=Verdict.ABORT,
            failed_stage=stage,
            violations=tuple(violations),
            oracle=oracle,
            **partial,
        )

    violations = validate_schedule(schedule)
    # Spins must leave strictly after the commitment time.
    for message in schedule.messages:
        if message.payload.startswith("spin[") and message.emit.t <= schedule.t_c:
            violations.append(
                Violation("ordering", message.payload, "spin emitted at or before t_c")
            )
    if violations:
        return abort(Stage.SCHEDULE, violations)

    # Commit phase: the oracle stores all 2*N0 bits.
    bits = tuple(int(b) for b in strategy.commit_bits(params, randomness))
    if len(bits) != params.n_commitments:
        raise ValueError(
            f"strategy committed {len(bits)} bits, expected {params.n_commitments}"
        )
    for index, bit in enumerate(bits):
        oracle.commit(index, bit, randomness)
    t_c = earliest_commitment_time(b0, schedule.confirmations)

    # Spin transmission (states held by B0 for later measurement).
    labels = tuple(spin_labels(bits, encoding))
    stored = {i: spin_state(label) for i, label in enumerate(labels)}

    # Challenge and tested verification.
    tested = draw_challenge(params, randomness)
    untested = tuple(i for i in range(params.n0) if i not in set(tested))
    try:
        revealed = {i: (oracle.reveal(2 * i), oracle.reveal(2 * i + 1)) for i in tested}
    except KeyError:
        return abort(Stage.TESTED, committed_bits=bits, sent_labels=labels, challenge=tested, untested=untested)
    tested_outcome = verify_tested(tested, revealed, stored, encoding, randomness)

    events = {
        "commitment_point": schedule.commitment_point,
        "spins_received": _message_event(schedule, f"spin[{params.n0 - 1}]") or schedule.commitment_point,
        "challenge_received": _message_event(schedule, "challenge"),
        "tested_verified": b0.event_at(schedule.t_r),
        "declarations_received": _message_event(schedule, "declarations"),
        "reveal_received": _message_event(schedule, "reveal"),
    }
    events["declarations_emitted"] = _message_event(schedule, "declarations", "emit")
    events["reveal_emitted"] = _message_event(schedule, "reveal", "emit")

    base = dict(
        committed_bits=bits,
        sent_labels=labels,
        challenge=tested,
        untested=untested,
        tested_checks=tested_outcome.checks,
        events=events,
    )
    if not tested_outcome.accepted:
        return _transcript(
            params,
            strategy,
            schedule,
            verdict=Verdict.REJECT,
            failed_stage=Stage.TESTED,
            reject_index=tested_outcome.reject_index,
            oracle=oracle,
            **base,
        )

    # Declarations over the untested particles.
    untested_labels = tuple(labels[i] for i in untested)
    declarations = tuple(strategy.plan_declarations(untested, untested_labels, randomness))
    if len(declarations) != len(untested):
        raise ValueError("strategy must declare every untested particle exactly once")

    # Reveal and verdict.  The suspended commitments are never opened.
    claimed_bit, claimed_labels = strategy.reveal_claim(
        untested, untested_labels, declarations, randomness
    )
    reveal_outcome = verify_reveal(claimed_bit, claimed_labels, declarations, stored, randomness)
    return _transcript(
        params,
        strategy,
        schedule,
        verdict=Verdict.ACCEPT if reveal_outcome.accepted else Verdict.REJECT,
        failed_stage=None if reveal_outcome.accepted else Stage.REVEAL,
        reject_index=reveal_outcome.reject_index,
        declarations=declarations,
        claimed_bit=int(claimed_bit),
        claimed_labels=tuple(claimed_labels),
        oracle=oracle,
        **base,
    )


def _transcript(
    params,
    strategy,
    schedule,
    *,
    verdict,
    failed_stage=None,
    reject_index=None,
    committed_bits=(),
    sent_labels=(),
    challenge=(),
    untested=(),
    tested_checks=(),
    declarations=(),
    claimed_bit=None,
    claimed_labels=(),
    events=None,
    violations=(),
    oracle=None,
) -> SessionTranscript:
    return SessionTranscript(
        params=params,
        strategy=getattr(strategy, "name", type(strategy).__name__),
        committed_bits=tuple(committed_bits),
        certified_bits=oracle.stored_bits(len(committed_bits)) if (oracle and committed_bits) else tuple(committed_bits),
        sent_labels=tuple(sent_labels),
        challenge=tuple(challenge),
        untested=tuple(untested),
        tested_checks=tuple(tested_checks),
        declarations=tuple(declarations),
        claimed_bit=claimed_bit,
        claimed_labels=tuple(claimed_labels),
        verdict=verdict,
        failed_stage=failed_stage,
        reject_index=reject_index,
        t_c=schedule.t_c,
        t_r=schedule.t_r,
        events=dict(events or {}),
        schedule=schedule,
        violations=tuple(violations),
        leaked_view=oracle.leaked_view if oracle else {},
        opened_indices=oracle.opened_indices if oracle else frozenset(),
    )
