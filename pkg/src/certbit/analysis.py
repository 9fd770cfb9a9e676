"""Security quantification: cheat probabilities, hiding, and tradeoff sweeps.

Every reported number carries provenance: ``exact`` values come from
closed forms or full enumeration, ``monte-carlo`` values from seeded
sampling with a 99% Wilson (or bootstrap) confidence interval.  Re-running
with the same seed reproduces every report byte for byte.

The supremum over all committer strategies is not computable; cheat
probabilities are maxima over the implemented strategy class (plus a
numeric unitary sweep for the finite commitment abstractions), and every
report says so.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .adversary import (
    ClassicalFlip,
    Honest,
    ToyBCProtocol,
    purification_attack,
    sweep_open_probability,
)
from .protocol import (
    DEFAULT_ENCODING,
    ProtocolParams,
    SessionTranscript,
    Verdict,
    honest_declarations,
    spin_labels,
)
from .quantum import SpinLabel, StateVector, fidelity, measure_probabilities, spin_state
from .rng import RandomStream
from .spacetime import Event, in_past_cone

__all__ = [
    "Quantity",
    "wilson_interval",
    "detection_probability_exact",
    "detection_probability_mc",
    "BobInformation",
    "bob_information",
    "CheatSum",
    "cheat_sum",
    "TradeoffRow",
    "nogo_tradeoff_sweep",
    "EvaluationPoint",
    "PointEvaluation",
    "SecurityReport",
    "evaluate_relativistic",
]

_Z99 = NormalDist().inv_cdf(0.995)

STRATEGY_CLASS_NOTE = (
    "cheat probabilities are maxima over the implemented strategy class, "
    "not the full supremum over all committer behaviour"
)
ORACLE_INTERFACE_NOTE = "the commitment oracle accepts classical bits only"
CONTINUUM_NOTE = (
    "relativistic condition checked at message events and the reveal event only"
)


@dataclass(frozen=True)
class Quantity:
    """A number plus how it was obtained."""

    value: float
    provenance: str  # "exact" | "monte-carlo"
    trials: int | None = None
    ci: tuple[float, float] | None = None
    note: str = ""

    def __post_init__(self):
        if self.provenance not in ("exact", "monte-carlo"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.provenance == "monte-carlo":
            if self.ci is None or self.trials is None:
                raise ValueError("monte-carlo quantities need trials and a confidence interval")

    def to_record(self) -> dict:
        record = {"value": self.value, "provenance": self.provenance}
        if self.trials is not None:
            record["trials"] = self.trials
        if self.ci is not None:
            record["ci"] = [self.ci[0], self.ci[1]]
        if self.note:
            record["note"] = self.note
        return record


def wilson_interval(successes: int, trials: int, confidence: float = 0.99) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    phat = successes / trials
    z2n = z * z / trials
    denominator = 1.0 + z2n
    center = (phat + z2n / 2.0) / denominator
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z2n / (4.0 * trials)) / denominator
    return (max(0.0, center - half), min(1.0, center + half))


def detection_probability_exact(k: int) -> float:
    """Pass probability of a reveal with k false declarations: 2^-k.

    Each falsely declared particle is measured in a basis conjugate to its
    actual state, so the uniformly guessed eigenstate matches with
    probability exactly 1/2, independently across particles.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    return 2.0 ** (-k)


def _match_probability_table() -> dict[tuple[SpinLabel, int], float]:
    """P(outcome == claimed) for a conjugate-basis measurement, per the core."""
    table = {}
    for label in SpinLabel:
        conj = label.basis.conjugate()
        probs = measure_probabilities(spin_state(label), conj, 0)
        for claim_index in (0, 1):
            table[(label, claim_index)] = probs[claim_index]
    return table


def detection_probability_mc(
    strategy, params: ProtocolParams, trials: int, randomness: RandomStream
) -> Quantity:
    """Empirical reveal pass rate for a strategy, with 99% Wilson interval.

    Simulates the reveal verification stage, the only stochastic stage for
    the honest/flip family (everything earlier passes deterministically).
    If every per-particle Born probability is 0 or 1 the run is
    deterministic and the interval degenerates to a point.
    """
    if trials < 1000:
        raise ValueError("need at least 10^3 trials")
    if isinstance(strategy, Honest):
        k = 0
    elif isinstance(strategy, ClassicalFlip):
        k = strategy.k
        if k > params.m:
            raise ValueError(f"k={k} exceeds m={params.m}")
    else:
        raise TypeError("detection_probability_mc supports Honest and ClassicalFlip")

    if k == 0:
        # Honest reveals measure exact eigenstates: every trial passes.
        return Quantity(1.0, "monte-carlo", trials=trials, ci=(1.0, 1.0), note="deterministic")

    table = _match_probability_table()
    labels = list(SpinLabel)
    label_idx = randomness.integers(0, len(labels), size=(trials, k))
    claim_idx = randomness.integers(0, 2, size=(trials, k))
    prob_lookup = np.array([[table[(label, c)] for c in (0, 1)] for label in labels])
    p_match = prob_lookup[label_idx, claim_idx]
    draws = randomness.random((trials, k))
    successes = int(np.sum(np.all(draws < p_match, axis=1)))
    estimate = successes / trials
    if np.all((p_match == 0.0) | (p_match == 1.0)):
        ci = (estimate, estimate)
        note = "deterministic"
    else:
        ci = wilson_interval(successes, trials)
        note = ""
    return Quantity(estimate, "monte-carlo", trials=trials, ci=ci, note=note)


@dataclass(frozen=True)
class BobInformation:
    """The verifier's pre-reveal knowledge of the protocol bit."""

    tv_distance: Quantity
    mutual_information_bits: Quantity
    notes: tuple[str, ...] = ()


def _enumerate_views(params: ProtocolParams, encoding=DEFAULT_ENCODING):
    """Exact distribution of the verifier's pre-reveal view, per bit value.

    Enumerates all committed bit strings and challenge subsets for an
    honest committer against the ideal oracle.  The view is everything the
    verifier holds before reveal: challenge subset, opened tested pairs,
    tested measurement outcomes, and the declarations.
    """
    n0, m = params.n0, params.m
    n_bits = params.n_commitments
    subsets = list(itertools.combinations(range(n0), params.n_tested))
    bit_weight = 0.5**n_bits
    subset_weight = 1.0 / len(subsets)
    weight = bit_weight * subset_weight
    distributions = ({}, {})
    for bits_value in range(2**n_bits):
        bits = tuple((bits_value >> i) & 1 for i in range(n_bits))
        labels = spin_labels(bits, encoding)
        for subset in subsets:
            tested_view = tuple(
                (i, bits[2 * i], bits[2 * i + 1], labels[i].value) for i in subset
            )
            untested = tuple(i for i in range(n0) if i not in subset)
            for a in (0, 1):
                declarations = honest_declarations(a, untested, [labels[i] for i in untested])
                decl_view = tuple((d.particle, d.basis_for_zero.value) for d in declarations)
                view = (subset, tested_view, decl_view)
                distributions[a][view] = distributions[a].get(view, 0.0) + weight
    return distributions


def _exact_view_statistics(params: ProtocolParams) -> tuple[float, float]:
    dist0, dist1 = _enumerate_views(params)
    support = set(dist0) | set(dist1)
    tv = 0.5 * sum(abs(dist0.get(v, 0.0) - dist1.get(v, 0.0)) for v in support)
    mi = 0.0
    for view in support:
        p0 = dist0.get(view, 0.0)
        p1 = dist1.get(view, 0.0)
        mix = 0.5 * (p0 + p1)
        for p in (p0, p1):
            if p > 0.0:
                mi += 0.5 * p * math.log2(p / mix)
    return tv, mi


def _sample_view_atoms(
    params: ProtocolParams, trials: int, bit: int, randomness: RandomStream
) -> np.ndarray:
    """Per-particle view atoms for ``trials`` sessions with protocol bit ``bit``.

    The protocol bit reaches the verifier's pre-reveal view only through
    the declarations and any oracle leak, independently per untested
    particle (the challenge subset, opened pairs and tested outcomes are
    generated before the bit enters).  Each atom encodes (declared basis
    for bit 0, leaked pair or nothing) as an integer in [0, 10).
    """
    n = trials * params.m
    pair_bits = randomness.integers(0, 2, size=(n, 2))
    true_basis = pair_bits[:, 0]  # 0 -> Z, 1 -> X
    basis_for_zero = true_basis if bit == 0 else 1 - true_basis
    if params.leak_probability > 0.0:
        leaked = randomness.random(n) < params.leak_probability
    else:
        leaked = np.zeros(n, dtype=bool)
    leak_code = np.where(leaked, 1 + 2 * pair_bits[:, 0] + pair_bits[:, 1], 0)
    return (basis_for_zero * 5 + leak_code).reshape(trials, params.m)


def _sampled_view_statistics(
    params: ProtocolParams, trials: int, randomness: RandomStream
) -> tuple[Quantity, Quantity]:
    """Monte Carlo estimate of the verifier's pre-reveal knowledge.

    Total variation distance is estimated as the held-out advantage of the
    optimal likelihood-ratio distinguisher (per-particle views are iid
    given the bit, so naive Bayes is the optimal joint classifier):
    tv = 2 * accuracy - 1.  The estimator is centered under perfect hiding,
    so its 99% interval covers 0 when there is nothing to learn.  Mutual
    information is the per-particle plug-in estimate times the particle
    count (additivity over conditionally iid views), capped at 1 bit.
    """
    n_atoms = 10
    atoms0 = _sample_view_atoms(params, trials, 0, randomness)
    atoms1 = _sample_view_atoms(params, trials, 1, randomness)
    half = trials // 2
    train0, test0 = atoms0[:half], atoms0[half:]
    train1, test1 = atoms1[:half], atoms1[half:]

    # Smoothed per-atom log-likelihoods from the training half.
    count0 = np.bincount(train0.reshape(-1), minlength=n_atoms) + 0.5
    count1 = np.bincount(train1.reshape(-1), minlength=n_atoms) + 0.5
    log_ratio = np.log(count0 / count0.sum()) - np.log(count1 / count1.sum())

    llr0 = log_ratio[test0].sum(axis=1)
    llr1 = log_ratio[test1].sum(axis=1)
    ties = int(np.sum(llr0 == 0.0) + np.sum(llr1 == 0.0))
    correct = int(np.sum(llr0 > 0.0) + np.sum(llr1 < 0.0))
    correct += int(np.sum(randomness.random(ties) < 0.5)) if ties else 0
    n_test = len(llr0) + len(llr1)
    accuracy = correct / n_test
    tv_value = max(0.0, 2.0 * accuracy - 1.0)
    acc_ci = wilson_interval(correct, n_test)
    tv_ci = (max(0.0, 2.0 * acc_ci[0] - 1.0), min(1.0, 2.0 * acc_ci[1] - 1.0))
    tv_note = "held-out likelihood-ratio distinguisher advantage"

    # Plug-in mutual information per particle, pooled over both halves.
    freq0 = np.bincount(atoms0.reshape(-1), minlength=n_atoms) / atoms0.size
    freq1 = np.bincount(atoms1.reshape(-1), minlength=n_atoms) / atoms1.size
    mix = 0.5 * (freq0 + freq1)
    mi_particle = 0.0
    for f in (freq0, freq1):
        mask = f > 0.0
        mi_particle += 0.5 * float(np.sum(f[mask] * np.log2(f[mask] / mix[mask])))
    mi_value = min(1.0, params.m * mi_particle)
    # Seeded multinomial bootstrap for the interval.
    boot = []
    n_pooled = atoms0.size
    for _ in range(200):
        r0 = randomness.multinomial(n_pooled, freq0) / n_pooled
        r1 = randomness.multinomial(n_pooled, freq1) / n_pooled
        mix_b = 0.5 * (r0 + r1)
        mi_b = 0.0
        for f in (r0, r1):
            mask = f > 0.0
            mi_b += 0.5 * float(np.sum(f[mask] * np.log2(f[mask] / mix_b[mask])))
        boot.append(min(1.0, params.m * mi_b))
    mi_ci = (float(np.quantile(boot, 0.005)), float(np.quantile(boot, 0.995)))
    mi_note = "per-particle plug-in estimate, additive over conditionally iid views"
    return (
        Quantity(tv_value, "monte-carlo", trials=trials, ci=tv_ci, note=tv_note),
        Quantity(mi_value, "monte-carlo", trials=trials, ci=mi_ci, note=mi_note),
    )


def bob_information(
    params: ProtocolParams,
    trials: int = 100_000,
    randomness: RandomStream | None = None,
    mode: str = "auto",
) -> BobInformation:
    """Distinguishability of the verifier's pre-reveal views for bit 0 vs 1.

    With the ideal oracle and an exactly enumerable size (n0 <= 6) the total
    variation distance and mutual information are computed exactly and both
    vanish: the declarations are statistically independent of the protocol
    bit because the committed pairs are uniform.  Larger sizes or a leaky
    oracle fall back to seeded Monte Carlo estimation, flagged as such.
    """
    if mode not in ("auto", "exact", "monte-carlo"):
        raise ValueError(f"unknown mode {mode!r}")
    ideal = params.flip_probability == 0.0 and params.leak_probability == 0.0
    if mode == "exact" or (mode == "auto" and ideal and params.n0 <= 6):
        if not ideal:
            raise ValueError("exact enumeration requires ideal oracle knobs")
        if params.n0 > 6:
            raise ValueError("exact enumeration capped at n0 = 6")
        tv, mi = _exact_view_statistics(params)
        return BobInformation(
            tv_distance=Quantity(tv, "exact", note="full view enumeration"),
            mutual_information_bits=Quantity(mi, "exact", note="full view enumeration"),
            notes=(ORACLE_INTERFACE_NOTE, "honest committer, random committed bits"),
        )
    if randomness is None:
        raise ValueError("monte-carlo mode needs a RandomStream")
    tv, mi = _sampled_view_statistics(params, trials, randomness)
    return BobInformation(
        tv_distance=tv,
        mutual_information_bits=mi,
        notes=(ORACLE_INTERFACE_NOTE, "honest committer, random committed bits"),
    )


@dataclass(frozen=True)
class CheatSum:
    """Best reveal probabilities for both bit values over a strategy class."""

    p0: Quantity
    p1: Quantity
    p_sum: Quantity
    strategy_class: str
    notes: tuple[str, ...] = ()


def _cheat_sum_toy(protocol: ToyBCProtocol, refine: bool) -> CheatSum:
    attack = purification_attack(protocol)
    note0 = note1 = "closed-form purifier steering"
    p0, p1 = attack.p0, attack.p1
    if refine:
        swept0 = sweep_open_probability(protocol, attack.commit_state, 0)
        swept1 = sweep_open_probability(protocol, attack.commit_state, 1)
        note0 = f"closed form {attack.p0!r}; unitary sweep {swept0!r}"
        note1 = f"closed form {attack.p1!r}; unitary sweep {swept1!r}"
        p0, p1 = max(p0, swept0), max(p1, swept1)
    return CheatSum(
        p0=Quantity(p0, "exact", note=note0),
        p1=Quantity(p1, "exact", note=note1),
        p_sum=Quantity(p0 + p1, "exact", note=f"sqrt(F) = {math.sqrt(attack.fidelity)!r}"),
        strategy_class="purifier steering + unitary sweep",
        notes=(STRATEGY_CLASS_NOTE,),
    )


def _cheat_sum_reduction(
    params: ProtocolParams, trials: int | None, randomness: RandomStream | None, strategy_class: str
) -> CheatSum:
    m = params.m
    if strategy_class == "honest":
        return CheatSum(
            p0=Quantity(1.0, "exact", note="honest committer of bit 0"),
            p1=Quantity(0.0, "exact", note="honest committer never claims the other bit"),
            p_sum=Quantity(1.0, "exact"),
            strategy_class="honest",
            notes=(STRATEGY_CLASS_NOTE,),
        )
    # Hedged declarations false on k particles for one bit are false on
    # m - k for the other; the best split is k = 0 (or symmetrically m).
    best_k = max(range(m + 1), key=lambda k: 2.0**-k + 2.0 ** -(m - k))
    p0_value = detection_probability_exact(best_k)
    p1_value = detection_probability_exact(m - best_k)
    notes = [STRATEGY_CLASS_NOTE, ORACLE_INTERFACE_NOTE]
    if trials is None:
        p0 = Quantity(p0_value, "exact", note=f"hedge k={best_k}")
        p1 = Quantity(p1_value, "exact", note=f"hedge k={m - best_k}")
        p_sum = Quantity(p0_value + p1_value, "exact")
    else:
        if randomness is None:
            raise ValueError("monte-carlo confirmation needs a RandomStream")
        strategy0 = ClassicalFlip(best_k) if best_k else Honest()
        strategy1 = ClassicalFlip(m - best_k) if m - best_k else Honest()
        p0 = detection_probability_mc(strategy0, params, trials, randomness)
        p1 = detection_probability_mc(strategy1, params, trials, randomness)
        p_sum = Quantity(
            p0.value + p1.value,
            "monte-carlo",
            trials=trials,
            ci=(p0.ci[0] + p1.ci[0], p0.ci[1] + p1.ci[1]),
            note=f"exact {p0_value + p1_value!r}",
        )
    return CheatSum(p0=p0, p1=p1, p_sum=p_sum, strategy_class="classical-flip hedging", notes=tuple(notes))


def cheat_sum(
    target,
    *,
    trials: int | None = None,
    randomness: RandomStream | None = None,
    strategy_class: str = "classical-flip",
    refine: bool = True,
) -> CheatSum:
    """Maximal p0 + p1 over the implemented strategy class.

    ``target`` is either a :class:`ToyBCProtocol` (purifier-steering attack
    plus numeric unitary sweep) or :class:`ProtocolParams` for the
    reduction protocol (declaration-hedging family, optionally confirmed by
    Monte Carlo when ``trials`` is given).
    """
    if isinstance(target, ToyBCProtocol):
        return _cheat_sum_toy(target, refine)
    if isinstance(target, ProtocolParams):
        return _cheat_sum_reduction(target, trials, randomness, strategy_class)
    raise TypeError(f"cannot analyse {type(target).__name__}")


@dataclass(frozen=True)
class TradeoffRow:
    theta: float
    fidelity: float
    epsilon_bob: Quantity
    p_sum: Quantity
    p0: float
    p1: float


def _helstrom_advantage(rho0, rho1) -> float:
    """Best single-shot distinguishing advantage over guessing: tv/2."""
    difference = rho0.entries - rho1.entries
    eigenvalues = np.linalg.eigvalsh(difference)
    tv = 0.5 * float(np.sum(np.abs(eigenvalues)))
    return 0.5 * tv


def _snap_state(amplitudes: np.ndarray) -> StateVector:
    amps = np.where(np.abs(amplitudes) < 1e-12, 0.0, amplitudes)
    return StateVector(amps / np.linalg.norm(amps))


def nogo_tradeoff_sweep(thetas=None) -> tuple[TradeoffRow, ...]:
    """Hiding/binding tradeoff for commit states |0> and cos(t)|0> + sin(t)|1>.

    Exactly the tension that rules out a finite certified commitment: the
    verifier's distinguishing advantage is (1/2) sqrt(1 - F) while the
    purification attack achieves p0 + p1 = 1 + sqrt(F), so perfect hiding
    (advantage -> 0) forces completely broken binding (p_sum -> 2).
    """
    if thetas is None:
        thetas = np.linspace(0.0, np.pi / 2.0, 9)
    rows = []
    zero = spin_state(SpinLabel.UP)
    for theta in thetas:
        other = _snap_state(np.array([np.cos(theta), np.sin(theta)], dtype=np.complex128))
        rho0, rho1 = zero.density(), other.density()
        f = fidelity(rho0, rho1)
        advantage = 0.5 * math.sqrt(max(0.0, 1.0 - f))
        numeric_advantage = _helstrom_advantage(rho0, rho1)
        attack = purification_attack(ToyBCProtocol((rho0, rho1)))
        p_sum_closed = 1.0 + math.sqrt(f)
        rows.append(
            TradeoffRow(
                theta=float(theta),
                fidelity=f,
                epsilon_bob=Quantity(
                    advantage,
                    "exact",
                    note=f"helstrom cross-check {numeric_advantage!r}",
                ),
                p_sum=Quantity(
                    p_sum_closed,
                    "exact",
                    note=f"attack achieved {attack.p_sum!r}",
                ),
                p0=attack.p0,
                p1=attack.p1,
            )
        )
    return tuple(rows)


@dataclass(frozen=True)
class EvaluationPoint:
    """A spacetime point at which the cheat sum is evaluated."""

    event: Event
    label: str = ""


@dataclass(frozen=True)
class PointEvaluation:
    point: EvaluationPoint
    p0: Quantity
    p1: Quantity
    p_sum: Quantity
    within_bound: bool
    fixed_stages: tuple[str, ...]
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class SecurityReport:
    """Bundle of security quantities for one configuration, with provenance."""

    epsilons: tuple[float, float, float]
    points: tuple[PointEvaluation, ...] = ()
    bob: BobInformation | None = None
    detection_table: tuple[tuple[int, Quantity, Quantity | None], ...] = ()
    cheat: CheatSum | None = None
    notes: tuple[str, ...] = ()

    def to_records(self) -> list[dict]:
        records = [
            {
                "schema": 1,
                "type": "epsilons",
                "hiding": self.epsilons[0],
                "fidelity_defect": self.epsilons[1],
                "leak": self.epsilons[2],
            }
        ]
        for evaluation in self.points:
            records.append(
                {
                    "schema": 1,
                    "type": "point",
                    "label": evaluation.point.label,
                    "t": evaluation.point.event.t,
                    "x": list(evaluation.point.event.x),
                    "p0": evaluation.p0.to_record(),
                    "p1": evaluation.p1.to_record(),
                    "p_sum": evaluation.p_sum.to_record(),
                    "within_bound": evaluation.within_bound,
                    "fixed_stages": list(evaluation.fixed_stages),
                    "flags": list(evaluation.flags),
                }
            )
        if self.bob is not None:
            records.append(
                {
                    "schema": 1,
                    "type": "bob-information",
                    "tv_distance": self.bob.tv_distance.to_record(),
                    "mutual_information_bits": self.bob.mutual_information_bits.to_record(),
                    "notes": list(self.bob.notes),
                }
            )
        for k, exact, mc in self.detection_table:
            record = {
                "schema": 1,
                "type": "detection",
                "k": k,
                "exact": exact.to_record(),
            }
            if mc is not None:
                record["monte_carlo"] = mc.to_record()
            records.append(record)
        if self.cheat is not None:
            records.append(
                {
                    "schema": 1,
                    "type": "cheat-sum",
                    "strategy_class": self.cheat.strategy_class,
                    "p0": self.cheat.p0.to_record(),
                    "p1": self.cheat.p1.to_record(),
                    "p_sum": self.cheat.p_sum.to_record(),
                    "notes": list(self.cheat.notes),
                }
            )
        if self.notes:
            records.append({"schema": 1, "type": "notes", "notes": list(self.notes)})
        return records


def _false_declaration_count(transcript: SessionTranscript, bit: int) -> int:
    labels = {i: transcript.sent_labels[i] for i in transcript.untested}
    count = 0
    for declaration in transcript.declarations:
        if declaration.basis_for(bit) is not labels[declaration.particle].basis:
            count += 1
    return count


def evaluate_relativistic(
    transcript: SessionTranscript,
    points,
    tolerance: float = 1e-9,
) -> SecurityReport:
    """Evaluate p(Q) = p0(Q) + p1(Q) at spacetime points after commitment.

    Whatever lies in the past light cone of Q is fixed by the transcript;
    outside it the committer plays the best member of the implemented
    strategy class.  Points not causally after the commitment point are
    rejected.  The p(Q) <= 1 bound is checked up to the residual
    2^(-m/2 + 1) binding slack of the sampling test.
    """
    params = transcript.params
    schedule = transcript.schedule
    commitment_point = schedule.commitment_point
    bound = 1.0 + 2.0 ** (-params.m / 2.0 + 1.0)
    decl_emit = transcript.events.get("declarations_emitted")
    reveal_emit = transcript.events.get("reveal_emitted")
    # Committer site ids start with "A" by scenario convention.
    alice_actions = [
        message.emit for message in schedule.messages if message.sender.startswith("A")
    ]

    evaluations = []
    for point in points:
        if isinstance(point, Event):
            point = EvaluationPoint(point)
        q = point.event
        if not in_past_cone(commitment_point, q):
            raise ValueError(
                f"evaluation point {point.label or q} is not causally after the commitment point"
            )
        fixed = ["commit"]
        flags = []
        if decl_emit is not None and in_past_cone(decl_emit, q, tolerance):
            fixed.append("declarations")
        if reveal_emit is not None and in_past_cone(reveal_emit, q, tolerance):
            fixed.append("reveal")
        if all(in_past_cone(e, q, tolerance) for e in alice_actions):
            flags.append("causally-vacuous: no committer action remains outside PC(Q)")

        if "reveal" in fixed:
            claimed = transcript.claimed_bit
            accepted = transcript.verdict is Verdict.ACCEPT
            p_values = [0.0, 0.0]
            if claimed is not None and accepted:
                p_values[claimed] = 1.0
            p0 = Quantity(p_values[0], "exact", note="reveal in PC(Q); determined by transcript")
            p1 = Quantity(p_values[1], "exact", note="reveal in PC(Q); determined by transcript")
        elif "declarations" in fixed:
            k0 = _false_declaration_count(transcript, 0)
            k1 = _false_declaration_count(transcript, 1)
            p0 = Quantity(detection_probability_exact(k0), "exact", note=f"{k0} false declarations for 0")
            p1 = Quantity(detection_probability_exact(k1), "exact", note=f"{k1} false declarations for 1")
        else:
            reduction = _cheat_sum_reduction(params, None, None, "classical-flip")
            p0, p1 = reduction.p0, reduction.p1
        p_sum_value = p0.value + p1.value
        evaluations.append(
            PointEvaluation(
                point=point,
                p0=p0,
                p1=p1,
                p_sum=Quantity(p_sum_value, "exact"),
                within_bound=p_sum_value <= bound + tolerance,
                fixed_stages=tuple(fixed),
                flags=tuple(flags),
            )
        )
    return SecurityReport(
        epsilons=params.epsilons,
        points=tuple(evaluations),
        notes=(STRATEGY_CLASS_NOTE, CONTINUUM_NOTE, ORACLE_INTERFACE_NOTE),
    )
