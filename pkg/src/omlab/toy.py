"""Spekkens-style toy theory for one and two elementary systems.

A single system has four true states {1,2,3,4}; what an observer may know
is capped by the knowledge-balance rule, so legal epistemic states are
uniform over a 2-element support (maximal knowledge) or over all four
(total ignorance).  Measurements are 2+2 partitions with a Bayesian update
plus an unknown disturbance, transformations are permutations, and the four
combination rules play the role of superposition with a relative phase.

The disturbance rule is fixed here as uniform resampling inside the
obtained outcome block: it is the unique choice that keeps repeated
measurements reproducible and posteriors knowledge-balanced.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import quantum
from .exact import ExactComplex, phase_eighth
from .models import (
    EpistemicState,
    OnticSpace,
    OntologicalModel,
    ResponseFunction,
)

STATES = (1, 2, 3, 4)


class ToyError(ValueError):
    """Malformed toy-theory object or inconsistent operation."""


class ImpossibleToyOutcome(ToyError):
    """Conditioning on an outcome block of zero prior probability."""


@dataclass(frozen=True)
class ToyEpistemicState:
    """Uniform distribution over a knowledge-balanced support."""

    support: frozenset

    def __post_init__(self):
        s = frozenset(self.support)
        object.__setattr__(self, "support", s)
        if not s <= set(STATES):
            raise ToyError(f"support {sorted(s)} is not a subset of 1..4")
        if len(s) not in (2, 4):
            raise ToyError("knowledge balance allows supports of size 2 or 4 only")

    @property
    def probs(self) -> tuple:
        w = Fraction(1, len(self.support))
        return tuple(w if s in self.support else Fraction(0) for s in STATES)

    def __repr__(self) -> str:
        return "v".join(str(s) for s in sorted(self.support))


def toy_state(*members: int) -> ToyEpistemicState:
    return ToyEpistemicState(frozenset(members))


IGNORANCE = toy_state(1, 2, 3, 4)


@dataclass(frozen=True)
class ToyMeasurement:
    """A partition of {1,2,3,4} into two 2-element blocks."""

    partition: tuple  # two frozensets, ordered by smallest member

    def __post_init__(self):
        blocks = tuple(sorted((frozenset(b) for b in self.partition), key=min))
        object.__setattr__(self, "partition", blocks)
        if len(blocks) != 2 or any(len(b) != 2 for b in blocks):
            raise ToyError("measurement must have exactly two 2-element blocks")
        if blocks[0] | blocks[1] != set(STATES) or blocks[0] & blocks[1]:
            raise ToyError("blocks must be disjoint and cover 1..4")

    def block_of(self, lam: int) -> frozenset:
        for b in self.partition:
            if lam in b:
                return b
        raise ToyError(f"{lam} is not a toy state")

    def __repr__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, sorted(b))) + "}" for b in self.partition) + "}"


MEAS_Z_TOY = ToyMeasurement((frozenset({1, 2}), frozenset({3, 4})))
MEAS_X_TOY = ToyMeasurement((frozenset({1, 3}), frozenset({2, 4})))
MEAS_Y_TOY = ToyMeasurement((frozenset({2, 3}), frozenset({1, 4})))
ALL_TOY_MEASUREMENTS = (MEAS_Z_TOY, MEAS_X_TOY, MEAS_Y_TOY)


@dataclass(frozen=True)
class ToyPermutation:
    """A bijection on {1,2,3,4}; image[i] is the image of state i+1."""

    image: tuple

    def __post_init__(self):
        if sorted(self.image) != list(STATES):
            raise ToyError(f"{self.image} is not a permutation of 1..4")

    def __call__(self, lam: int) -> int:
        return self.image[lam - 1]

    def compose(self, other: "ToyPermutation") -> "ToyPermutation":
        """self after other: (self . other)(x) = self(other(x))."""
        return ToyPermutation(tuple(self(other(s)) for s in STATES))

    def inverse(self) -> "ToyPermutation":
        inv = [0] * 4
        for s in STATES:
            inv[self(s) - 1] = s
        return ToyPermutation(tuple(inv))

    @staticmethod
    def identity() -> "ToyPermutation":
        return ToyPermutation(STATES)

    @staticmethod
    def transposition(j: int, k: int) -> "ToyPermutation":
        img = list(STATES)
        img[j - 1], img[k - 1] = k, j
        return ToyPermutation(tuple(img))

    @staticmethod
    def from_transpositions(pairs: Iterable[tuple]) -> "ToyPermutation":
        perm = ToyPermutation.identity()
        for j, k in pairs:
            perm = ToyPermutation.transposition(j, k).compose(perm)
        return perm


@dataclass(frozen=True)
class CompositeToyState:
    """Uniform distribution over a set of ontic pairs for systems (a, b)."""

    support: frozenset  # of (a, b) pairs

    def __post_init__(self):
        s = frozenset(tuple(p) for p in self.support)
        object.__setattr__(self, "support", s)
        if not s:
            raise ToyError("composite support must be nonempty")
        for a, b in s:
            if a not in STATES or b not in STATES:
                raise ToyError(f"pair ({a},{b}) is not in 1..4 x 1..4")

    def kb_class(self) -> str | None:
        """'product', 'correlated', 'ignorance', or None for other supports."""
        if len(self.support) == 16:
            return "ignorance"
        if len(self.support) == 4:
            a_side = {a for a, _ in self.support}
            b_side = {b for _, b in self.support}
            if len(a_side) == 4 and len(b_side) == 4:
                return "correlated"
            if len(a_side) == 2 and len(b_side) == 2 and \
                    self.support == frozenset(itertools.product(a_side, b_side)):
                return "product"
        return None


# --------------------------------------------------------------------------
# knowledge measure and validation

def _question_subsets():
    for r in (1, 2, 3):
        yield from (frozenset(c) for c in itertools.combinations(STATES, r))


def canonical_sets() -> tuple:
    """All 2-question sets that pin down the true state uniquely."""
    result = []
    qs = list(_question_subsets())
    for s1, s2 in itertools.combinations(qs, 2):
        cells = [s1 & s2, s1 - s2, s2 - s1, set(STATES) - (s1 | s2)]
        if all(len(c) <= 1 for c in cells):
            result.append((s1, s2))
    return tuple(result)


_CANONICAL_SETS = canonical_sets()


def _as_prob_vector(probs: Sequence) -> tuple:
    v = tuple(Fraction(p) for p in probs)
    if len(v) != 4 or any(p < 0 for p in v) or sum(v) != 1:
        raise ToyError(f"{probs} is not a probability vector over 1..4")
    return v


def knowledge_measure(probs: Sequence) -> int:
    """Number of canonical-set questions whose answer is certain, maximized
    over all canonical sets."""
    v = _as_prob_vector(probs)

    def known(question: frozenset) -> bool:
        p = sum(v[s - 1] for s in question)
        return p == 0 or p == 1

    return max(sum(1 for q in cs if known(q)) for cs in _CANONICAL_SETS)


def kb_validate(probs: Sequence) -> bool:
    """True iff the vector is uniform over a 2-element or 4-element support."""
    v = _as_prob_vector(probs)
    support = [s for s in STATES if v[s - 1] > 0]
    if len(support) not in (2, 4):
        return False
    return all(v[s - 1] == Fraction(1, len(support)) for s in support)


# --------------------------------------------------------------------------
# measurement, disturbance, transformation

def measurement_distribution(state: ToyEpistemicState, meas: ToyMeasurement) -> dict:
    """Exact outcome-block probabilities for an epistemic state."""
    n = len(state.support)
    return {b: Fraction(len(b & state.support), n) for b in meas.partition}


def measure_update(state: ToyEpistemicState, meas: ToyMeasurement,
                   outcome_block: frozenset) -> ToyEpistemicState:
    """Post-measurement epistemic state: uniform on the obtained block.

    The Bayesian posterior given the block is re-randomized by the
    measurement disturbance, so the final knowledge is always the uniform
    KB state on the block.
    """
    block = frozenset(outcome_block)
    if block not in meas.partition:
        raise ToyError(f"{sorted(block)} is not a block of {meas!r}")
    if not block & state.support:
        raise ImpossibleToyOutcome(f"block {sorted(block)} has zero prior probability")
    return ToyEpistemicState(block)


def ontic_simulate_measurement(lam: int, meas: ToyMeasurement,
                               rng: random.Random) -> tuple:
    """Simulate one measurement at the ontic level.

    The outcome is the block containing lam; the disturbance then resamples
    the true state uniformly inside that block.
    """
    if lam not in STATES:
        raise ToyError(f"{lam} is not a toy state")
    block = meas.block_of(lam)
    return block, rng.choice(sorted(block))


def apply_permutation(state, perm: ToyPermutation, party: int | None = None):
    """Map a state's support elementwise through a permutation.

    For composite states, ``party`` (0 or 1) selects which subsystem's
    coordinate the permutation acts on.
    """
    if isinstance(state, ToyEpistemicState):
        return ToyEpistemicState(frozenset(perm(s) for s in state.support))
    if isinstance(state, CompositeToyState):
        if party not in (0, 1):
            raise ToyError("composite permutation needs party 0 or 1")
        if party == 0:
            return CompositeToyState(frozenset((perm(a), b) for a, b in state.support))
        return CompositeToyState(frozenset((a, perm(b)) for a, b in state.support))
    raise ToyError(f"cannot permute {state!r}")


# --------------------------------------------------------------------------
# combination rules

class CombinationRule(Enum):
    """The four ways of combining disjoint KB states, with their quantum
    relative-phase tags.

    Convention table (fixed by the worked instances in the source model):

        rule   pick from first   pick from second   phase
        +1     lowest            lowest             e^{i 0}
        +2     highest           highest            e^{i pi}
        +3     highest           lowest             e^{i pi/2}
        +4     lowest            highest            e^{i 3pi/2}
    """

    RULE_1 = 1
    RULE_2 = 2
    RULE_3 = 3
    RULE_4 = 4

    @property
    def phase(self) -> ExactComplex:
        return {1: phase_eighth(0), 2: phase_eighth(4),
                3: phase_eighth(2), 4: phase_eighth(6)}[self.value]

    @property
    def phase_name(self) -> str:
        return {1: "e^{i0}", 2: "e^{i pi}", 3: "e^{i pi/2}", 4: "e^{i 3pi/2}"}[self.value]


def combine(a: ToyEpistemicState, b: ToyEpistemicState,
            rule: CombinationRule) -> ToyEpistemicState:
    """Combine two disjoint 2-element KB states into a new KB state."""
    if len(a.support) != 2 or len(b.support) != 2:
        raise ToyError("combination needs 2-element supports")
    if a.support & b.support:
        raise ToyError("combination needs disjoint supports")
    pick = {
        CombinationRule.RULE_1: (min(a.support), min(b.support)),
        CombinationRule.RULE_2: (max(a.support), max(b.support)),
        CombinationRule.RULE_3: (max(a.support), min(b.support)),
        CombinationRule.RULE_4: (min(a.support), max(b.support)),
    }[rule]
    return ToyEpistemicState(frozenset(pick))


# --------------------------------------------------------------------------
# the toy <-> qubit correspondence

STATE_SUPPORT = {
    "0": frozenset({1, 2}),
    "1": frozenset({3, 4}),
    "+": frozenset({1, 3}),
    "-": frozenset({2, 4}),
    "+i": frozenset({2, 3}),
    "-i": frozenset({1, 4}),
}
SUPPORT_STATE = {v: k for k, v in STATE_SUPPORT.items()}

# Outcome labels for the three partition measurements, block -> label.
MEASUREMENT_TABLE = {
    "Z": (MEAS_Z_TOY, {frozenset({1, 2}): "0", frozenset({3, 4}): "1"}),
    "X": (MEAS_X_TOY, {frozenset({1, 3}): "+", frozenset({2, 4}): "-"}),
    "Y": (MEAS_Y_TOY, {frozenset({2, 3}): "+i", frozenset({1, 4}): "-i"}),
}


def build_toy_model() -> OntologicalModel:
    """The full six-state, three-measurement model with 0/1 responses."""
    space = OnticSpace(STATES)
    preparations = {
        label: EpistemicState(space, ToyEpistemicState(supp).probs)
        for label, supp in STATE_SUPPORT.items()
    }
    measurements = {}
    for name, (meas, labels) in MEASUREMENT_TABLE.items():
        outcomes = tuple(labels[b] for b in meas.partition)
        table = tuple(
            tuple(Fraction(1) if s in b else Fraction(0) for s in STATES)
            for b in meas.partition
        )
        measurements[name] = ResponseFunction(space, outcomes, table)
    return OntologicalModel(space, preparations, measurements)


def toy_born_table() -> dict:
    """Exact Born probabilities for all 36 (prep, meas, outcome) triples."""
    table = {}
    for prep, ket in quantum.PM_STATES.items():
        rho = quantum.projector(ket)
        for meas_name, meas in quantum.MEAS_BY_NAME.items():
            for outcome in meas.outcomes:
                table[(prep, meas_name, outcome)] = quantum.born_probability(rho, meas, outcome)
    return table


@dataclass(frozen=True)
class AnalogyRow:
    left: ToyEpistemicState
    right: ToyEpistemicState
    rule: CombinationRule
    toy_result: ToyEpistemicState
    quantum_label: str
    quantum_support: frozenset
    match: bool


@dataclass(frozen=True)
class AnalogyReport:
    rows: tuple

    def mismatches(self) -> tuple:
        return tuple(r for r in self.rows if not r.match)


def analogy_failure_check() -> AnalogyReport:
    """Compare every combination-rule instance with the quantum superposition.

    For each ordered pair of disjoint KB states and each rule, the toy side
    combines supports while the quantum side forms
    (1/sqrt2)(|a> + phase |b>) and maps the resulting reference state back
    to a support.  The two +3/+4 instances built from |+> and |-> land on
    each other's targets; everything else lines up.
    """
    pairs = []
    for supp_a, supp_b in itertools.permutations(STATE_SUPPORT.values(), 2):
        if not supp_a & supp_b:
            pairs.append((ToyEpistemicState(supp_a), ToyEpistemicState(supp_b)))
    rows = []
    for a, b in pairs:
        ket_a = quantum.PM_STATES[SUPPORT_STATE[a.support]]
        ket_b = quantum.PM_STATES[SUPPORT_STATE[b.support]]
        for rule in CombinationRule:
            toy_result = combine(a, b, rule)
            q = quantum.superpose(ket_a, ket_b, rule.phase)
            label = quantum.identify_pm_state(q)
            if label is None:
                raise ToyError("superposition left the six-state family")
            q_supp = STATE_SUPPORT[label]
            rows.append(AnalogyRow(a, b, rule, toy_result, label, q_supp,
                                   toy_result.support == q_supp))
    return AnalogyReport(tuple(rows))


# --------------------------------------------------------------------------
# interferometry

MZ_SPLITTER = ToyPermutation.transposition(2, 3)
MZ_MIRRORS = ToyPermutation.transposition(1, 3)
MZ_PHASE = ToyPermutation.from_transpositions([(1, 2), (3, 4)])


def mz_toy_steps(phase_in: bool) -> tuple:
    steps = [("splitter", MZ_SPLITTER), ("mirrors", MZ_MIRRORS)]
    if phase_in:
        steps.append(("phase", MZ_PHASE))
    steps.append(("splitter", MZ_SPLITTER))
    return tuple(steps)


def mz_toy_run(phase_in: bool) -> ToyEpistemicState:
    """Run the interferometer permutation sequence starting from 1v2."""
    state = toy_state(1, 2)
    for _, perm in mz_toy_steps(phase_in):
        state = apply_permutation(state, perm)
    return state


# --------------------------------------------------------------------------
# composite systems

def make_correlated(pairing: Mapping[int, int]) -> CompositeToyState:
    """The perfectly correlated state {(i, pairing(i))} for a bijection."""
    image = [pairing[s] for s in STATES]
    if sorted(image) != list(STATES):
        raise ToyError("pairing must be a bijection on 1..4")
    return CompositeToyState(frozenset((s, pairing[s]) for s in STATES))


def product_composite(a: ToyEpistemicState, b: ToyEpistemicState) -> CompositeToyState:
    return CompositeToyState(frozenset(itertools.product(a.support, b.support)))


def marginal(state: CompositeToyState, party: int) -> dict:
    """Exact marginal distribution of one subsystem."""
    n = len(state.support)
    out = {s: Fraction(0) for s in STATES}
    for pair in state.support:
        out[pair[party]] += Fraction(1, n)
    return out


DisturbanceRule = Callable[[frozenset], tuple]


def _uniform_disturbance(block: frozenset) -> tuple:
    w = Fraction(1, len(block))
    return tuple((lam, w) for lam in sorted(block))


def _collapse_min_disturbance(block: frozenset) -> tuple:
    return ((min(block), Fraction(1)),)


DISTURBANCES = {"uniform": _uniform_disturbance, "collapse_min": _collapse_min_disturbance}


def composite_outcome_distribution(state: CompositeToyState, meas: ToyMeasurement,
                                   party: int) -> dict:
    n = len(state.support)
    out = {b: Fraction(0) for b in meas.partition}
    for pair in state.support:
        out[meas.block_of(pair[party])] += Fraction(1, n)
    return out


def composite_measure(state: CompositeToyState, meas: ToyMeasurement, party: int,
                      outcome_block: frozenset,
                      disturbance: str = "uniform") -> CompositeToyState:
    """Condition the joint support on one party's outcome and disturb only
    that party's coordinate."""
    block = frozenset(outcome_block)
    if block not in meas.partition:
        raise ToyError(f"{sorted(block)} is not a block of {meas!r}")
    conditioned = [p for p in state.support if p[party] in block]
    if not conditioned:
        raise ImpossibleToyOutcome(f"block {sorted(block)} has zero prior probability")
    resample = DISTURBANCES[disturbance]
    new_pairs = set()
    weights = {}
    n = len(conditioned)
    for pair in conditioned:
        for lam, w in resample(block):
            new = (lam, pair[1]) if party == 0 else (pair[0], lam)
            new_pairs.add(new)
            weights[new] = weights.get(new, Fraction(0)) + w * Fraction(1, n)
    # Reachable toy states keep the post-measurement distribution uniform;
    # anything else would leave the theory's state space.
    values = set(weights.values())
    if len(values) != 1:
        raise ToyError("post-measurement joint distribution is not uniform")
    return CompositeToyState(frozenset(new_pairs))


@dataclass(frozen=True)
class SteeringResult:
    probability: Fraction
    updated: CompositeToyState
    bob_marginal: dict
    joint_at_measurement: frozenset  # pairs compatible with the outcome, pre-disturbance


def steering_inference(state: CompositeToyState, alice_meas: ToyMeasurement,
                       alice_outcome: frozenset) -> SteeringResult:
    """Update the joint state on Alice's outcome and report Bob's marginal.

    ``joint_at_measurement`` is the exact retrodiction: the set of ontic
    pairs the composite could have occupied at the moment of measurement.
    """
    block = frozenset(alice_outcome)
    dist = composite_outcome_distribution(state, alice_meas, 0)
    prob = dist.get(block)
    if prob is None:
        raise ToyError(f"{sorted(block)} is not a block of {alice_meas!r}")
    if prob == 0:
        raise ImpossibleToyOutcome(f"block {sorted(block)} has zero prior probability")
    conditioned = frozenset(p for p in state.support if p[0] in block)
    updated = composite_measure(state, alice_meas, 0, block)
    bob = marginal(updated, 1)
    return SteeringResult(prob, updated, bob, conditioned)


@dataclass(frozen=True)
class SteeringTranscript:
    steps: tuple
    retrodicted_state: int

    def to_json(self) -> list:
        return [dict(s) for s in self.steps] + [
            {"conclusion": f"both systems were in state {self.retrodicted_state} "
                           f"during the first measurement"}
        ]


def steering_retrodiction_demo() -> SteeringTranscript:
    """The two-measurement protocol on the identity-correlated state.

    First measurement {{1,3},{2,4}} with outcome {1,3} shows both systems
    shared a state in {1,3}; the follow-up {{1,2},{3,4}} with outcome {1,2}
    intersects the knowledge chain down to state 1.  The disturbance of the
    first measurement stays inside its outcome block, so the intersection
    pins Alice's state at the second measurement; the protocol reads the
    chain as the shared state the pair occupied at the first one.
    """
    state = make_correlated({1: 1, 2: 2, 3: 3, 4: 4})
    first_block = frozenset({1, 3})
    r1 = steering_inference(state, MEAS_X_TOY, first_block)
    second_block = frozenset({1, 2})
    r2 = steering_inference(r1.updated, MEAS_Z_TOY, second_block)
    chain = first_block & second_block
    if len(chain) != 1:
        raise ToyError("retrodiction chain did not single out one state")
    steps = (
        (("measurement", "X"), ("outcome", sorted(first_block)),
         ("joint_at_measurement", sorted(map(list, r1.joint_at_measurement))),
         ("bob_marginal_support", sorted(s for s, w in r1.bob_marginal.items() if w > 0))),
        (("measurement", "Z"), ("outcome", sorted(second_block)),
         ("joint_at_measurement", sorted(map(list, r2.joint_at_measurement))),
         ("bob_marginal_support", sorted(s for s, w in r2.bob_marginal.items() if w > 0))),
    )
    return SteeringTranscript(steps, next(iter(chain)))


@dataclass(frozen=True)
class NoSignalingReport:
    bob_distributions: dict  # (alice_idx, bob_idx) -> {block: Fraction}
    max_variation: Fraction


def no_signaling_check(state: CompositeToyState,
                       alice_options: Sequence[ToyMeasurement],
                       bob_options: Sequence[ToyMeasurement] = ALL_TOY_MEASUREMENTS,
                       disturbance: str = "uniform") -> NoSignalingReport:
    """Bob's outcome statistics under every choice Alice can make.

    Enumerates ontic pairs and disturbance branches exactly: Alice measures
    first (her coordinate is disturbed per the rule), then Bob's outcome is
    read off his untouched coordinate.
    """
    resample = DISTURBANCES[disturbance]
    n = len(state.support)
    dists = {}
    for ai, alice_meas in enumerate(alice_options):
        for bi, bob_meas in enumerate(bob_options):
            acc = {b: Fraction(0) for b in bob_meas.partition}
            for a, b in state.support:
                a_block = alice_meas.block_of(a)
                for _, w in resample(a_block):
                    acc[bob_meas.block_of(b)] += w * Fraction(1, n)
            dists[(ai, bi)] = acc
    variation = Fraction(0)
    for bi, bob_meas in enumerate(bob_options):
        for block in bob_meas.partition:
            vals = [dists[(ai, bi)][block] for ai in range(len(alice_options))]
            variation = max(variation, max(vals) - min(vals))
    return NoSignalingReport(dists, variation)


# --------------------------------------------------------------------------
# the non-commutativity transcript

@dataclass(frozen=True)
class NoncommutativityTranscript:
    a_outcome_when_first: dict  # A measured directly on the initial state
    a_then_b: dict              # B-outcome distribution after A went first
    b_then_a: dict              # A-outcome distribution after B went first
    a_then_a: dict              # control: repeating A is deterministic

    def differs(self) -> bool:
        """The A statistics depend on whether B intervened."""
        return self.a_outcome_when_first != self.b_then_a

    def to_json(self) -> list:
        def dist(d):
            return {"v".join(map(str, sorted(b))): f"{p.numerator}/{p.denominator}"
                    for b, p in d.items()}

        return [
            {"step": "A on 1v2", "distribution": dist(self.a_outcome_when_first)},
            {"step": "A then B", "distribution": dist(self.a_then_b)},
            {"step": "B then A", "distribution": dist(self.b_then_a)},
            {"step": "A then A", "distribution": dist(self.a_then_a)},
        ]


def _two_stage_distribution(initial: ToyEpistemicState, first: ToyMeasurement,
                            second: ToyMeasurement) -> dict:
    """Exact distribution of the second measurement's outcome blocks."""
    out = {b: Fraction(0) for b in second.partition}
    for block1, p1 in measurement_distribution(initial, first).items():
        if p1 == 0:
            continue
        mid = measure_update(initial, first, block1)
        for block2, p2 in measurement_distribution(mid, second).items():
            out[block2] += p1 * p2
    return out


def noncommutativity_demo() -> NoncommutativityTranscript:
    """A = {{1,2},{3,4}} and B = {{1,3},{2,4}} on the state 1v2, both orders."""
    initial = toy_state(1, 2)
    return NoncommutativityTranscript(
        a_outcome_when_first=measurement_distribution(initial, MEAS_Z_TOY),
        a_then_b=_two_stage_distribution(initial, MEAS_Z_TOY, MEAS_X_TOY),
        b_then_a=_two_stage_distribution(initial, MEAS_X_TOY, MEAS_Z_TOY),
        a_then_a=_two_stage_distribution(initial, MEAS_Z_TOY, MEAS_Z_TOY),
    )


# --------------------------------------------------------------------------
# serialization

def state_to_json(state) -> dict:
    if isinstance(state, ToyEpistemicState):
        return {"support": sorted(state.support)}
    if isinstance(state, CompositeToyState):
        return {"support": sorted(map(list, state.support))}
    raise ToyError(f"cannot serialize {state!r}")


def state_from_json(doc: dict):
    supp = doc["support"]
    if supp and isinstance(supp[0], list):
        return CompositeToyState(frozenset(tuple(p) for p in supp))
    return ToyEpistemicState(frozenset(supp))
