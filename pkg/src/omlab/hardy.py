"""Possibilistic no-go analysis for the altered interferometer.

Two preparations are compared: the balanced superposition made by the
first splitter, and the photon emitted directly into the upper arm.  Each
ontic state carries flags saying which detector can fire at which phase
setting; the zero-probability facts from the quantum run, the invariance of
flags under the phase setting for the upper-arm support, and totality (some
detector must fire) then decide whether the two supports may intersect.
The search over flag assignments is exhaustive: per-state configurations
are enumerated and folded over the ontic space with coverage memoization,
which visits every assignment class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import quantum

PREP_SPLIT = "psi"   # state after the first beam splitter
PREP_UPPER = "phi"   # photon emitted into the upper arm
PREPS = (PREP_SPLIT, PREP_UPPER)
THETAS = ("0", "pi")
DETECTORS = ("d1", "d2")


class HardyError(ValueError):
    pass


class HardyContradiction(HardyError):
    """Flags cannot be equated across settings without starving totality."""

    def __init__(self, lam, facts):
        self.lam = lam
        self.facts = tuple(facts)
        super().__init__(
            f"ontic state {lam!r} would make both detectors impossible: "
            + "; ".join(map(str, facts))
        )


@dataclass(frozen=True)
class ZeroFact:
    preparation: str
    theta: str
    detector: str
    is_zero: bool

    def __str__(self) -> str:
        kind = "zero" if self.is_zero else "nonzero"
        return f"P({self.detector} | {self.preparation}, theta={self.theta}) is {kind}"


def derive_zero_probability_facts() -> tuple:
    """Which (preparation, theta, detector) triples have Born probability
    exactly zero, evaluated from the exact interferometer runs."""
    facts = []
    for prep, source in ((PREP_SPLIT, "first_splitter"), (PREP_UPPER, "upper_arm")):
        for theta in THETAS:
            final = quantum.mz_evolve(theta == "pi", source)
            rho = quantum.projector(final)
            for det in DETECTORS:
                p = quantum.born_probability(rho, quantum.MEAS_DETECTORS, det)
                facts.append(ZeroFact(prep, theta, det, p == Fraction(0)))
    return tuple(facts)


@dataclass(frozen=True)
class PossibilisticAssignment:
    """Support sets plus per-state possibility flags.

    ``flags`` maps (lam, theta, detector) -> bool; totality requires at
    least one detector flagged possible for every state and setting.
    """

    labels: tuple
    psi_support: frozenset
    phi_support: frozenset
    flags: Mapping

    def __post_init__(self):
        object.__setattr__(self, "psi_support", frozenset(self.psi_support))
        object.__setattr__(self, "phi_support", frozenset(self.phi_support))
        object.__setattr__(self, "flags", dict(self.flags))
        if not self.psi_support <= set(self.labels) or not self.phi_support <= set(self.labels):
            raise HardyError("supports must be subsets of the ontic space")
        for lam in self.labels:
            for theta in THETAS:
                if not any(self.flags.get((lam, theta, d), False) for d in DETECTORS):
                    raise HardyError(
                        f"totality violated at {lam!r}, theta={theta}: no detector possible")

    def support(self, prep: str) -> frozenset:
        return self.psi_support if prep == PREP_SPLIT else self.phi_support

    def to_json(self) -> dict:
        return {
            "lambda": list(self.labels),
            "psi_support": sorted(self.psi_support),
            "phi_support": sorted(self.phi_support),
            "possible": {
                f"{lam}|theta={theta}": [d for d in DETECTORS if self.flags[(lam, theta, d)]]
                for lam in self.labels for theta in THETAS
            },
        }


def unconstrained_assignment(labels: Sequence, psi_support: Iterable,
                             phi_support: Iterable) -> PossibilisticAssignment:
    """Everything possible everywhere; the blank slate before any facts."""
    flags = {(lam, theta, d): True
             for lam in labels for theta in THETAS for d in DETECTORS}
    return PossibilisticAssignment(tuple(labels), frozenset(psi_support),
                                   frozenset(phi_support), flags)


def apply_zero_facts(assignment: PossibilisticAssignment,
                     facts: Iterable[ZeroFact]) -> PossibilisticAssignment:
    """Force flags to False wherever a preparation's support meets a
    zero-probability fact (this is the possibilistic-completeness step)."""
    flags = dict(assignment.flags)
    for fact in facts:
        if not fact.is_zero:
            continue
        for lam in assignment.support(fact.preparation):
            flags[(lam, fact.theta, fact.detector)] = False
    return PossibilisticAssignment(assignment.labels, assignment.psi_support,
                                   assignment.phi_support, flags)


def apply_ontic_indifference(assignment: PossibilisticAssignment,
                             zero_facts: Iterable[ZeroFact] = ()) -> PossibilisticAssignment:
    """Equate the theta=0 and theta=pi flags for the upper-arm support.

    A detector stays possible only if it is possible at both settings after
    the zero facts are loaded.  If that leaves some state in the upper-arm
    support with no possible detector, totality fails and the contradiction
    is raised, naming the state and the facts that squeezed it.
    """
    facts = tuple(zero_facts)
    constrained = apply_zero_facts(assignment, facts) if facts else assignment
    flags = dict(constrained.flags)
    for lam in assignment.phi_support:
        equated = {}
        for d in DETECTORS:
            equated[d] = flags[(lam, "0", d)] and flags[(lam, "pi", d)]
        if not any(equated.values()):
            blockers = [f for f in facts if f.is_zero and lam in assignment.support(f.preparation)]
            raise HardyContradiction(lam, blockers)
        for theta in THETAS:
            for d in DETECTORS:
                flags[(lam, theta, d)] = equated[d]
    return PossibilisticAssignment(assignment.labels, assignment.psi_support,
                                   assignment.phi_support, flags)


# --------------------------------------------------------------------------
# exhaustive search

# A per-state configuration: (in_psi, in_phi, flags for (theta, detector)).
_FLAG_KEYS = tuple(itertools.product(THETAS, DETECTORS))


def _valid_configs(facts: Sequence[ZeroFact], enforce_invar: bool) -> tuple:
    zero = {(f.preparation, f.theta, f.detector) for f in facts if f.is_zero}
    configs = []
    for in_psi, in_phi in itertools.product((False, True), repeat=2):
        for bits in itertools.product((False, True), repeat=4):
            flag = dict(zip(_FLAG_KEYS, bits))
            ok = True
            for theta in THETAS:
                if not any(flag[(theta, d)] for d in DETECTORS):
                    ok = False  # totality
            for prep, member in ((PREP_SPLIT, in_psi), (PREP_UPPER, in_phi)):
                if not member:
                    continue
                for theta, d in _FLAG_KEYS:
                    if (prep, theta, d) in zero and flag[(theta, d)]:
                        ok = False
            if enforce_invar and in_phi:
                for d in DETECTORS:
                    if flag[("0", d)] != flag[("pi", d)]:
                        ok = False
            if ok:
                configs.append((in_psi, in_phi, bits))
    return tuple(configs)


def _requirements(facts: Sequence[ZeroFact], require_overlap: bool) -> tuple:
    """Existential demands on an assignment: the overlap itself plus exact
    reproduction of every nonzero triple (some state must allow it)."""
    reqs = []
    if require_overlap:
        reqs.append(("overlap",))
    for f in facts:
        if not f.is_zero:
            reqs.append(("nonzero", f.preparation, f.theta, f.detector))
    return tuple(reqs)


def _config_covers(config: tuple, req: tuple) -> bool:
    in_psi, in_phi, bits = config
    flag = dict(zip(_FLAG_KEYS, bits))
    if req[0] == "overlap":
        return in_psi and in_phi
    _, prep, theta, det = req
    member = in_psi if prep == PREP_SPLIT else in_phi
    return member and flag[(theta, det)]


def search_assignment(lambda_size: int, facts: Sequence[ZeroFact],
                      enforce_invar: bool, require_overlap: bool):
    """Exhaustive search for a satisfying assignment; None if there is none.

    States are filled one by one from the valid per-state configurations;
    memoizing on the set of covered requirements makes the walk over all
    configuration tuples tractable without skipping any of them.
    """
    configs = _valid_configs(facts, enforce_invar)
    reqs = _requirements(facts, require_overlap)
    full = (1 << len(reqs)) - 1
    masks = []
    for config in configs:
        m = 0
        for i, r in enumerate(reqs):
            if _config_covers(config, r):
                m |= 1 << i
        masks.append(m)

    # BFS over coverage masks, remembering one witness path per mask.
    frontier = {0: ()}
    for _ in range(lambda_size):
        nxt = {}
        for covered, path in frontier.items():
            for config, m in zip(configs, masks):
                new = covered | m
                if new not in nxt:
                    nxt[new] = path + (config,)
        frontier = nxt
        if full in frontier:
            break
    if full not in frontier:
        return None
    path = frontier[full]
    # pad with a neutral config (outside both supports, everything possible)
    neutral = (False, False, (True, True, True, True))
    if neutral not in configs:  # pragma: no cover - neutral is always valid
        neutral = configs[0]
    path = path + (neutral,) * (lambda_size - len(path))
    labels = tuple(range(1, lambda_size + 1))
    flags = {}
    psi_support, phi_support = set(), set()
    for lam, (in_psi, in_phi, bits) in zip(labels, path):
        if in_psi:
            psi_support.add(lam)
        if in_phi:
            phi_support.add(lam)
        for (theta, d), b in zip(_FLAG_KEYS, bits):
            flags[(lam, theta, d)] = b
    return PossibilisticAssignment(labels, frozenset(psi_support),
                                   frozenset(phi_support), flags)


def replay_zero_facts(assignment: PossibilisticAssignment,
                      facts: Sequence[ZeroFact]) -> bool:
    """An assignment reproduces the facts iff a triple is zero exactly when
    no state in the preparation's support flags it possible."""
    for f in facts:
        possible = any(assignment.flags[(lam, f.theta, f.detector)]
                       for lam in assignment.support(f.preparation))
        if possible == f.is_zero:
            return False
    return True


@dataclass(frozen=True)
class HardyReport:
    lambda_size: int
    drop_invar: bool
    overlap_required: bool
    overlap_possible: bool
    assignment: PossibilisticAssignment | None
    certificate: dict | None
    facts: tuple

    def to_json(self) -> dict:
        doc = {
            "lambda_size": self.lambda_size,
            "drop_invar": self.drop_invar,
            "overlap_required": self.overlap_required,
            "overlap_possible": self.overlap_possible,
            "facts": [str(f) for f in self.facts],
        }
        if self.certificate is not None:
            doc["certificate"] = self.certificate
        if self.assignment is not None:
            doc["assignment"] = self.assignment.to_json()
        return doc


def hardy_verdict(lambda_size: int, drop_invar: bool = False,
                  require_overlap: bool = True) -> HardyReport:
    """Search for an overlapping possibilistic assignment.

    With invariance enforced no assignment exists at any size: a shared
    state needs d1 impossible (the pi-setting zero fact) and d2 impossible
    (the 0-setting zero fact), which empties its detector set.  Dropping
    invariance exposes the escape assignment whose flags swing with the
    setting, and dropping the overlap requirement splits the ontic space
    between the preparations.
    """
    if lambda_size < 2:
        raise HardyError("need at least two ontic states")
    facts = derive_zero_probability_facts()
    assignment = search_assignment(lambda_size, facts,
                                   enforce_invar=not drop_invar,
                                   require_overlap=require_overlap)
    certificate = None
    if assignment is None and require_overlap and not drop_invar:
        zero_facts = [f for f in facts if f.is_zero and f.preparation == PREP_SPLIT]
        certificate = {
            "lambda": 1,  # representative; every overlap state is blocked alike
            "facts": [str(f) for f in zero_facts],
            "violated": "totality: flag invariance plus the two zero facts "
                        "leave no possible detector at either setting",
        }
    return HardyReport(lambda_size, drop_invar, require_overlap,
                       assignment is not None, assignment, certificate, facts)
