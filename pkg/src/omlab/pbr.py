"""The product-preparation no-go scenario as exact constraint satisfaction.

The scenario pairs the four product preparations over {|0>, |+>} with the
entangled four-outcome basis that is orthogonal to them one by one.  Asking
for a response function that reproduces the Born table while the single
system epistemic states overlap is a linear feasibility question once the
epistemic weights are fixed, so the search runs in two stages: an outer
grid over rational weight vectors (step 1/D) and an exact inner LP over the
joint response entries.  Infeasibility comes with an explicit contradiction
chain: the zero-Born pairs force the response to vanish on the shared
overlap cell, which starves the outcome-completeness row there.

A null-outcome escape hatch is also provided: the outcome set gains an
"absorbed" outcome, Born statistics are matched after post-selecting on
real outcomes, and a budget caps the per-preparation no-show rate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from . import quantum
from .exact import INV_SQRT2
from .models import (
    EpistemicState,
    OnticSpace,
    OntologicalModel,
    ResponseFunction,
    frac_str,
    reproduction_check,
)
from .simplex import find_feasible
from .toy import ALL_TOY_MEASUREMENTS, CompositeToyState, make_correlated, product_composite, toy_state

PREP_LABELS = ("Psi1", "Psi2", "Psi3", "Psi4")
OUTCOME_LABELS = ("phi1", "phi2", "phi3", "phi4")
NULL = "null"


class PbrError(ValueError):
    pass


def _preparations() -> dict:
    k0, kp = quantum.KET_0, quantum.KET_PLUS
    return {
        "Psi1": quantum.tensor(k0, k0),
        "Psi2": quantum.tensor(k0, kp),
        "Psi3": quantum.tensor(kp, k0),
        "Psi4": quantum.tensor(kp, kp),
    }


def _measurement_kets() -> dict:
    k0, k1 = quantum.KET_0, quantum.KET_1
    kp, km = quantum.KET_PLUS, quantum.KET_MINUS
    s = INV_SQRT2
    return {
        "phi1": quantum.combine_kets([(s, quantum.tensor(k0, k1)), (s, quantum.tensor(k1, k0))]),
        "phi2": quantum.combine_kets([(s, quantum.tensor(k0, km)), (s, quantum.tensor(k1, kp))]),
        "phi3": quantum.combine_kets([(s, quantum.tensor(kp, k1)), (s, quantum.tensor(km, k0))]),
        "phi4": quantum.combine_kets([(s, quantum.tensor(kp, km)), (s, quantum.tensor(km, kp))]),
    }


@dataclass(frozen=True)
class PbrScenario:
    preparations: Mapping[str, quantum.Ket]
    measurement_kets: Mapping[str, quantum.Ket]
    measurement: quantum.ProjectiveMeasurement
    q: Fraction

    def born_table(self) -> dict:
        """Exact Born probabilities, (prep, outcome) -> Fraction."""
        out = {}
        for p, psi in self.preparations.items():
            rho = quantum.projector(psi)
            for k in OUTCOME_LABELS:
                out[(p, k)] = quantum.born_probability(rho, self.measurement, k)
        return out


def build_pbr_scenario(q: Fraction = Fraction(1, 4)) -> PbrScenario:
    """Construct the scenario in exact arithmetic and verify its invariants."""
    q = Fraction(q)
    if not 0 < q <= 1:
        raise PbrError("overlap floor q must lie in (0, 1]")
    preps = _preparations()
    kets = _measurement_kets()
    # Orthonormality of the measurement basis, exact.
    for a, b in itertools.product(OUTCOME_LABELS, repeat=2):
        ov = quantum.inner(kets[a], kets[b])
        want = Fraction(1) if a == b else Fraction(0)
        if not (ov - quantum.ExactComplex.of(want)).is_zero():
            raise PbrError("measurement basis failed the Gram check")
    # The one-by-one orthogonality that drives the argument.
    for j in range(1, 5):
        ov = quantum.inner(kets[f"phi{j}"], preps[f"Psi{j}"])
        if not ov.is_zero():
            raise PbrError(f"<phi{j}|Psi{j}> != 0")
    meas = quantum.basis_measurement(kets)
    return PbrScenario(preps, kets, meas, q)


@dataclass(frozen=True)
class DeltaLemmaResult:
    holds: bool
    lambda_star: object | None
    joint_bound: Fraction | None  # guaranteed mass of every product at (l*, l*)


def check_delta_lemma(p0: EpistemicState, pplus: EpistemicState, q: Fraction) -> DeltaLemmaResult:
    """Search for a single ontic state carrying weight >= q under both
    epistemic states; product weights then put >= q^2 on the diagonal cell."""
    q = Fraction(q)
    if q <= 0:
        raise PbrError("q must be positive")
    if p0.space != pplus.space:
        raise PbrError("epistemic states live on different ontic spaces")
    for lam, w0, wp in zip(p0.space.labels, p0.weights, pplus.weights):
        if w0 >= q and wp >= q:
            return DeltaLemmaResult(True, lam, min(w0, wp) ** 2)
    return DeltaLemmaResult(False, None, None)


# --------------------------------------------------------------------------
# feasibility problems

@dataclass(frozen=True)
class FeasibilityProblem:
    """Two-stage search space for a reproducing response function.

    The single-system ontic space has ``lambda_size`` states; epistemic
    weights range over the grid of multiples of 1/grid_denominator.  With
    ``q`` set, both weight vectors must put at least q on the designated
    first ontic state (the forced overlap).  ``relax_product`` swaps the
    product-form joints for a family of non-product joints that keep only
    the positive shared diagonal cell, the weakest reading under which the
    argument still bites.
    """

    lambda_size: int = 4
    grid_denominator: int = 4
    q: Fraction | None = Fraction(1, 4)
    relax_product: bool = False
    null_budget: Fraction | None = None
    star_index: int = 0  # which ontic state carries the forced overlap
    max_lambda_size: int = field(default=8, repr=False)

    def __post_init__(self):
        if not 1 <= self.lambda_size <= self.max_lambda_size:
            raise PbrError(f"lambda size must be in 1..{self.max_lambda_size}")
        if not 0 <= self.star_index < self.lambda_size:
            raise PbrError("star index out of range")
        if self.grid_denominator < 1:
            raise PbrError("grid denominator must be >= 1")
        if self.q is not None:
            object.__setattr__(self, "q", Fraction(self.q))
            if not 0 < self.q <= 1:
                raise PbrError("q must lie in (0, 1]")
        if self.null_budget is not None:
            object.__setattr__(self, "null_budget", Fraction(self.null_budget))
            if not 0 <= self.null_budget < 1:
                raise PbrError("null budget must lie in [0, 1)")

    @property
    def labels(self) -> tuple:
        return tuple(range(1, self.lambda_size + 1))

    @property
    def cells(self) -> tuple:
        return tuple(itertools.product(self.labels, repeat=2))


def weight_grid(n: int, denominator: int, floor: Fraction | None = None,
                floor_index: int = 0) -> Iterator[tuple]:
    """All length-n vectors of multiples of 1/denominator summing to 1,
    optionally with a floor on one designated entry.  Mass-concentrated
    vectors come first so that delta-style witnesses are found early."""
    d = denominator

    def rec(remaining: int, slots: int):
        if slots == 1:
            yield (remaining,)
            return
        for k in range(remaining, -1, -1):
            for rest in rec(remaining - k, slots - 1):
                yield (k,) + rest

    min_floor = 0
    if floor is not None:
        # smallest multiple of 1/d that is >= floor
        min_floor = -((-floor.numerator * d) // floor.denominator)
    for combo in rec(d, n):
        if combo[floor_index] < min_floor:
            continue
        yield tuple(Fraction(k, d) for k in combo)


def product_joint(p0: Sequence[Fraction], pplus: Sequence[Fraction],
                  labels: Sequence) -> dict:
    """(Prod. 2): joint weights for the four preparations as products."""
    singles = {"0": dict(zip(labels, p0)), "+": dict(zip(labels, pplus))}
    pattern = {"Psi1": ("0", "0"), "Psi2": ("0", "+"), "Psi3": ("+", "0"), "Psi4": ("+", "+")}
    joints = {}
    for prep, (k, l) in pattern.items():
        joints[prep] = {
            (a, b): singles[k][a] * singles[l][b]
            for a, b in itertools.product(labels, repeat=2)
            if singles[k][a] * singles[l][b] > 0
        }
    return joints


def relaxed_joints(p0: Sequence[Fraction], pplus: Sequence[Fraction],
                   labels: Sequence, star_index: int = 0) -> list:
    """Non-product joint families keeping only the shared positive diagonal
    cell that the positivity reading guarantees.

    Every family places the guaranteed q^2-style mass on (l*, l*) and
    redistributes the rest without any product structure: concentrated on a
    preparation-specific private cell, or spread uniformly.
    """
    star = labels[star_index]
    base = min(p0[star_index], pplus[star_index]) ** 2
    cells = list(itertools.product(labels, repeat=2))
    families = [product_joint(p0, pplus, labels)]
    if base <= 0:
        # no shared positive cell: the positivity reading has nothing to add
        return families
    # concentrated: rest of the mass on one private off-diagonal cell each
    private = {}
    spare = [c for c in cells if c != (star, star)]
    for i, prep in enumerate(PREP_LABELS):
        private[prep] = spare[i % len(spare)]
    families.append({
        prep: {(star, star): base, private[prep]: 1 - base}
        for prep in PREP_LABELS
    })
    # spread: rest of the mass uniform over all other cells
    if len(cells) > 1:
        share = (1 - base) / (len(cells) - 1)
        families.append({
            prep: {c: (base if c == (star, star) else share) for c in cells}
            for prep in PREP_LABELS
        })
    return families


BORN_ZERO_PAIRS = tuple((p, k) for p, k in zip(PREP_LABELS, OUTCOME_LABELS))


@dataclass(frozen=True)
class InnerResult:
    feasible: bool
    xi: dict | None            # (outcome, cell) -> Fraction
    certificate: dict | None   # contradiction chain for this joint family


def _inner_feasibility(joints: Mapping[str, Mapping], born: Mapping,
                       cells: Sequence, null_budget: Fraction | None) -> InnerResult:
    """Exact LP over response entries for fixed joint weights.

    Presolve propagates the zero-Born equalities (all coefficients are
    nonnegative, so positive-weight cells force zero entries); if that
    starves an outcome-completeness row the contradiction chain is returned
    directly, otherwise the reduced system goes to the simplex.
    """
    outcomes = list(OUTCOME_LABELS) + ([NULL] if null_budget is not None else [])
    forced: dict = {}
    forced_by: dict = {}
    for prep, k in BORN_ZERO_PAIRS:
        if born[(prep, k)] != 0:
            continue
        for cell, w in joints[prep].items():
            if w > 0 and (k, cell) not in forced:
                forced[(k, cell)] = Fraction(0)
                forced_by[(k, cell)] = prep
    for cell in cells:
        zeroed = [k for k in OUTCOME_LABELS if (k, cell) in forced]
        if len(zeroed) == len(OUTCOME_LABELS):
            if null_budget is None:
                chain = [
                    {"pair": [PREP_LABELS.index(forced_by[(k, cell)]) + 1,
                              OUTCOME_LABELS.index(k) + 1],
                     "lambda": list(cell),
                     "violated_equation": "Born=0 vs model>0"}
                    for k in zeroed
                ]
                return InnerResult(False, None, {
                    "lambda": list(cell),
                    "forced_zeros": chain,
                    "pair": chain[0]["pair"],
                    "violated_equation":
                        "outcome completeness: sum_k xi(k) = 1 at this cell, "
                        "but every xi(k) is forced to 0 by a zero-Born pair",
                })
            forced[(NULL, cell)] = Fraction(1)

    var_index = {}
    for k in outcomes:
        for cell in cells:
            if (k, cell) not in forced:
                var_index[(k, cell)] = len(var_index)

    def term(key):
        """(var_id, fixed_value): one of the two is None."""
        if key in forced:
            return None, forced[key]
        return var_index[key], None

    equalities = []
    # outcome completeness per cell
    for cell in cells:
        coeffs, const = {}, Fraction(0)
        for k in outcomes:
            v, fx = term((k, cell))
            if v is None:
                const += fx
            else:
                coeffs[v] = coeffs.get(v, Fraction(0)) + 1
        if not coeffs:
            if const != 1:
                return InnerResult(False, None, {
                    "lambda": list(cell), "pair": None,
                    "violated_equation": "outcome completeness row fixed to "
                                         f"{frac_str(const)} != 1",
                })
            continue
        equalities.append((coeffs, Fraction(1) - const))
    # Born reproduction; with a null outcome the match is post-selected:
    # sum_cell p xi(k) = born * (1 - sum_cell p xi(null))
    for prep in PREP_LABELS:
        for k in OUTCOME_LABELS:
            b = born[(prep, k)]
            coeffs, const = {}, Fraction(0)
            for cell, w in joints[prep].items():
                if w == 0:
                    continue
                v, fx = term((k, cell))
                if v is None:
                    const += w * fx
                else:
                    coeffs[v] = coeffs.get(v, Fraction(0)) + w
                if null_budget is not None:
                    vn, fxn = term((NULL, cell))
                    if vn is None:
                        const += b * w * fxn
                    else:
                        coeffs[vn] = coeffs.get(vn, Fraction(0)) + b * w
            rhs = b - const
            if not coeffs:
                if rhs != 0:
                    return InnerResult(False, None, {
                        "lambda": None, "pair": [PREP_LABELS.index(prep) + 1,
                                                 OUTCOME_LABELS.index(k) + 1],
                        "violated_equation": "Born row fully forced yet unbalanced",
                    })
                continue
            equalities.append((coeffs, rhs))
    inequalities = []
    if null_budget is not None:
        # per-preparation cap on the unconditioned no-show rate
        for prep in PREP_LABELS:
            coeffs, const = {}, Fraction(0)
            for cell, w in joints[prep].items():
                v, fx = term((NULL, cell))
                if v is None:
                    const += w * fx
                else:
                    coeffs[v] = coeffs.get(v, Fraction(0)) + w
            rhs = null_budget - const
            if not coeffs:
                if const > null_budget:
                    return InnerResult(False, None, {
                        "lambda": None, "pair": None,
                        "violated_equation":
                            f"forced no-show rate {frac_str(const)} exceeds "
                            f"budget {frac_str(Fraction(null_budget))} for {prep}",
                    })
                continue
            inequalities.append((coeffs, rhs))

    res = find_feasible(len(var_index), equalities, inequalities)
    if not res.feasible:
        return InnerResult(False, None, {
            "lambda": None, "pair": None,
            "violated_equation": "exact LP phase-1 certifies infeasibility "
                                 f"(residual {frac_str(res.phase1_value)})",
        })
    xi = dict(forced)
    for key, idx in var_index.items():
        xi[key] = res.solution[idx]
    return InnerResult(True, xi, None)


@dataclass(frozen=True)
class FeasibilityVerdict:
    status: str                 # "feasible" | "infeasible"
    witness: dict | None
    certificate: dict | None
    tested_points: int
    grid_note: str

    def to_json(self) -> dict:
        doc = {"status": self.status, "tested_points": self.tested_points,
               "grid_note": self.grid_note}
        if self.witness is not None:
            doc["witness"] = self.witness
        if self.certificate is not None:
            doc["certificate"] = self.certificate
        return doc


def _witness_payload(p0, pplus, joints, xi, labels, outcomes) -> dict:
    return {
        "p0": [frac_str(w) for w in p0],
        "pplus": [frac_str(w) for w in pplus],
        "lambda": list(labels),
        "joints": {prep: {f"{a},{b}": frac_str(w) for (a, b), w in cells.items()}
                   for prep, cells in joints.items()},
        "xi": {f"{k}|{a},{b}": frac_str(v) for (k, (a, b)), v in sorted(
            xi.items(), key=lambda kv: (kv[0][0], kv[0][1]))},
        "outcomes": list(outcomes),
    }


def solve_feasibility(problem: FeasibilityProblem) -> FeasibilityVerdict:
    """Search the weight grid for a reproducing model; exact throughout.

    Returns "feasible" with the first witness found, or "infeasible" with a
    contradiction certificate when every tested weight assignment (and, in
    relaxed mode, every joint family) admits no response function.  The
    universal statement for arbitrary weights is the analytic theorem; the
    verdict covers the grid stated in ``grid_note``.
    """
    scenario = build_pbr_scenario(problem.q if problem.q is not None else Fraction(1, 4))
    born = scenario.born_table()
    labels = problem.labels
    cells = problem.cells
    outcomes = list(OUTCOME_LABELS) + ([NULL] if problem.null_budget is not None else [])
    tested = 0
    last_certificate = None
    grid = list(weight_grid(problem.lambda_size, problem.grid_denominator,
                            floor=problem.q, floor_index=problem.star_index))
    if not grid:
        raise PbrError("weight grid is empty; lower q or raise the denominator")
    for p0 in grid:
        for pplus in grid:
            families = (relaxed_joints(p0, pplus, labels, problem.star_index)
                        if problem.relax_product
                        else [product_joint(p0, pplus, labels)])
            for joints in families:
                tested += 1
                inner = _inner_feasibility(joints, born, cells, problem.null_budget)
                if inner.feasible:
                    witness = _witness_payload(p0, pplus, joints, inner.xi, labels, outcomes)
                    return FeasibilityVerdict("feasible", witness, None, tested,
                                              _grid_note(problem))
                last_certificate = inner.certificate
    return FeasibilityVerdict("infeasible", None, last_certificate, tested,
                              _grid_note(problem))


def _grid_note(problem: FeasibilityProblem) -> str:
    q = "none" if problem.q is None else frac_str(problem.q)
    return (f"all weight vectors with step 1/{problem.grid_denominator} on "
            f"{problem.lambda_size} ontic states, forced overlap q={q}, "
            f"relax_product={problem.relax_product}")


def null_outcome_extension(problem: FeasibilityProblem,
                           null_budget: Fraction) -> FeasibilityVerdict:
    """Re-run the search with the no-show outcome and a rate budget.

    A budget of zero collapses to the plain verdict: the post-selected
    constraints then coincide with the direct Born constraints.
    """
    null_budget = Fraction(null_budget)
    if not 0 <= null_budget < 1:
        raise PbrError("null budget must lie in [0, 1)")
    amended = FeasibilityProblem(
        lambda_size=problem.lambda_size,
        grid_denominator=problem.grid_denominator,
        q=problem.q,
        relax_product=problem.relax_product,
        null_budget=null_budget if null_budget > 0 else None,
        star_index=problem.star_index,
    )
    return solve_feasibility(amended)


# --------------------------------------------------------------------------
# replaying witnesses through the ontological-models framework

def witness_to_model(witness: dict) -> OntologicalModel:
    """Rebuild a verdict witness as a joint-space ontological model with one
    four-or-five outcome measurement, suitable for reproduction_check."""
    all_cells = sorted({tuple(map(int, key.split(",")))
                        for cells in witness["joints"].values() for key in cells})
    space = OnticSpace(tuple(all_cells))
    preparations = {}
    for prep, cells in witness["joints"].items():
        w = {tuple(map(int, key.split(","))): Fraction(v) for key, v in cells.items()}
        preparations[prep] = EpistemicState(
            space, tuple(w.get(c, Fraction(0)) for c in space.labels))
    outcomes = tuple(witness["outcomes"])
    table = []
    for k in outcomes:
        row = []
        for cell in space.labels:
            key = f"{k}|{cell[0]},{cell[1]}"
            row.append(Fraction(witness["xi"].get(key, "0")))
        table.append(tuple(row))
    measurements = {"R": ResponseFunction(space, outcomes, tuple(table))}
    return OntologicalModel(space, preparations, measurements)


def replay_witness(witness: dict) -> dict:
    """Check a witness against the exact Born table.

    Without a null outcome the unconditioned statistics must match; with
    one, the post-selected statistics must match while the raw ones are
    flagged as doing the post-selection work.
    """
    scenario = build_pbr_scenario()
    born = scenario.born_table()
    model = witness_to_model(witness)
    has_null = NULL in witness["outcomes"]
    if not has_null:
        table = {(p, "R", k): born[(p, k)] for p in PREP_LABELS for k in OUTCOME_LABELS}
        report = reproduction_check(model, table)
        return {"post_selected_match": report.ok, "unconditioned_match": report.ok,
                "rows": len(report.rows)}
    from .models import predicted_probability
    post_ok, raw_ok = True, True
    for p in PREP_LABELS:
        null_rate = predicted_probability(model, p, "R", NULL)
        for k in OUTCOME_LABELS:
            raw = predicted_probability(model, p, "R", k)
            if raw != born[(p, k)]:
                raw_ok = False
            detected = 1 - null_rate
            if detected == 0 or raw / detected != born[(p, k)]:
                post_ok = False
    return {"post_selected_match": post_ok, "unconditioned_match": raw_ok,
            "rows": 16}


# --------------------------------------------------------------------------
# CHSH demonstrator

@dataclass(frozen=True)
class ChshReport:
    quantum_value: float
    quantum_value_exact: str
    local_bound: Fraction
    toy_maximum: Fraction
    gap: float


def _singlet_correlation(ka: int, kb: int):
    """<singlet| A(ka) (x) B(kb) |singlet> at eighth-of-pi angles, exact."""
    obs = quantum.kron(quantum.spin_observable_eighth(ka),
                       quantum.spin_observable_eighth(kb))
    val = quantum.expectation(quantum.SINGLET, obs)
    if not val.is_real():
        raise PbrError("correlation came out complex")
    return val


def _toy_observables():
    """All +/-1 valued block observables on one toy system."""
    obs = []
    for meas in ALL_TOY_MEASUREMENTS:
        pos, neg = meas.partition
        obs.append({**{s: 1 for s in pos}, **{s: -1 for s in neg}})
        obs.append({**{s: -1 for s in pos}, **{s: 1 for s in neg}})
    return obs


def _toy_kb_composites():
    states = []
    two_supports = [frozenset(c) for c in itertools.combinations(range(1, 5), 2)]
    for sa, sb in itertools.product(two_supports, repeat=2):
        states.append(product_composite(toy_state(*sa), toy_state(*sb)))
    for image in itertools.permutations(range(1, 5)):
        states.append(make_correlated(dict(zip(range(1, 5), image))))
    states.append(CompositeToyState(frozenset(itertools.product(range(1, 5), repeat=2))))
    return states


def chsh_gap_demo() -> ChshReport:
    """Quantum singlet value at the maximal-violation angles vs the local
    deterministic bound and the best any toy composite state can do."""
    # settings: A at 0 and pi/2, B at pi/4 and -pi/4 (in eighths of pi)
    e = {}
    for ka, kb in itertools.product((0, 2), (1, 7)):
        e[(ka, kb)] = _singlet_correlation(ka, kb)
    s_exact = e[(0, 1)] + e[(0, 7)] + e[(2, 1)] - e[(2, 7)]
    s_val = abs(s_exact.to_complex().real)

    best_local = max(
        abs(a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2)
        for a1, a2, b1, b2 in itertools.product((1, -1), repeat=4)
    )

    toy_best = Fraction(0)
    observables = _toy_observables()
    for state in _toy_kb_composites():
        n = len(state.support)
        corr = [[Fraction(0)] * len(observables) for _ in observables]
        for i, oa in enumerate(observables):
            for j, ob in enumerate(observables):
                corr[i][j] = Fraction(
                    sum(oa[a] * ob[b] for a, b in state.support), n)
        for a1, a2 in itertools.product(range(len(observables)), repeat=2):
            for b1, b2 in itertools.product(range(len(observables)), repeat=2):
                val = abs(corr[a1][b1] + corr[a1][b2] + corr[a2][b1] - corr[a2][b2])
                if val > toy_best:
                    toy_best = val
    return ChshReport(
        quantum_value=s_val,
        quantum_value_exact="2*sqrt2",
        local_bound=Fraction(best_local),
        toy_maximum=toy_best,
        gap=s_val - float(best_local),
    )
