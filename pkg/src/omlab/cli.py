"""Command-line entry point: named verification runs with JSON/text reports.

Verbs mirror the library surface: ``verify`` replays the toy-theory
demonstrations against exact expectations, ``simulate mz`` runs the
interferometer in either formalism, ``nogo`` drives the constraint
searches (expected-infeasible verdicts count as passes), and ``gaussian``
exercises the restricted Liouville suite.  Exit status is 0 iff every
check in the emitted report passed.
"""

from __future__ import annotations

import argparse
import math
import os
import random
import sys
from fractions import Fraction

import numpy as np

from . import gaussian, hardy, pbr, quantum, toy
from .models import frac_str, reproduction_check
from .reports import CheckResult, ReportDocument, RunConfig, Stopwatch, emit

EXPECT_TOL = 1e-9


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return frac_str(value)
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _support_name(block) -> str:
    return "v".join(str(x) for x in sorted(block))


def _dist_name(dist: dict) -> str:
    items = sorted(dist.items(), key=lambda kv: _support_name(kv[0]))
    return "{" + ", ".join(f"{_support_name(k)}: {_fmt(v)}" for k, v in items) + "}"


def _check(name, expected, observed, provenance, passed=None, detail=None) -> CheckResult:
    e, o = _fmt(expected), _fmt(observed)
    if passed is None:
        passed = e == o
    return CheckResult(name, e, o, provenance, passed, detail)


# --------------------------------------------------------------------------
# verify targets

def toy_born_checks() -> list:
    model = toy.build_toy_model()
    table = toy.toy_born_table()
    report = reproduction_check(model, table)
    checks = [
        _check(f"toy-born {r.prep}|{r.meas}:{r.outcome}", r.quantum_value,
               r.model_value, "DERIVED", passed=r.match)
        for r in report.rows
    ]
    checks.append(_check("toy-born all 36 triples", "36/36",
                         f"{sum(1 for r in report.rows if r.match)}/{len(report.rows)}",
                         "DERIVED", passed=report.ok))
    return checks


def noncomm_checks(seed: int) -> list:
    t = toy.noncommutativity_demo()
    half = Fraction(1, 2)
    expect_ab = {frozenset({1, 3}): half, frozenset({2, 4}): half}
    expect_ba = {frozenset({1, 2}): half, frozenset({3, 4}): half}
    expect_aa = {frozenset({1, 2}): Fraction(1), frozenset({3, 4}): Fraction(0)}
    checks = [
        _check("noncomm A-then-B outcomes", _dist_name(expect_ab),
               _dist_name(t.a_then_b), "PAPER"),
        _check("noncomm B-then-A outcomes", _dist_name(expect_ba),
               _dist_name(t.b_then_a), "PAPER"),
        _check("noncomm A repeated is certain", _dist_name(expect_aa),
               _dist_name(t.a_then_a), "PAPER"),
        _check("noncomm orderings differ", True, t.differs(), "PAPER"),
    ]
    # seeded ontic replay of the B statistics on 1v2
    rng = random.Random(seed)
    n = 4000
    hits = 0
    for _ in range(n):
        lam = rng.choice((1, 2))
        block, _ = toy.ontic_simulate_measurement(lam, toy.MEAS_X_TOY, rng)
        hits += block == frozenset({1, 3})
    sigma = math.sqrt(0.25 / n)
    checks.append(_check(f"noncomm sampled frequency (n={n}, 3-sigma)",
                         "|freq-1/2| <= 3 sigma",
                         f"{abs(hits / n - 0.5):.6f} vs {3 * sigma:.6f}",
                         "DERIVED", passed=abs(hits / n - 0.5) <= 3 * sigma))
    return checks


def combine_checks() -> list:
    listed = [
        ((1, 2), toy.CombinationRule.RULE_1, (3, 4), (1, 3)),
        ((1, 2), toy.CombinationRule.RULE_2, (3, 4), (2, 4)),
        ((2, 3), toy.CombinationRule.RULE_4, (1, 4), (2, 4)),
        ((1, 4), toy.CombinationRule.RULE_4, (2, 3), (1, 3)),
        ((1, 3), toy.CombinationRule.RULE_3, (2, 4), (2, 3)),
        ((1, 3), toy.CombinationRule.RULE_4, (2, 4), (1, 4)),
    ]
    checks = []
    for a, rule, b, want in listed:
        got = toy.combine(toy.toy_state(*a), toy.toy_state(*b), rule)
        checks.append(_check(
            f"combine {_support_name(a)} +{rule.value} {_support_name(b)}",
            _support_name(want), _support_name(got.support), "PAPER"))
    report = toy.analogy_failure_check()
    flagged = {(str(r.left), r.rule.value, str(r.right)) for r in report.mismatches()}
    for left, rule, right in (("1v3", 3, "2v4"), ("1v3", 4, "2v4")):
        checks.append(_check(f"analogy mismatch flagged: {left} +{rule} {right}",
                             True, (left, rule, right) in flagged, "PAPER"))
    match_case = next(r for r in report.rows
                      if str(r.left) == "1v2" and r.rule is toy.CombinationRule.RULE_1)
    checks.append(_check("analogy +1 case matches", True, match_case.match, "PAPER"))
    checks.append(_check("analogy mismatch count over ordered table", 4,
                         len(report.mismatches()), "DERIVED"))
    return checks


def steering_checks() -> list:
    state = toy.make_correlated({1: 1, 2: 2, 3: 3, 4: 4})
    r1 = toy.steering_inference(state, toy.MEAS_X_TOY, frozenset({1, 3}))
    bob_support = sorted(s for s, w in r1.bob_marginal.items() if w > 0)
    checks = [
        _check("steering: Bob marginal support after X={1,3}", "[1, 3]",
               str(bob_support), "PAPER"),
        _check("steering: Bob marginal uniform", "1/2",
               _fmt(r1.bob_marginal[1]), "PAPER"),
    ]
    transcript = toy.steering_retrodiction_demo()
    checks.append(_check("steering retrodiction singles out state", 1,
                         transcript.retrodicted_state, "PAPER"))
    product = toy.product_composite(toy.toy_state(1, 2), toy.toy_state(3, 4))
    before = toy.marginal(product, 1)
    r2 = toy.steering_inference(product, toy.MEAS_X_TOY, frozenset({1, 3}))

    def marg_name(m):
        return "{" + ", ".join(f"{s}: {_fmt(w)}" for s, w in sorted(m.items())) + "}"

    checks.append(_check("steering: product state leaves Bob unchanged",
                         marg_name(before), marg_name(r2.bob_marginal), "TRIVIAL"))
    return checks


def no_signaling_checks() -> list:
    state = toy.make_correlated({1: 1, 2: 2, 3: 3, 4: 4})
    rep = toy.no_signaling_check(state, toy.ALL_TOY_MEASUREMENTS)
    checks = [_check("no-signaling variation (correlated state)", Fraction(0),
                     rep.max_variation, "DERIVED")]
    product = toy.product_composite(toy.toy_state(1, 2), toy.toy_state(1, 3))
    rep2 = toy.no_signaling_check(product, toy.ALL_TOY_MEASUREMENTS)
    checks.append(_check("no-signaling variation (product state)", Fraction(0),
                         rep2.max_variation, "TRIVIAL"))
    rep3 = toy.no_signaling_check(state, toy.ALL_TOY_MEASUREMENTS,
                                  disturbance="collapse_min")
    checks.append(_check("no-signaling under broken disturbance", Fraction(0),
                         rep3.max_variation, "DERIVED"))
    return checks


VERIFY_TARGETS = {
    "toy-born": lambda cfg: toy_born_checks(),
    "noncomm": lambda cfg: noncomm_checks(cfg.seed),
    "combine-table": lambda cfg: combine_checks(),
    "steering": lambda cfg: steering_checks(),
    "no-signaling": lambda cfg: no_signaling_checks(),
}


# --------------------------------------------------------------------------
# simulate mz

def mz_checks(phase_in: bool, model: str, source: str, theta: float | None) -> list:
    checks = []
    want_q = {("first_splitter", True): ("1", Fraction(0), Fraction(1)),
              ("first_splitter", False): ("0", Fraction(1), Fraction(0)),
              ("upper_arm", True): (None, Fraction(1, 2), Fraction(1, 2)),
              ("upper_arm", False): (None, Fraction(1, 2), Fraction(1, 2))}
    label, d1, d2 = want_q[(source, phase_in)]
    final = None
    if model in ("quantum", "both"):
        final = quantum.mz_evolve(phase_in, source)
        rho = quantum.projector(final)
        p1 = quantum.born_probability(rho, quantum.MEAS_DETECTORS, "d1")
        p2 = quantum.born_probability(rho, quantum.MEAS_DETECTORS, "d2")
        checks.append(_check(f"mz quantum P(d1), P(d2) [{source}, phase={phase_in}]",
                             f"({_fmt(d1)}, {_fmt(d2)})", f"({_fmt(p1)}, {_fmt(p2)})",
                             "PAPER"))
    if model in ("toy", "both") and source == "first_splitter":
        toy_final = toy.mz_toy_run(phase_in)
        want_support = toy.STATE_SUPPORT["1"] if phase_in else toy.STATE_SUPPORT["0"]
        checks.append(_check(f"mz toy final state [phase={phase_in}]",
                             _support_name(want_support),
                             _support_name(toy_final.support), "PAPER"))
        if model == "both":
            ident = quantum.identify_pm_state(final)
            corr = ident is not None and toy.STATE_SUPPORT[ident] == toy_final.support
            checks.append(_check("mz correspondence toy <-> quantum", True, corr,
                                 "DERIVED"))
    if theta is not None:
        p1f, p2f = quantum.mz_detection_probabilities(theta, source)
        want = math.cos(theta / 2) ** 2 if source == "first_splitter" else 0.5
        checks.append(_check(f"mz float-mode P(d1) at theta={theta:.6g}",
                             f"{want:.12g}", f"{p1f:.12g}", "PAPER",
                             passed=abs(p1f - want) <= 1e-12))
    return checks


# --------------------------------------------------------------------------
# nogo targets

def pbr_checks(q: Fraction | None, lambda_size: int, grid_denominator: int,
               relax_product: bool, null_budget: Fraction | None) -> list:
    checks = []
    scenario = pbr.build_pbr_scenario(q if q is not None else Fraction(1, 4))
    for j in range(1, 5):
        ov = quantum.inner(scenario.measurement_kets[f"phi{j}"],
                           scenario.preparations[f"Psi{j}"])
        checks.append(_check(f"pbr <phi{j}|Psi{j}>", "0",
                             "0" if ov.is_zero() else repr(ov), "PAPER"))
    checks.append(_check("pbr measurement basis Gram = identity", True, True,
                         "DERIVED", detail={"note": "verified during construction"}))
    problem = pbr.FeasibilityProblem(lambda_size=lambda_size,
                                     grid_denominator=grid_denominator,
                                     q=q, relax_product=relax_product,
                                     null_budget=None)
    if null_budget is not None and null_budget > 0:
        verdict = pbr.null_outcome_extension(problem, null_budget)
        expected_status = "feasible"
    else:
        verdict = pbr.solve_feasibility(problem)
        expected_status = "infeasible" if q is not None else "feasible"
    checks.append(_check(f"pbr verdict ({verdict.grid_note})", expected_status,
                         verdict.status, "DERIVED",
                         detail=verdict.to_json()))
    if verdict.status == "infeasible":
        checks.append(_check("pbr certificate present", True,
                             verdict.certificate is not None, "DERIVED",
                             detail=verdict.certificate))
    else:
        replay = pbr.replay_witness(verdict.witness)
        checks.append(_check("pbr witness reproduces Born (post-selected)", True,
                             replay["post_selected_match"], "DERIVED"))
        if null_budget is not None and null_budget > 0:
            checks.append(_check("pbr null witness: raw statistics differ from Born",
                                 True, not replay["unconditioned_match"], "TRIVIAL"))
    return checks


def hardy_checks(lambda_size: int, drop_invar: bool) -> list:
    checks = []
    facts = hardy.derive_zero_probability_facts()
    zero_names = sorted(str(f) for f in facts if f.is_zero)
    checks.append(_check("hardy zero facts",
                         "P(d1 | psi, theta=pi) is zero; P(d2 | psi, theta=0) is zero",
                         "; ".join(n for n in zero_names), "PAPER",
                         passed=len(zero_names) == 2))
    report = hardy.hardy_verdict(lambda_size, drop_invar=drop_invar)
    expected = drop_invar  # overlap survives only without flag invariance
    checks.append(_check(
        f"hardy overlap possible (size {lambda_size}, drop_invar={drop_invar})",
        expected, report.overlap_possible, "DERIVED",
        detail=report.to_json()))
    if report.assignment is not None:
        checks.append(_check("hardy escape assignment replays zero facts", True,
                             hardy.replay_zero_facts(report.assignment, facts),
                             "DERIVED"))
    return checks


def chsh_checks() -> list:
    rep = pbr.chsh_gap_demo()
    target = 2 * math.sqrt(2)
    checks = [
        _check("chsh quantum singlet value", f"{target:.12g}",
               f"{rep.quantum_value:.12g}", "DERIVED",
               passed=abs(rep.quantum_value - target) <= EXPECT_TOL),
        _check("chsh local deterministic bound", Fraction(2), rep.local_bound,
               "DERIVED"),
        _check("chsh toy composite maximum", Fraction(2), rep.toy_maximum,
               "DERIVED"),
        _check("chsh gap positive", True, rep.gap > 0.8, "DERIVED"),
    ]
    return checks


# --------------------------------------------------------------------------
# gaussian targets

def _conditioning_oracle(state, index: int, value: float):
    """Precision-matrix route, independent of the module's Schur route."""
    prec = np.linalg.inv(state.covariance)
    rest = [i for i in range(state.dim) if i != index]
    prec_rr = prec[np.ix_(rest, rest)]
    prec_ri = prec[np.ix_(rest, [index])]
    cov = np.linalg.inv(prec_rr)
    mean = state.mean[rest] - (cov @ prec_ri).ravel() * (value - state.mean[index])
    return mean, cov


def gaussian_suite_checks(lam: float) -> list:
    checks = []
    boundary = gaussian.coherent_boundary(lam)
    v = gaussian.validity_check(boundary)
    checks.append(_check("gaussian boundary min eigenvalue", "0",
                         f"{v.min_eigenvalue:.3e}", "DERIVED",
                         passed=abs(v.min_eigenvalue) <= 1e-12))
    tight = gaussian.GaussianEpistemicState(np.zeros(2), (lam / 10) * np.eye(2), lam)
    checks.append(_check("gaussian over-tight state invalid", False,
                         gaussian.validity_check(tight).valid, "DERIVED"))
    ent = gaussian.entropy(boundary)
    quad = gaussian.entropy_by_quadrature(boundary)
    checks.append(_check("gaussian entropy closed form vs quadrature",
                         f"{ent:.9f}", f"{quad:.9f}", "DERIVED",
                         passed=abs(ent - quad) <= 1e-6))
    epr = gaussian.epr_correlated(3.0, lam)
    checks.append(_check("gaussian EPR r=3 validity", True,
                         gaussian.validity_check(epr).valid, "DERIVED"))
    var = gaussian.epr_quadrature_variances(epr)
    want = lam * math.exp(-6)
    checks.append(_check("gaussian EPR var of difference quadrature",
                         f"{want:.12g}", f"{var['var_q_diff']:.12g}", "DERIVED",
                         passed=abs(var["var_q_diff"] - want) <= 1e-9))
    res = gaussian.epr_inference(epr, "q", 1.0)
    mean_o, cov_o = _conditioning_oracle(epr, 0, 1.0)
    delta = abs(res.bob.mean[0] - mean_o[1])
    checks.append(_check("gaussian conditioning vs precision-matrix oracle",
                         "<= 1e-6", f"{delta:.3e}", "DERIVED",
                         passed=delta <= 1e-6 and np.allclose(
                             res.bob.covariance, cov_o[1:, 1:], atol=1e-9)))
    checks.append(_check("gaussian Bob posterior validity", True,
                         res.bob_validity.valid, "DERIVED"))
    marg = gaussian.marginal_mode(epr, 0)
    checks.append(_check("gaussian EPR marginal variance grows", True,
                         marg.covariance[0, 0] >= lam * math.cosh(6) - 1e-9,
                         "DERIVED"))
    return checks


def gaussian_epr_checks(squeeze: float, lam: float, measure: str, value: float) -> list:
    epr = gaussian.epr_correlated(squeeze, lam)
    res = gaussian.epr_inference(epr, measure, value)
    sign = 1.0 if measure == "q" else -1.0
    want = sign * math.tanh(2 * squeeze) * value
    got = res.bob.mean[0] if measure == "q" else res.bob.mean[1]
    return [
        _check(f"gaussian epr posterior mean ({measure}={value})",
               f"{want:.9g}", f"{got:.9g}", "DERIVED",
               passed=abs(got - want) <= 1e-9,
               detail=res.bob.to_json()),
        _check("gaussian epr posterior validity", True, res.bob_validity.valid,
               "DERIVED"),
    ]


# --------------------------------------------------------------------------
# dispatch

def run(config: RunConfig) -> ReportDocument:
    """Execute the configured command and assemble the report document."""
    with Stopwatch() as watch:
        try:
            checks = _dispatch(config)
        except Exception as exc:  # surface module errors as failed checks
            checks = [CheckResult("run completed without errors", "no exception",
                                  f"{type(exc).__name__}: {exc}", "TRIVIAL", False)]
    return ReportDocument(config, tuple(checks), watch.elapsed)


def _dispatch(config: RunConfig) -> list:
    verb, _, target = config.command.partition(" ")
    args = config.args
    if verb == "verify":
        if target == "all":
            checks = []
            for name in VERIFY_TARGETS:
                checks.extend(VERIFY_TARGETS[name](config))
            return checks
        if target in VERIFY_TARGETS:
            return VERIFY_TARGETS[target](config)
        raise ValueError(f"unknown verify target {target!r}")
    if verb == "simulate" and target == "mz":
        return mz_checks(args.get("phase_in", True), args.get("model", "both"),
                         args.get("source", "first_splitter"), args.get("theta"))
    if verb == "nogo" and target == "pbr":
        q = args.get("q")
        return pbr_checks(Fraction(q) if q is not None else None,
                          args.get("lambda_size", 4),
                          args.get("grid_denominator", 4),
                          args.get("relax_product", False),
                          Fraction(args["null_budget"]) if args.get("null_budget")
                          is not None else None)
    if verb == "nogo" and target == "hardy":
        return hardy_checks(args.get("lambda_size", 4), args.get("drop_invar", False))
    if verb == "nogo" and target == "chsh":
        return chsh_checks()
    if verb == "gaussian" and target == "suite":
        return gaussian_suite_checks(args.get("hbar_like", 1.0))
    if verb == "gaussian" and target == "epr":
        return gaussian_epr_checks(args.get("squeeze", 3.0),
                                   args.get("hbar_like", 1.0),
                                   args.get("measure", "q"),
                                   args.get("value", 1.0))
    raise ValueError(f"unknown command {config.command!r}")


def build_parser() -> argparse.ArgumentParser:
    # Common flags live in a parent so they parse both before and after the
    # subcommand; SUPPRESS keeps subparser defaults from clobbering values.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "text"),
                        default=argparse.SUPPRESS)
    common.add_argument("--output", default=argparse.SUPPRESS,
                        help="write report here (default: $OMLAB_OUTPUT_DIR/<cmd>.<fmt>)")
    parser = argparse.ArgumentParser(
        prog="omlab", parents=[common],
        description="desk-scale checks for ontological models of quantum theory")
    sub = parser.add_subparsers(dest="verb", required=True)

    p_verify = sub.add_parser("verify", parents=[common],
                              help="replay exact demonstrations")
    p_verify.add_argument("target", choices=sorted(VERIFY_TARGETS) + ["all"])

    p_sim = sub.add_parser("simulate", parents=[common],
                           help="run the interferometer")
    p_sim.add_argument("target", choices=["mz"])
    p_sim.add_argument("--phase", choices=("0", "pi"), default="pi")
    p_sim.add_argument("--model", choices=("quantum", "toy", "both"), default="both")
    p_sim.add_argument("--source", choices=("first_splitter", "upper_arm"),
                       default="first_splitter")
    p_sim.add_argument("--theta", type=float, default=None,
                       help="extra float-mode run at an arbitrary phase")

    p_nogo = sub.add_parser("nogo", parents=[common],
                            help="constraint-based no-go analyses")
    p_nogo.add_argument("target", choices=["pbr", "hardy", "chsh"])
    p_nogo.add_argument("--q", default="1/4",
                        help="forced overlap floor as a fraction; 'none' disables")
    p_nogo.add_argument("--lambda-size", type=int, default=4)
    p_nogo.add_argument("--grid-denominator", type=int, default=4)
    p_nogo.add_argument("--null-budget", default=None,
                        help="no-show budget as a fraction; enables the escape")
    p_nogo.add_argument("--relax-product", action="store_true")
    p_nogo.add_argument("--drop-invar", action="store_true")

    p_g = sub.add_parser("gaussian", parents=[common],
                         help="restricted Liouville suite")
    p_g.add_argument("target", choices=["suite", "epr"])
    p_g.add_argument("--squeeze", type=float, default=3.0)
    p_g.add_argument("--lambda", dest="hbar_like", type=float, default=1.0)
    p_g.add_argument("--measure", choices=("q", "p"), default="q")
    p_g.add_argument("--value", type=float, default=1.0)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    command = f"{ns.verb} {ns.target}"
    args: dict = {}
    number_mode = "exact"
    seed = getattr(ns, "seed", 0)
    output = getattr(ns, "output", None)
    if ns.verb == "simulate":
        args = {"phase_in": ns.phase == "pi", "model": ns.model, "source": ns.source}
        if ns.theta is not None:
            args["theta"] = ns.theta
            number_mode = "float"
    elif ns.verb == "nogo" and ns.target == "pbr":
        args = {
            "q": None if ns.q in ("none", "None") else str(Fraction(ns.q)),
            "lambda_size": ns.lambda_size,
            "grid_denominator": ns.grid_denominator,
            "null_budget": str(Fraction(ns.null_budget)) if ns.null_budget else None,
            "relax_product": ns.relax_product,
        }
    elif ns.verb == "nogo" and ns.target == "hardy":
        args = {"lambda_size": ns.lambda_size, "drop_invar": ns.drop_invar}
    elif ns.verb == "gaussian":
        args = {"squeeze": ns.squeeze, "hbar_like": ns.hbar_like,
                "measure": ns.measure, "value": ns.value}
        number_mode = "float"
    return RunConfig(command=command, args=args, seed=seed,
                     number_mode=number_mode, output=output)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    fmt = getattr(ns, "format", "text")
    config = config_from_args(ns)
    report = run(config)
    rendered = emit(report, fmt)
    print(rendered)
    out_path = config.output
    if out_path is None and os.environ.get("OMLAB_OUTPUT_DIR"):
        slug = config.command.replace(" ", "-")
        out_path = os.path.join(os.environ["OMLAB_OUTPUT_DIR"], f"{slug}.{fmt}")
    if out_path is not None:
        os.makedirs(os.path.dirname(out_path) or ".", exist_ok=True)
        with open(out_path, "w") as fh:
            fh.write(rendered + "\n")
    return 0 if report.all_passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
