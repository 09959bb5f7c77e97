"""Exact rational linear feasibility via a phase-1 simplex.

Decides whether {x >= 0 : A_eq x = b_eq, A_ub x <= b_ub} is nonempty using
Fraction pivoting with Bland's rule (no cycling, no floating point), and
returns a basic feasible point when one exists.  Problem sizes here are a
few dozen variables, so a dense tableau is fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    solution: tuple | None  # values for the n_vars original variables
    phase1_value: Fraction  # minimized infeasibility; 0 iff feasible


def _dense(coeffs: Mapping[int, Fraction], n: int) -> list:
    row = [ZERO] * n
    for j, c in coeffs.items():
        if not 0 <= j < n:
            raise ValueError(f"variable index {j} out of range")
        row[j] += Fraction(c)
    return row


def find_feasible(n_vars: int,
                  equalities: Sequence[tuple] = (),
                  inequalities: Sequence[tuple] = ()) -> LPResult:
    """Feasibility of the system over x >= 0.

    ``equalities``/``inequalities`` are (coeff_map, rhs) pairs encoding
    sum_j c_j x_j = rhs and <= rhs respectively.
    """
    n_slack = len(inequalities)
    n = n_vars + n_slack
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for coeffs, b in equalities:
        rows.append(_dense(coeffs, n))
        rhs.append(Fraction(b))
    for i, (coeffs, b) in enumerate(inequalities):
        row = _dense(coeffs, n)
        row[n_vars + i] = ONE
        rows.append(row)
        rhs.append(Fraction(b))
    m = len(rows)
    if m == 0:
        return LPResult(True, tuple([ZERO] * n_vars), ZERO)

    # Normalize to rhs >= 0 and give every row an artificial variable.
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-c for c in rows[i]]
            rhs[i] = -rhs[i]
    total = n + m  # artificials occupy columns n .. n+m-1
    tableau = []
    for i in range(m):
        row = rows[i] + [ZERO] * m + [rhs[i]]
        row[n + i] = ONE
        tableau.append(row)
    basis = [n + i for i in range(m)]

    # Phase-1 objective: minimize the sum of artificials.  The reduced-cost
    # row starts as the negated sum of all constraint rows on the
    # non-artificial columns.
    cost = [ZERO] * (total + 1)
    for i in range(m):
        for j in range(total + 1):
            cost[j] -= tableau[i][j]
    for i in range(m):
        cost[n + i] = ZERO  # artificial columns have unit cost, reduced to 0
    blocked = [False] * total  # artificials that left the basis never return

    while True:
        enter = -1
        for j in range(total):
            if blocked[j]:
                continue
            if cost[j] < 0:  # improves (decreases) the artificial sum
                enter = j
                break  # Bland: smallest index
        if enter < 0:
            break
        leave, best = -1, None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][total] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave < 0:
            # Unbounded in phase 1 cannot happen (objective bounded below by 0)
            raise RuntimeError("phase-1 simplex lost boundedness")
        piv = tableau[leave][enter]
        tableau[leave] = [c / piv for c in tableau[leave]]
        for i in range(m):
            if i != leave and tableau[i][enter] != 0:
                f = tableau[i][enter]
                tableau[i] = [c - f * p for c, p in zip(tableau[i], tableau[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [c - f * p for c, p in zip(cost, tableau[leave])]
        if basis[leave] >= n:
            blocked[basis[leave]] = True
        basis[leave] = enter

    infeas = -cost[total]  # current phase-1 objective value
    if infeas > 0:
        return LPResult(False, None, infeas)
    solution = [ZERO] * n_vars
    for i, b in enumerate(basis):
        if b < n_vars:
            solution[b] = tableau[i][total]
    return LPResult(True, tuple(solution), ZERO)


def check_solution(n_vars: int, solution: Sequence[Fraction],
                   equalities: Sequence[tuple] = (),
                   inequalities: Sequence[tuple] = ()) -> bool:
    """Exact substitution check, used to validate witnesses independently."""
    x = list(solution) + [ZERO]
    if any(v < 0 for v in solution):
        return False
    for coeffs, b in equalities:
        if sum(Fraction(c) * x[j] for j, c in coeffs.items()) != Fraction(b):
            return False
    for coeffs, b in inequalities:
        if sum(Fraction(c) * x[j] for j, c in coeffs.items()) > Fraction(b):
            return False
    return True
