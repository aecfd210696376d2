"""Exact rational linear programming with verifiable certificates.

A two-phase tableau simplex over `Fraction` entries.  Bland's pivoting rule
(lowest eligible index enters, ratio ties broken by lowest basic index)
guarantees termination and makes every outcome deterministic.  Artificial
variables are attached to every row, so when phase 1 ends above zero the
phase-1 dual read off the artificial columns is a Farkas certificate of
infeasibility; unbounded phase-2 runs return an explicit improving ray.

Outcomes are meant to be re-checked by substitution: `verify_point`,
`verify_farkas`, and `verify_ray` perform those exact checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Vector, vec_dot, vector

LE = "<="
EQ = "="
GE = ">="
_RELATIONS = (LE, EQ, GE)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Constraint:
    coeffs: Vector
    relation: str
    rhs: Fraction


def constraint(coeffs, relation: str, rhs) -> Constraint:
    if relation not in _RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    return Constraint(vector(coeffs), relation, Fraction(rhs))


@dataclass(frozen=True)
class LinearProgram:
    """num_vars variables; objective is optional (absent = pure feasibility).

    Variables listed in nonneg_vars are constrained >= 0; the rest are free.
    """

    num_vars: int
    constraints: tuple[Constraint, ...]
    objective: Vector | None = None
    sense: str = "max"
    nonneg_vars: frozenset[int] = frozenset()

    def __post_init__(self):
        for c in self.constraints:
            if len(c.coeffs) != self.num_vars:
                raise ValueError("constraint length != num_vars")
            if c.relation not in _RELATIONS:
                raise ValueError(f"unknown relation {c.relation!r}")
        if self.objective is not None and len(self.objective) != self.num_vars:
            raise ValueError("objective length != num_vars")
        if self.sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        if any(j < 0 or j >= self.num_vars for j in self.nonneg_vars):
            raise ValueError("nonneg_vars index out of range")


@dataclass(frozen=True)
class LpOutcome:
    status: str  # "optimal" | "feasible" | "infeasible" | "unbounded"
    point: Vector | None = None
    value: Fraction | None = None
    farkas: Vector | None = None
    ray: Vector | None = None


def feasibility(num_vars, constraints, nonneg_vars=()) -> LinearProgram:
    return LinearProgram(
        num_vars=num_vars,
        constraints=tuple(constraints),
        nonneg_vars=frozenset(nonneg_vars),
    )


class _Tableau:
    """Standard-form tableau: rows are equalities over nonnegative columns."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        # Structural columns: one per nonnegative variable, a +/- pair per
        # free variable.
        self.col_var: list[tuple[int, int]] = []
        for j in range(lp.num_vars):
            self.col_var.append((j, 1))
            if j not in lp.nonneg_vars:
                self.col_var.append((j, -1))
        n_struct = len(self.col_var)
        m = len(lp.constraints)
        self.slack_of_row: dict[int, int] = {}
        n_slack = 0
        for i, c in enumerate(lp.constraints):
            if c.relation != EQ:
                self.slack_of_row[i] = n_struct + n_slack
                n_slack += 1
        self.n_struct = n_struct
        self.n_slack = n_slack
        self.art0 = n_struct + n_slack
        self.n_cols = self.art0 + m  # one artificial per row
        self.row_sign: list[int] = []
        self.rows: list[list[Fraction]] = []
        self.rhs: list[Fraction] = []
        self.basis: list[int] = []
        for i, c in enumerate(lp.constraints):
            row = [ZERO] * self.n_cols
            for col, (j, s) in enumerate(self.col_var):
                row[col] = s * c.coeffs[j]
            if c.relation == LE:
                row[self.slack_of_row[i]] = ONE
            elif c.relation == GE:
                row[self.slack_of_row[i]] = -ONE
            b = c.rhs
            sign = 1
            if b < 0:
                sign = -1
                row = [-a for a in row]
                b = -b
            self.row_sign.append(sign)
            row[self.art0 + i] = ONE
            self.rows.append(row)
            self.rhs.append(b)
            self.basis.append(self.art0 + i)

    def _pivot(self, r: int, col: int, zrow: list[Fraction]) -> None:
        inv = 1 / self.rows[r][col]
        self.rows[r] = [inv * a for a in self.rows[r]]
        self.rhs[r] *= inv
        for i in range(len(self.rows)):
            if i != r and self.rows[i][col] != 0:
                f = self.rows[i][col]
                self.rows[i] = [a - f * b for a, b in zip(self.rows[i], self.rows[r])]
                self.rhs[i] -= f * self.rhs[r]
        if zrow[col] != 0:
            f = zrow[col]
            for j in range(self.n_cols):
                zrow[j] -= f * self.rows[r][j]
        self.basis[r] = col

    def _reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        zrow = list(cost)
        for r, b in enumerate(self.basis):
            cb = cost[b]
            if cb != 0:
                zrow = [a - cb * x for a, x in zip(zrow, self.rows[r])]
        return zrow

    def _run(self, cost: list[Fraction], allowed: list[int]) -> tuple[str, int]:
        """Bland simplex to optimality; returns ("optimal", -1) or
        ("unbounded", entering column)."""
        zrow = self._reduced_costs(cost)
        while True:
            entering = next((j for j in allowed if zrow[j] < 0), None)
            if entering is None:
                return "optimal", -1
            best: tuple[Fraction, int, int] | None = None
            for r in range(len(self.rows)):
                a = self.rows[r][entering]
                if a > 0:
                    ratio = self.rhs[r] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < (best[0], best[1]):
                        best = (ratio, self.basis[r], r)
            if best is None:
                return "unbounded", entering
            self._pivot(best[2], entering, zrow)

    def objective_value(self, cost: list[Fraction]) -> Fraction:
        return sum((cost[b] * self.rhs[r] for r, b in enumerate(self.basis)), ZERO)

    def point(self) -> Vector:
        x = [ZERO] * self.lp.num_vars
        for r, b in enumerate(self.basis):
            if b < self.n_struct:
                j, s = self.col_var[b]
                x[j] += s * self.rhs[r]
        return tuple(x)

    def ray(self, entering: int) -> Vector:
        d = [ZERO] * self.lp.num_vars
        j, s = self.col_var[entering] if entering < self.n_struct else (None, 0)
        if j is not None:
            d[j] += s
        for r, b in enumerate(self.basis):
            if b < self.n_struct:
                jj, ss = self.col_var[b]
                d[jj] += ss * (-self.rows[r][entering])
        return tuple(d)

    def farkas(self) -> Vector:
        """Original-constraint multipliers from the phase-1 dual.

        With y = c_B B^{-1} read off the artificial columns, the translation
        below yields multipliers that aggregate the original constraints into
        an exact contradiction (see verify_farkas for the convention).
        """
        # y = c_B B^{-1}; the artificial columns hold B^{-1} since they began
        # as the identity.
        m = len(self.lp.constraints)
        y = [ZERO] * m
        for r, b in enumerate(self.basis):
            if b >= self.art0:
                for i in range(m):
                    y[i] += self.rows[r][self.art0 + i]
        mult = []
        for i, c in enumerate(self.lp.constraints):
            u = self.row_sign[i] * y[i]
            mult.append(u if c.relation == GE else -u)
        return tuple(mult)

    def drive_out_artificials(self) -> None:
        r = 0
        while r < len(self.rows):
            if self.basis[r] >= self.art0:
                col = next(
                    (j for j in range(self.art0) if self.rows[r][j] != 0),
                    None,
                )
                if col is None:
                    # Redundant constraint: drop the row.
                    del self.rows[r], self.rhs[r], self.basis[r]
                    continue
                dummy = [ZERO] * self.n_cols
                self._pivot(r, col, dummy)
            r += 1


def solve(lp: LinearProgram) -> LpOutcome:
    """Exact status with a certificate: point, optimum, Farkas vector, or ray."""
    tab = _Tableau(lp)
    m = len(lp.constraints)
    phase1_cost = [ZERO] * tab.art0 + [ONE] * m
    non_artificial = list(range(tab.art0))
    status, _ = tab._run(phase1_cost, non_artificial)
    assert status == "optimal"  # phase 1 is bounded below by zero
    if tab.objective_value(phase1_cost) > 0:
        farkas = tab.farkas()
        if not verify_farkas(lp, farkas):
            raise RuntimeError("internal error: invalid Farkas certificate")
        return LpOutcome(status="infeasible", farkas=farkas)
    tab.drive_out_artificials()
    if lp.objective is None:
        point = tab.point()
        if not verify_point(lp, point):
            raise RuntimeError("internal error: infeasible point reported feasible")
        return LpOutcome(status="feasible", point=point)
    sign = -ONE if lp.sense == "max" else ONE
    phase2_cost = [ZERO] * tab.n_cols
    for col, (j, s) in enumerate(tab.col_var):
        phase2_cost[col] = sign * s * lp.objective[j]
    status, entering = tab._run(phase2_cost, non_artificial)
    point = tab.point()
    if not verify_point(lp, point):
        raise RuntimeError("internal error: infeasible point reported feasible")
    if status == "unbounded":
        ray = tab.ray(entering)
        if not verify_ray(lp, ray):
            raise RuntimeError("internal error: invalid unbounded ray")
        return LpOutcome(status="unbounded", point=point, ray=ray)
    return LpOutcome(status="optimal", point=point, value=vec_dot(lp.objective, point))


def constraint_holds(c: Constraint, x: Vector) -> bool:
    lhs = vec_dot(c.coeffs, x)
    if c.relation == LE:
        return lhs <= c.rhs
    if c.relation == GE:
        return lhs >= c.rhs
    return lhs == c.rhs


def verify_point(lp: LinearProgram, x: Vector) -> bool:
    if len(x) != lp.num_vars:
        return False
    if any(x[j] < 0 for j in lp.nonneg_vars):
        return False
    return all(constraint_holds(c, x) for c in lp.constraints)


def verify_farkas(lp: LinearProgram, mult: Vector) -> bool:
    """Check that the multipliers aggregate to an exact contradiction.

    Convention: multiplier y_i >= 0 scales constraint i kept as "<="
    (">=" rows are negated first; "=" rows take either sign).  The aggregate
    c.x <= beta must have c zero on free variables, c >= 0 on nonnegative
    ones, and beta < 0 -- impossible for any feasible x.
    """
    if len(mult) != len(lp.constraints):
        return False
    agg = [ZERO] * lp.num_vars
    beta = ZERO
    for y, c in zip(mult, lp.constraints):
        if c.relation != EQ and y < 0:
            return False
        s = -ONE if c.relation == GE else ONE
        for j, a in enumerate(c.coeffs):
            agg[j] += y * s * a
        beta += y * s * c.rhs
    for j, a in enumerate(agg):
        if j in lp.nonneg_vars:
            if a < 0:
                return False
        elif a != 0:
            return False
    return beta < 0


def verify_ray(lp: LinearProgram, d: Vector) -> bool:
    """Check d is a recession direction that strictly improves the objective."""
    if lp.objective is None or len(d) != lp.num_vars:
        return False
    if any(d[j] < 0 for j in lp.nonneg_vars):
        return False
    for c in lp.constraints:
        v = vec_dot(c.coeffs, d)
        if c.relation == LE and v > 0:
            return False
        if c.relation == GE and v < 0:
            return False
        if c.relation == EQ and v != 0:
            return False
    gain = vec_dot(lp.objective, d)
    return gain > 0 if lp.sense == "max" else gain < 0
