"""Dense linear-programming kernel.

Two-phase primal simplex on the bounded standard form: maximize ``c @ x``
subject to row constraints (``<=``, ``=``, ``>=``) and per-variable bounds
``lower <= x <= upper``.  Lower bounds must be finite; upper bounds may be
``+inf``.  Bounds are handled natively (nonbasic variables may sit at
either bound), so box constraints never inflate the row count.

The pivot rule is largest-coefficient with a switch to Bland's rule after
a stretch of pivots without objective improvement, which guarantees
termination on degenerate problems.  All arithmetic is plain numpy, so
solving the same program twice produces bit-identical results.

``solve_with_state``/``reoptimize`` allow cheap re-solves after an
objective change (the constraint set must stay identical); the optimal
basis of the previous solve is reused as the starting point.

``enumerate_vertices_oracle`` brute-forces every candidate basic solution
and is intended only for cross-checking ``solve`` on tiny programs.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FEASIBILITY_TOL",
    "PIVOT_TOL",
    "LESS_EQUAL",
    "EQUAL",
    "GREATER_EQUAL",
    "LpError",
    "LpNumericalError",
    "Constraint",
    "LinearProgram",
    "LpSolution",
    "SimplexState",
    "solve",
    "solve_with_state",
    "reoptimize",
    "enumerate_vertices_oracle",
]

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-7
PIVOT_TOL = 1e-10

LESS_EQUAL = "<="
EQUAL = "="
GREATER_EQUAL = ">="
_RELATIONS = (LESS_EQUAL, EQUAL, GREATER_EQUAL)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LpError(RuntimeError):
    """The solver could not produce a trustworthy answer."""


class LpNumericalError(LpError):
    """Numerical instability detected mid-solve."""


@dataclass(eq=False)
class Constraint:
    coeffs: np.ndarray
    relation: str
    rhs: float

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        self.rhs = float(self.rhs)


@dataclass(eq=False)
class LinearProgram:
    """Maximize ``objective @ x`` subject to constraints and bounds."""

    num_vars: int
    objective: np.ndarray
    constraints: list[Constraint] = field(default_factory=list)
    lower_bounds: np.ndarray | None = None
    upper_bounds: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=float)
        if self.lower_bounds is None:
            self.lower_bounds = np.zeros(self.num_vars)
        else:
            self.lower_bounds = np.asarray(self.lower_bounds, dtype=float)
        if self.upper_bounds is None:
            self.upper_bounds = np.full(self.num_vars, np.inf)
        else:
            self.upper_bounds = np.asarray(self.upper_bounds, dtype=float)

    def add_constraint(self, coeffs, relation: str, rhs: float) -> None:
        self.constraints.append(Constraint(coeffs, relation, rhs))

    def validate(self) -> None:
        if self.num_vars < 1:
            raise ValueError("program needs at least one variable")
        if self.objective.shape != (self.num_vars,):
            raise ValueError(
                f"objective has shape {self.objective.shape}, expected ({self.num_vars},)")
        if not np.all(np.isfinite(self.objective)):
            raise ValueError("objective coefficients must be finite")
        if self.lower_bounds.shape != (self.num_vars,) or \
                self.upper_bounds.shape != (self.num_vars,):
            raise ValueError("bound vectors must match the variable count")
        if not np.all(np.isfinite(self.lower_bounds)):
            raise ValueError("lower bounds must be finite")
        if np.any(np.isnan(self.upper_bounds)) or np.any(self.upper_bounds == -np.inf):
            raise ValueError("upper bounds must be finite or +inf")
        if np.any(self.lower_bounds > self.upper_bounds):
            raise ValueError("lower bound exceeds upper bound")
        for k, con in enumerate(self.constraints):
            if con.coeffs.shape != (self.num_vars,):
                raise ValueError(f"constraint {k} has wrong coefficient count")
            if not np.all(np.isfinite(con.coeffs)) or not np.isfinite(con.rhs):
                raise ValueError(f"constraint {k} has non-finite data")
            if con.relation not in _RELATIONS:
                raise ValueError(f"constraint {k} has unknown relation {con.relation!r}")


@dataclass(eq=False)
class LpSolution:
    status: str
    x: np.ndarray | None = None
    objective_value: float | None = None
    iterations: int = 0


class _Tableau:
    """Mutable simplex state over the shifted, row-scaled equality form."""

    def __init__(self, lp: LinearProgram):
        m = len(lp.constraints)
        n = lp.num_vars
        lb = lp.lower_bounds
        A = np.zeros((m, n))
        b = np.zeros(m)
        is_eq = np.zeros(m, dtype=bool)
        for i, con in enumerate(lp.constraints):
            coeffs, rhs = con.coeffs, con.rhs - float(con.coeffs @ lb)
            if con.relation == GREATER_EQUAL:
                coeffs, rhs = -coeffs, -rhs
            A[i] = coeffs
            b[i] = rhs
            is_eq[i] = con.relation == EQUAL

        # Row equilibration; feasibility tolerances are absolute afterwards.
        scale = np.max(np.abs(A), axis=1) if n else np.zeros(m)
        scale[scale == 0.0] = 1.0
        A /= scale[:, None]
        b /= scale

        le_rows = np.flatnonzero(~is_eq)
        n_slack = le_rows.size
        slack_col = {int(row): n + k for k, row in enumerate(le_rows)}

        basis = np.full(m, -1, dtype=int)
        art_rows: list[int] = []
        for i in range(m):
            if not is_eq[i] and b[i] >= 0.0:
                basis[i] = slack_col[i]
            else:
                art_rows.append(i)
        n_art = len(art_rows)

        # Feasibility checks keep this orientation (>= already folded to <=).
        A_check = A.copy()
        b_check = b.copy()

        # Rows taking an artificial need rhs >= 0 so the artificial can sit
        # in the basis with a unit coefficient.
        negated = np.zeros(m, dtype=bool)
        for i in art_rows:
            if b[i] < 0.0:
                A[i] = -A[i]
                b[i] = -b[i]
                negated[i] = True

        ncols = n + n_slack + n_art
        T = np.zeros((m, ncols))
        T[:, :n] = A
        for row, col in slack_col.items():
            T[row, col] = -1.0 if negated[row] else 1.0
        for k, row in enumerate(art_rows):
            col = n + n_slack + k
            T[row, col] = 1.0
            basis[row] = col

        self.m = m
        self.n_struct = n
        self.ncols = ncols
        self.T = T
        self.A_orig = T.copy()
        self.b_orig = b.copy()
        self.A_check = A_check
        self.b_check = b_check
        self.is_eq = is_eq
        self.lb_shift = lb.copy()
        self.ub = np.concatenate([
            lp.upper_bounds - lb,
            np.full(n_slack + n_art, np.inf),
        ])
        self.basis = basis
        self.is_basic = np.zeros(ncols, dtype=bool)
        self.is_basic[basis] = True
        self.at_upper = np.zeros(ncols, dtype=bool)
        self.art_mask = np.zeros(ncols, dtype=bool)
        self.art_mask[n + n_slack:] = True
        self.xB = b.copy()
        self.c_cur = np.zeros(ncols)
        self.r = np.zeros(ncols)
        self.pivots = 0
        self._buf = np.empty_like(T)
        self.n_art = n_art

    # -- objective bookkeeping -------------------------------------------

    def _set_objective(self, c_full: np.ndarray) -> None:
        self.c_cur = c_full
        if self.m:
            self.r = c_full - c_full[self.basis] @ self.T
            self.r[self.basis] = 0.0
        else:
            self.r = c_full.copy()

    def set_phase1(self) -> None:
        c = np.zeros(self.ncols)
        c[self.art_mask] = -1.0
        self._set_objective(c)

    def set_phase2(self, objective: np.ndarray) -> None:
        c = np.zeros(self.ncols)
        c[:self.n_struct] = objective
        self._set_objective(c)

    def objective_value(self) -> float:
        value = float(self.c_cur[self.basis] @ self.xB) if self.m else 0.0
        up = self.at_upper
        if up.any():
            value += float(self.c_cur[up] @ self.ub[up])
        return value

    def artificial_total(self) -> float:
        if not self.n_art:
            return 0.0
        sel = self.art_mask[self.basis]
        return float(np.clip(self.xB[sel], 0.0, None).sum()) if sel.any() else 0.0

    # -- pivoting ---------------------------------------------------------

    def _entering(self, bland: bool, dual_tol: float) -> int:
        r = self.r
        movable = ~self.is_basic & ~self.art_mask & (self.ub > PIVOT_TOL)
        viol = movable & ((~self.at_upper & (r > dual_tol)) |
                          (self.at_upper & (r < -dual_tol)))
        if not viol.any():
            return -1
        if bland:
            return int(np.argmax(viol))
        score = np.where(viol, np.abs(r), -1.0)
        return int(np.argmax(score))

    def _pivot(self, row: int, col: int) -> None:
        T = self.T
        piv = T[row, col]
        prow = T[row] / piv
        pcol = T[:, col].copy()
        np.multiply(pcol[:, None], prow[None, :], out=self._buf)
        T -= self._buf
        T[row] = prow
        self.r -= self.r[col] * prow
        T[:, col] = 0.0
        T[row, col] = 1.0
        self.r[col] = 0.0
        self.pivots += 1

    def optimize(self, phase: int, hard_cap: int) -> str:
        m, ncols = self.m, self.ncols
        dual_tol = 1e-9 * max(1.0, float(np.max(np.abs(self.c_cur))) if ncols else 1.0)
        stall_limit = 3 * (m + ncols)
        stall = 0
        bland = False
        best = self.objective_value()
        while True:
            j = self._entering(bland, dual_tol)
            if j < 0:
                return OPTIMAL
            dirn = -1.0 if self.at_upper[j] else 1.0
            col = self.T[:, j]
            signed = dirn * col

            if m:
                dec = signed > PIVOT_TOL
                ub_b = self.ub[self.basis]
                inc = (signed < -PIVOT_TOL) & np.isfinite(ub_b)
                ratios = np.full(m, np.inf)
                if dec.any():
                    ratios[dec] = np.maximum(self.xB[dec], 0.0) / signed[dec]
                if inc.any():
                    ratios[inc] = (np.maximum(ub_b[inc] - self.xB[inc], 0.0)
                                   / -signed[inc])
                leave_row = int(np.argmin(ratios))
                row_step = float(ratios[leave_row])
            else:
                leave_row, row_step = -1, np.inf
            flip_step = float(self.ub[j])

            if np.isinf(row_step) and np.isinf(flip_step):
                if phase == 1:
                    raise LpNumericalError(
                        "feasibility phase claims an unbounded direction; "
                        "this indicates numerical breakdown")
                if bland and float(np.max(np.abs(col)) if m else 0.0) < PIVOT_TOL:
                    raise LpNumericalError(
                        "entering column vanished below pivot tolerance under "
                        "the anti-cycling rule")
                return UNBOUNDED

            if flip_step <= row_step:
                # Bound flip: the entering variable crosses to its other
                # bound without a basis change.
                self.xB -= dirn * flip_step * col
                self.at_upper[j] = not self.at_upper[j]
                self.pivots += 1
            else:
                step = max(row_step, 0.0)
                leaving = int(self.basis[leave_row])
                leaves_to_upper = signed[leave_row] < 0.0
                self.xB -= dirn * step * col
                self.is_basic[leaving] = False
                self.at_upper[leaving] = leaves_to_upper
                self.basis[leave_row] = j
                self.is_basic[j] = True
                entering_value = step if dirn > 0 else self.ub[j] - step
                self._pivot(leave_row, j)
                self.xB[leave_row] = entering_value
                self.at_upper[j] = False

            value = self.objective_value()
            if value > best + 1e-9 * max(1.0, abs(best)):
                best = value
                stall = 0
                bland = False
            else:
                stall += 1
                if stall > stall_limit:
                    bland = True
            if self.pivots > hard_cap:
                raise LpNumericalError(
                    f"pivot limit exceeded ({hard_cap}); the program appears "
                    f"numerically intractable")

    # -- feasibility restoration and extraction ---------------------------

    def drive_out_artificials(self) -> None:
        if not self.n_art:
            return
        for row in range(self.m):
            k = int(self.basis[row])
            if not self.art_mask[k]:
                continue
            entries = np.abs(self.T[row])
            entries[self.art_mask] = 0.0
            entries[self.is_basic] = 0.0
            j = int(np.argmax(entries))
            if entries[j] > PIVOT_TOL:
                value = self.ub[j] if self.at_upper[j] else 0.0
                self.is_basic[k] = False
                self.at_upper[k] = False
                self.basis[row] = j
                self.is_basic[j] = True
                self._pivot(row, j)
                self.xB[row] = value
                self.at_upper[j] = False
            else:
                # Redundant row: deactivate it so nothing can move the
                # artificial off zero.
                self.T[row] = 0.0
                self.T[row, k] = 1.0
                self.xB[row] = 0.0

    def refresh_basics(self) -> None:
        """Recompute basic values from the original columns to shed drift."""
        if not self.m:
            return
        up = self.at_upper & np.isfinite(self.ub)
        rhs = self.b_orig.copy()
        if up.any():
            rhs -= self.A_orig[:, up] @ self.ub[up]
        try:
            fresh = np.linalg.solve(self.A_orig[:, self.basis], rhs)
        except np.linalg.LinAlgError:
            return
        self.xB = fresh

    def extract(self, lp: LinearProgram) -> np.ndarray:
        n = self.n_struct
        y = np.zeros(n)
        up = self.at_upper[:n]
        y[up] = self.ub[:n][up]
        for row in range(self.m):
            k = int(self.basis[row])
            if k < n:
                y[k] = self.xB[row]
        y = np.clip(y, 0.0, self.ub[:n])
        if self.m:
            lhs = self.A_check @ y
            gap = lhs - self.b_check
            viol = float(np.max(np.where(self.is_eq, np.abs(gap),
                                         np.clip(gap, 0.0, None))))
            if viol > FEASIBILITY_TOL:
                raise LpNumericalError(
                    f"solution violates a constraint by {viol:.3e} "
                    f"(tolerance {FEASIBILITY_TOL:.0e})")
        return self.lb_shift + y


@dataclass(eq=False)
class SimplexState:
    """Reusable solver state for objective-only re-solves."""

    tableau: _Tableau
    lp: LinearProgram
    ok: bool


def _hard_cap(tab: _Tableau) -> int:
    return 50 * (tab.m + tab.ncols) + 10_000


def _finish_phase2(tab: _Tableau, lp: LinearProgram, objective: np.ndarray,
                   pivots_before: int) -> tuple[LpSolution, bool]:
    status = tab.optimize(phase=2, hard_cap=_hard_cap(tab))
    iterations = tab.pivots - pivots_before
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, iterations=iterations), False
    tab.refresh_basics()
    x = tab.extract(lp)
    value = float(objective @ x)
    return LpSolution(OPTIMAL, x=x, objective_value=value,
                      iterations=iterations), True


def solve_with_state(lp: LinearProgram,
                     verbose: bool = False) -> tuple[LpSolution, SimplexState]:
    """Solve and return the state for later ``reoptimize`` calls."""
    lp.validate()
    tab = _Tableau(lp)
    if verbose:
        logger.debug("tableau built: %d rows, %d columns, %d artificials",
                     tab.m, tab.ncols, tab.n_art)
    if tab.n_art:
        tab.set_phase1()
        tab.optimize(phase=1, hard_cap=_hard_cap(tab))
        if tab.artificial_total() > FEASIBILITY_TOL * max(1.0, float(tab.m)):
            return (LpSolution(INFEASIBLE, iterations=tab.pivots),
                    SimplexState(tab, lp, ok=False))
        tab.drive_out_artificials()
        if verbose:
            logger.debug("feasibility phase done after %d pivots", tab.pivots)
    tab.set_phase2(lp.objective)
    solution, ok = _finish_phase2(tab, lp, lp.objective, pivots_before=0)
    if verbose and solution.status == OPTIMAL:
        logger.debug("optimal after %d pivots, objective %.12g",
                     solution.iterations, solution.objective_value)
    return solution, SimplexState(tab, lp, ok=ok)


def solve(lp: LinearProgram, verbose: bool = False) -> LpSolution:
    solution, _ = solve_with_state(lp, verbose=verbose)
    return solution


def reoptimize(state: SimplexState, objective) -> LpSolution:
    """Re-solve the same constraint set with a new objective.

    Continues from the previous optimal basis, so small objective changes
    typically cost a handful of pivots.  The state is updated in place.
    """
    if not state.ok:
        raise LpError("cannot reoptimize: previous solve did not end optimal")
    objective = np.asarray(objective, dtype=float)
    if objective.shape != (state.tableau.n_struct,):
        raise ValueError("objective length does not match the program")
    if not np.all(np.isfinite(objective)):
        raise ValueError("objective coefficients must be finite")
    tab = state.tableau
    before = tab.pivots
    tab.set_phase2(objective)
    solution, ok = _finish_phase2(tab, state.lp, objective, pivots_before=before)
    state.ok = ok
    return solution


# -- brute-force oracle ----------------------------------------------------

_ORACLE_MAX_VARS = 8
_ORACLE_MAX_CONSTRAINTS = 12
_ORACLE_TOL = 1e-8


def enumerate_vertices_oracle(lp: LinearProgram) -> LpSolution:
    """Best objective over all vertices of the feasible region, by brute force.

    Every subset of ``num_vars`` active planes (constraints treated as
    equalities plus finite bounds) is solved and checked for feasibility.
    Lower bounds are finite, so a nonempty feasible region has a vertex
    and an empty result certifies infeasibility.  Unboundedness is not
    detected.  Guarded to tiny programs; use only in tests.
    """
    lp.validate()
    n, m = lp.num_vars, len(lp.constraints)
    if n > _ORACLE_MAX_VARS or m > _ORACLE_MAX_CONSTRAINTS:
        raise ValueError(
            f"oracle limited to {_ORACLE_MAX_VARS} variables and "
            f"{_ORACLE_MAX_CONSTRAINTS} constraints")

    planes: list[tuple[np.ndarray, float]] = []
    for con in lp.constraints:
        norm = float(np.max(np.abs(con.coeffs)))
        if norm == 0.0:
            # Plane with no normal direction; only feasibility matters.
            if con.relation == LESS_EQUAL and con.rhs < -_ORACLE_TOL:
                return LpSolution(INFEASIBLE)
            if con.relation == GREATER_EQUAL and con.rhs > _ORACLE_TOL:
                return LpSolution(INFEASIBLE)
            if con.relation == EQUAL and abs(con.rhs) > _ORACLE_TOL:
                return LpSolution(INFEASIBLE)
            continue
        planes.append((con.coeffs / norm, con.rhs / norm))
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        planes.append((e, float(lp.lower_bounds[i])))
        if np.isfinite(lp.upper_bounds[i]):
            planes.append((e, float(lp.upper_bounds[i])))

    best_value = -np.inf
    best_x: np.ndarray | None = None
    checked = 0
    for combo in itertools.combinations(range(len(planes)), n):
        mat = np.array([planes[k][0] for k in combo])
        rhs = np.array([planes[k][1] for k in combo])
        try:
            x = np.linalg.solve(mat, rhs)
        except np.linalg.LinAlgError:
            continue
        if not _oracle_feasible(lp, x):
            continue
        checked += 1
        value = float(lp.objective @ x)
        if value > best_value:
            best_value = value
            best_x = x
    if best_x is None:
        return LpSolution(INFEASIBLE, iterations=checked)
    return LpSolution(OPTIMAL, x=best_x, objective_value=best_value,
                      iterations=checked)


def _oracle_feasible(lp: LinearProgram, x: np.ndarray) -> bool:
    if not np.all(np.isfinite(x)):
        return False
    if np.any(x < lp.lower_bounds - _ORACLE_TOL):
        return False
    if np.any(x > lp.upper_bounds + _ORACLE_TOL):
        return False
    for con in lp.constraints:
        norm = max(1.0, float(np.max(np.abs(con.coeffs))))
        gap = (float(con.coeffs @ x) - con.rhs) / norm
        if con.relation == LESS_EQUAL and gap > _ORACLE_TOL:
            return False
        if con.relation == GREATER_EQUAL and gap < -_ORACLE_TOL:
            return False
        if con.relation == EQUAL and abs(gap) > _ORACLE_TOL:
            return False
    return True
