"""Dense two-phase simplex for small equality-form linear programs.

Minimizes ``c @ x`` subject to ``A @ x = b`` with nonnegative variables,
optional per-variable upper bounds (handled by explicit slack rows) and
optional free variables (handled by sign splitting).  Bland's anti-cycling
rule is always on; the iteration cap distinguishes numerically stalled
pivoting from genuine infeasibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import SolverStalledError
from .tolerance import resolve_tol

ITERATION_CAP_FACTOR = 50


@dataclass
class LinearProgram:
    """min objective @ x  s.t.  constraint_matrix @ x = rhs, bounds on x.

    ``nonneg`` flags default to all-True; ``upper_bounds`` defaults to +inf
    (no upper bound).  Dimensions are validated at construction.
    """

    objective: np.ndarray
    constraint_matrix: np.ndarray
    rhs: np.ndarray
    nonneg: np.ndarray | None = None
    upper_bounds: np.ndarray | None = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).reshape(-1)
        self.constraint_matrix = np.atleast_2d(
            np.asarray(self.constraint_matrix, dtype=float)
        )
        self.rhs = np.asarray(self.rhs, dtype=float).reshape(-1)
        m, n = self.constraint_matrix.shape
        if self.objective.shape[0] != n:
            raise ValueError(f"objective has {self.objective.shape[0]} entries, expected {n}")
        if self.rhs.shape[0] != m:
            raise ValueError(f"rhs has {self.rhs.shape[0]} entries, expected {m}")
        if m == 0:
            raise ValueError("at least one constraint is required")
        if self.nonneg is None:
            self.nonneg = np.ones(n, dtype=bool)
        else:
            self.nonneg = np.asarray(self.nonneg, dtype=bool).reshape(-1)
            if self.nonneg.shape[0] != n:
                raise ValueError("nonneg flags do not match the variable count")
        if self.upper_bounds is None:
            self.upper_bounds = np.full(n, np.inf)
        else:
            self.upper_bounds = np.asarray(self.upper_bounds, dtype=float).reshape(-1)
            if self.upper_bounds.shape[0] != n:
                raise ValueError("upper bounds do not match the variable count")

    @property
    def n_vars(self) -> int:
        return self.constraint_matrix.shape[1]

    @property
    def n_constraints(self) -> int:
        return self.constraint_matrix.shape[0]


class LpStatus(Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass
class LpSolution:
    """Solver outcome; ``x``/``objective_value`` are set only when Optimal.

    ``dual`` holds one multiplier per original constraint row and
    ``duality_gap`` the gap |y @ b - c @ x| of the dual point built from the
    final basis (a cheap certificate that pivoting did not drift).
    """

    status: LpStatus
    x: np.ndarray | None = None
    objective_value: float | None = None
    dual: np.ndarray | None = None
    duality_gap: float | None = None
    iterations: int = 0


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for i in range(tableau.shape[0]):
        if i != row:
            tableau[i] -= tableau[i, col] * tableau[row]


def _run_simplex(tableau, basis, costs, cap, tol, counter):
    """Pivot to optimality with Bland's rule; returns 'optimal' or 'unbounded'."""
    m, width = tableau.shape
    ncols = width - 1
    while True:
        cb = costs[basis]
        reduced = costs - cb @ tableau[:, :ncols]
        reduced[basis] = 0.0
        entering = -1
        for j in range(ncols):
            if reduced[j] < -tol:
                entering = j
                break
        if entering < 0:
            return "optimal"
        col = tableau[:, entering]
        best_ratio, leave = np.inf, -1
        for i in range(m):
            if col[i] > tol:
                ratio = tableau[i, -1] / col[i]
                if ratio < best_ratio - 1e-12 or (
                    abs(ratio - best_ratio) <= 1e-12 and leave >= 0 and basis[i] < basis[leave]
                ):
                    best_ratio, leave = ratio, i
        if leave < 0:
            return "unbounded"
        _pivot(tableau, leave, entering)
        basis[leave] = entering
        counter[0] += 1
        if counter[0] > cap:
            raise SolverStalledError(
                f"simplex exceeded its iteration cap of {cap} pivots"
            )


def _standardize(lp: LinearProgram):
    """Split free variables, add slack rows for upper bounds.

    Returns (A, b, c, col_map, n_rows_original) where ``col_map[j]`` is the
    (original_index, sign) pair recovering original variables.
    """
    m, n = lp.n_constraints, lp.n_vars
    col_map: list[tuple[int, float]] = []
    cols = []
    c_std = []
    for j in range(n):
        cols.append(lp.constraint_matrix[:, j])
        c_std.append(lp.objective[j])
        col_map.append((j, 1.0))
        if not lp.nonneg[j]:
            cols.append(-lp.constraint_matrix[:, j])
            c_std.append(-lp.objective[j])
            col_map.append((j, -1.0))
    A = np.column_stack(cols)
    b = lp.rhs.copy()

    bounded = [j for j in range(n) if np.isfinite(lp.upper_bounds[j])]
    if bounded:
        extra = np.zeros((len(bounded), A.shape[1]))
        for row, j in enumerate(bounded):
            for k, (orig, sign) in enumerate(col_map):
                if orig == j:
                    extra[row, k] = sign
        slack_block = np.zeros((A.shape[0] + len(bounded), len(bounded)))
        A = np.vstack([A, extra])
        for row in range(len(bounded)):
            slack_block[m + row, row] = 1.0
        A = np.hstack([A, slack_block])
        b = np.concatenate([b, lp.upper_bounds[bounded]])
        c_std.extend([0.0] * len(bounded))
        col_map.extend([(-1, 0.0)] * len(bounded))
    return A, b, np.array(c_std), col_map, m


def solve(lp: LinearProgram, tol: float | None = None) -> LpSolution:
    """Two-phase simplex solve of ``lp``.

    Optimal solutions satisfy primal feasibility (residual below 1e-7, after
    re-solving the final basis) and optimality via the reduced-cost check
    ``>= -tol``; pivoting beyond ``50 * (n_vars + n_constraints)`` iterations
    on the standardized problem raises :class:`SolverStalledError`.
    """
    tol = resolve_tol(tol)
    A, b, c, col_map, m_orig = _standardize(lp)
    m, n = A.shape
    cap = ITERATION_CAP_FACTOR * (m + n)

    row_signs = np.ones(m)
    flip = b < 0
    row_signs[flip] = -1.0
    A = A * row_signs[:, None]
    b = b * row_signs

    # phase 1: artificial basis, minimize the sum of artificials
    tableau = np.hstack([A, np.eye(m), b[:, None]])
    basis = list(range(n, n + m))
    costs1 = np.concatenate([np.zeros(n), np.ones(m)])
    counter = [0]
    outcome = _run_simplex(tableau, basis, costs1, cap, tol, counter)
    if outcome != "optimal":
        raise SolverStalledError("phase 1 reported an unbounded artificial objective")
    phase1_value = float(costs1[basis] @ tableau[:, -1])
    if phase1_value > max(1e-8, 10.0 * tol):
        return LpSolution(status=LpStatus.INFEASIBLE, iterations=counter[0])

    # drive artificial variables out of the basis; drop redundant rows
    redundant = []
    for i in range(m):
        if basis[i] >= n:
            pivot_col = next(
                (j for j in range(n) if j not in basis and abs(tableau[i, j]) > tol), None
            )
            if pivot_col is None:
                redundant.append(i)
            else:
                _pivot(tableau, i, pivot_col)
                basis[i] = pivot_col
    keep_rows = [i for i in range(m) if i not in redundant]
    surviving = np.array(keep_rows, dtype=int)
    tableau = np.hstack([tableau[surviving][:, :n], tableau[surviving][:, -1:]])
    basis = [basis[i] for i in keep_rows]

    outcome = _run_simplex(tableau, basis, c, cap, tol, counter)
    if outcome == "unbounded":
        return LpSolution(status=LpStatus.UNBOUNDED, iterations=counter[0])

    # refine the basic solution against the original (flipped) system
    basis_matrix = A[surviving][:, basis]
    try:
        x_basic = np.linalg.solve(basis_matrix, b[surviving])
        y_surv = np.linalg.solve(basis_matrix.T, c[basis])
    except np.linalg.LinAlgError:
        x_basic = tableau[:, -1].copy()
        y_surv = np.linalg.lstsq(basis_matrix.T, c[basis], rcond=None)[0]
    x_std = np.zeros(n)
    x_std[basis] = x_basic

    residual = float(np.max(np.abs(A @ x_std - b)))
    if residual > 1e-7:
        raise SolverStalledError(f"final basis leaves residual {residual:.3g}")

    x = np.zeros(lp.n_vars)
    for k, (orig, sign) in enumerate(col_map):
        if orig >= 0:
            x[orig] += sign * x_std[k]
    objective_value = float(lp.objective @ x)
    duality_gap = abs(float(y_surv @ b[surviving]) - float(c @ x_std))
    dual_full = np.zeros(m)
    dual_full[surviving] = y_surv
    dual_full *= row_signs
    return LpSolution(
        status=LpStatus.OPTIMAL,
        x=x,
        objective_value=objective_value,
        dual=dual_full[:m_orig],
        duality_gap=duality_gap,
        iterations=counter[0],
    )
