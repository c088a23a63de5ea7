"""Two-phase simplex: statuses, certificates, invariance checks."""

import numpy as np
import pytest

import ncx.lp as lp_mod
from ncx import LinearProgram, LpStatus, SolverStalledError, solve


def _check_optimal(lp: LinearProgram, solution) -> None:
    assert solution.status is LpStatus.OPTIMAL
    residual = np.max(np.abs(lp.constraint_matrix @ solution.x - lp.rhs))
    assert residual <= 1e-7
    for j in range(lp.n_vars):
        if lp.nonneg[j]:
            assert solution.x[j] >= -1e-9
        assert solution.x[j] <= lp.upper_bounds[j] + 1e-9
    assert solution.duality_gap <= 1e-6


def test_min_x_equals_three():
    lp = LinearProgram(objective=[1.0], constraint_matrix=[[1.0]], rhs=[3.0])
    solution = solve(lp)
    _check_optimal(lp, solution)
    assert solution.x[0] == pytest.approx(3.0, abs=1e-9)
    assert solution.objective_value == pytest.approx(3.0, abs=1e-9)


def test_negative_rhs_with_nonnegative_variables_is_infeasible():
    lp = LinearProgram(
        objective=[0.0, 0.0], constraint_matrix=[[1.0, 1.0]], rhs=[-1.0]
    )
    assert solve(lp).status is LpStatus.INFEASIBLE


def test_two_vertex_problem_picks_the_cheaper_vertex():
    # feasible vertices of x1 + x2 = 1 are (1,0) and (0,1); min x1 - x2 = -1
    lp = LinearProgram(
        objective=[1.0, -1.0], constraint_matrix=[[1.0, 1.0]], rhs=[1.0]
    )
    solution = solve(lp)
    _check_optimal(lp, solution)
    assert solution.objective_value == pytest.approx(-1.0, abs=1e-9)
    assert np.allclose(solution.x, [0.0, 1.0], atol=1e-9)


def test_unbounded_objective_detected():
    lp = LinearProgram(
        objective=[-1.0, 0.0], constraint_matrix=[[1.0, -1.0]], rhs=[0.0]
    )
    assert solve(lp).status is LpStatus.UNBOUNDED


def test_upper_bound_via_slack_rows():
    lp = LinearProgram(
        objective=[-1.0, 0.0],
        constraint_matrix=[[1.0, 1.0]],
        rhs=[5.0],
        upper_bounds=[1.0, np.inf],
    )
    solution = solve(lp)
    _check_optimal(lp, solution)
    assert solution.x[0] == pytest.approx(1.0, abs=1e-9)
    assert solution.objective_value == pytest.approx(-1.0, abs=1e-9)


def test_free_variable_by_sign_splitting():
    # x free, y >= 0, x + y = -3: minimizing -x drives y to 0, x to -3
    lp = LinearProgram(
        objective=[-1.0, 0.0],
        constraint_matrix=[[1.0, 1.0]],
        rhs=[-3.0],
        nonneg=[False, True],
    )
    solution = solve(lp)
    _check_optimal(lp, solution)
    assert solution.x[0] == pytest.approx(-3.0, abs=1e-9)


def test_degenerate_rhs_still_terminates():
    lp = LinearProgram(
        objective=[1.0, 1.0, 1.0],
        constraint_matrix=[[1.0, -1.0, 0.0], [1.0, 0.0, -1.0]],
        rhs=[0.0, 0.0],
    )
    solution = solve(lp)
    _check_optimal(lp, solution)
    assert solution.objective_value == pytest.approx(0.0, abs=1e-9)


def test_redundant_rows_are_dropped():
    lp = LinearProgram(
        objective=[1.0, 0.0],
        constraint_matrix=[[1.0, 1.0], [2.0, 2.0]],
        rhs=[1.0, 2.0],
    )
    solution = solve(lp)
    _check_optimal(lp, solution)
    assert solution.objective_value == pytest.approx(0.0, abs=1e-9)


def test_dual_vector_matches_primal_value():
    lp = LinearProgram(
        objective=[2.0, 3.0, 0.0],
        constraint_matrix=[[1.0, 2.0, 1.0], [1.0, 0.0, 0.0]],
        rhs=[4.0, 1.0],
    )
    solution = solve(lp)
    _check_optimal(lp, solution)
    assert float(solution.dual @ lp.rhs) == pytest.approx(
        solution.objective_value, abs=1e-6
    )


def test_permuting_variables_changes_nothing():
    rng = np.random.default_rng(123)
    for _ in range(20):
        m, n = 4, 7
        A = rng.normal(size=(m, n))
        x_feasible = rng.uniform(0.0, 2.0, size=n)
        b = A @ x_feasible
        c = rng.normal(size=n)
        lp = LinearProgram(objective=c, constraint_matrix=A, rhs=b)
        base = solve(lp)
        perm = rng.permutation(n)
        lp_perm = LinearProgram(
            objective=c[perm], constraint_matrix=A[:, perm], rhs=b
        )
        shuffled = solve(lp_perm)
        assert base.status is shuffled.status
        if base.status is LpStatus.OPTIMAL:
            _check_optimal(lp, base)
            _check_optimal(lp_perm, shuffled)
            assert shuffled.objective_value == pytest.approx(
                base.objective_value, abs=1e-8
            )


def test_iteration_cap_raises_solver_stalled(monkeypatch):
    monkeypatch.setattr(lp_mod, "ITERATION_CAP_FACTOR", 0)
    lp = LinearProgram(objective=[1.0], constraint_matrix=[[1.0]], rhs=[3.0])
    with pytest.raises(SolverStalledError):
        lp_mod.solve(lp)


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        LinearProgram(objective=[1.0, 2.0], constraint_matrix=[[1.0]], rhs=[1.0])
    with pytest.raises(ValueError):
        LinearProgram(objective=[1.0], constraint_matrix=[[1.0]], rhs=[1.0, 2.0])
