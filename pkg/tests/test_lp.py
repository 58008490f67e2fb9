import numpy as np
import pytest

from bailnet import (
    EQUAL,
    GREATER_EQUAL,
    INFEASIBLE,
    LESS_EQUAL,
    LinearProgram,
    OPTIMAL,
    UNBOUNDED,
    enumerate_vertices_oracle,
    reoptimize,
    solve,
    solve_with_state,
)


def anchored_lp(rng: np.random.Generator) -> LinearProgram:
    """A random program that is feasible by construction.

    Constraints are tilted around a random interior point so the instance
    always has at least one solution; upper bounds keep it bounded.
    """
    n = int(rng.integers(1, 7))
    m = int(rng.integers(1, 9))
    anchor = rng.uniform(0.0, 3.0, n)
    lp = LinearProgram(
        num_vars=n,
        objective=rng.uniform(-5.0, 5.0, n),
        upper_bounds=anchor + rng.uniform(0.5, 5.0, n),
    )
    for _ in range(m):
        coeffs = rng.uniform(-2.0, 2.0, n)
        value = float(coeffs @ anchor)
        relation = rng.choice([LESS_EQUAL, GREATER_EQUAL, EQUAL])
        if relation == LESS_EQUAL:
            rhs = value + rng.uniform(0.0, 2.0)
        elif relation == GREATER_EQUAL:
            rhs = value - rng.uniform(0.0, 2.0)
        else:
            rhs = value
        lp.add_constraint(coeffs, relation, rhs)
    return lp


def unanchored_lp(rng: np.random.Generator) -> LinearProgram:
    """A fully random program; may be infeasible or unbounded."""
    n = int(rng.integers(1, 7))
    m = int(rng.integers(1, 9))
    upper = np.where(rng.random(n) < 0.7, rng.uniform(1.0, 6.0, n), np.inf)
    lp = LinearProgram(
        num_vars=n,
        objective=rng.uniform(-5.0, 5.0, n),
        upper_bounds=upper,
    )
    for _ in range(m):
        lp.add_constraint(rng.uniform(-2.0, 2.0, n),
                          rng.choice([LESS_EQUAL, GREATER_EQUAL, EQUAL]),
                          rng.uniform(-3.0, 3.0))
    return lp


def assert_feasible(lp: LinearProgram, x: np.ndarray, tol: float = 1e-6):
    assert np.all(x >= lp.lower_bounds - tol)
    assert np.all(x <= lp.upper_bounds + tol)
    for con in lp.constraints:
        value = float(con.coeffs @ x)
        if con.relation == LESS_EQUAL:
            assert value <= con.rhs + tol
        elif con.relation == GREATER_EQUAL:
            assert value >= con.rhs - tol
        else:
            assert value == pytest.approx(con.rhs, abs=tol)


class TestSmallPrograms:
    def test_two_var_budget(self):
        lp = LinearProgram(num_vars=2, objective=[1.0, 1.0])
        lp.add_constraint([1.0, 1.0], LESS_EQUAL, 1.0)
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert sol.objective_value == pytest.approx(1.0)

    def test_infeasible_sign_clash(self):
        lp = LinearProgram(num_vars=1, objective=[1.0])
        lp.add_constraint([1.0], LESS_EQUAL, -1.0)
        sol = solve(lp)
        assert sol.status == INFEASIBLE
        assert sol.x is None

    def test_unbounded_ray(self):
        lp = LinearProgram(num_vars=1, objective=[1.0])
        lp.add_constraint([-1.0], LESS_EQUAL, 0.0)
        sol = solve(lp)
        assert sol.status == UNBOUNDED

    def test_redundant_constraints_degenerate(self):
        lp = LinearProgram(num_vars=2, objective=[1.0, 1.0])
        lp.add_constraint([1.0, 1.0], LESS_EQUAL, 1.0)
        lp.add_constraint([1.0, 1.0], LESS_EQUAL, 1.0)
        lp.add_constraint([2.0, 2.0], LESS_EQUAL, 2.0)
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert sol.objective_value == pytest.approx(1.0)

    def test_equality_pins_solution(self):
        lp = LinearProgram(num_vars=2, objective=[0.0, 1.0])
        lp.add_constraint([1.0, 0.0], EQUAL, 2.0)
        lp.add_constraint([1.0, 1.0], LESS_EQUAL, 5.0)
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert sol.x[0] == pytest.approx(2.0)
        assert sol.x[1] == pytest.approx(3.0)

    def test_negative_lower_bounds(self):
        lp = LinearProgram(num_vars=2, objective=[-1.0, -1.0],
                           lower_bounds=[-4.0, -2.0],
                           upper_bounds=[1.0, 1.0])
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert np.allclose(sol.x, [-4.0, -2.0])
        assert sol.objective_value == pytest.approx(6.0)

    def test_fixed_variable_bounds(self):
        lp = LinearProgram(num_vars=2, objective=[1.0, 1.0],
                           lower_bounds=[3.0, 0.0],
                           upper_bounds=[3.0, 4.0])
        lp.add_constraint([1.0, 1.0], LESS_EQUAL, 5.0)
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert sol.x[0] == pytest.approx(3.0)
        assert sol.objective_value == pytest.approx(5.0)

    def test_negative_rhs_equality(self):
        # Rows with negative right-hand sides exercise the sign handling
        # around the auxiliary variables of the feasibility phase.
        lp = LinearProgram(num_vars=2, objective=[1.0, 0.0],
                           lower_bounds=[-5.0, -5.0],
                           upper_bounds=[5.0, 5.0])
        lp.add_constraint([1.0, 1.0], EQUAL, -3.0)
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert sol.objective_value == pytest.approx(2.0)
        assert_feasible(lp, sol.x)

    def test_no_constraints_bounds_only(self):
        lp = LinearProgram(num_vars=2, objective=[2.0, -1.0],
                           upper_bounds=[3.0, 7.0])
        sol = solve(lp)
        assert sol.status == OPTIMAL
        assert np.allclose(sol.x, [3.0, 0.0])


class TestValidation:
    def test_rejects_zero_vars(self):
        with pytest.raises(ValueError):
            solve(LinearProgram(num_vars=0, objective=[]))

    def test_rejects_objective_shape(self):
        with pytest.raises(ValueError):
            solve(LinearProgram(num_vars=2, objective=[1.0]))

    def test_rejects_nan_objective(self):
        with pytest.raises(ValueError):
            solve(LinearProgram(num_vars=1, objective=[np.nan]))

    def test_rejects_infinite_lower_bound(self):
        with pytest.raises(ValueError):
            solve(LinearProgram(num_vars=1, objective=[1.0],
                                lower_bounds=[-np.inf]))

    def test_rejects_crossed_bounds(self):
        with pytest.raises(ValueError):
            solve(LinearProgram(num_vars=1, objective=[1.0],
                                lower_bounds=[2.0], upper_bounds=[1.0]))

    def test_rejects_bad_relation(self):
        lp = LinearProgram(num_vars=1, objective=[1.0])
        lp.add_constraint([1.0], "<", 1.0)
        with pytest.raises(ValueError):
            solve(lp)

    def test_rejects_wrong_constraint_width(self):
        lp = LinearProgram(num_vars=2, objective=[1.0, 1.0])
        lp.add_constraint([1.0], LESS_EQUAL, 1.0)
        with pytest.raises(ValueError):
            solve(lp)


class TestOracleAgreement:
    def test_matches_vertex_enumeration(self):
        # The vertex oracle reports the best vertex and cannot flag
        # unbounded instances, so an unbounded verdict is checked
        # separately: capping the open directions must let the optimum
        # blow past every vertex and keep growing with the cap.
        rng = np.random.default_rng(7)
        checked = 0
        for trial in range(260):
            lp = anchored_lp(rng) if trial % 2 == 0 else unanchored_lp(rng)
            if len(lp.constraints) > 12:
                continue
            expected = enumerate_vertices_oracle(lp)
            got = solve(lp)
            if got.status == UNBOUNDED and expected.status == OPTIMAL:
                assert np.any(np.isinf(lp.upper_bounds)), f"trial {trial}"
                values = []
                for cap in (1e5, 1e7):
                    capped = LinearProgram(
                        num_vars=lp.num_vars,
                        objective=lp.objective,
                        constraints=lp.constraints,
                        lower_bounds=lp.lower_bounds,
                        upper_bounds=np.minimum(lp.upper_bounds, cap),
                    )
                    capped_sol = solve(capped)
                    assert capped_sol.status == OPTIMAL, f"trial {trial}"
                    values.append(capped_sol.objective_value)
                assert values[0] > expected.objective_value + 1.0, f"trial {trial}"
                assert values[1] > 10.0 * values[0], f"trial {trial}"
            else:
                assert got.status == expected.status, f"trial {trial}"
                if expected.status == OPTIMAL:
                    assert got.objective_value == pytest.approx(
                        expected.objective_value, abs=1e-6), f"trial {trial}"
                    assert_feasible(lp, got.x)
            checked += 1
        assert checked >= 200

    def test_oracle_guards_large_instances(self):
        lp = LinearProgram(num_vars=9, objective=np.ones(9),
                           upper_bounds=np.ones(9))
        with pytest.raises(ValueError):
            enumerate_vertices_oracle(lp)
        lp = LinearProgram(num_vars=2, objective=[1.0, 1.0],
                           upper_bounds=[1.0, 1.0])
        for _ in range(13):
            lp.add_constraint([1.0, 1.0], LESS_EQUAL, 2.0)
        with pytest.raises(ValueError):
            enumerate_vertices_oracle(lp)


class TestDeterminism:
    def test_bit_identical_across_runs(self):
        rng_a = np.random.default_rng(99)
        rng_b = np.random.default_rng(99)
        for _ in range(40):
            lp_a = anchored_lp(rng_a)
            lp_b = anchored_lp(rng_b)
            sol_a = solve(lp_a)
            sol_b = solve(lp_b)
            assert sol_a.status == sol_b.status
            if sol_a.status == OPTIMAL:
                assert sol_a.objective_value == sol_b.objective_value
                assert np.array_equal(sol_a.x, sol_b.x)
                assert sol_a.iterations == sol_b.iterations


class TestWarmRestart:
    def test_reoptimize_matches_cold_solve(self):
        rng = np.random.default_rng(31)
        done = 0
        while done < 30:
            lp = anchored_lp(rng)
            sol, state = solve_with_state(lp)
            if sol.status != OPTIMAL:
                continue
            for _ in range(3):
                new_obj = rng.uniform(-5.0, 5.0, lp.num_vars)
                warm = reoptimize(state, new_obj)
                cold_lp = LinearProgram(
                    num_vars=lp.num_vars,
                    objective=new_obj,
                    constraints=lp.constraints,
                    lower_bounds=lp.lower_bounds,
                    upper_bounds=lp.upper_bounds,
                )
                cold = solve(cold_lp)
                assert warm.status == cold.status
                if cold.status == OPTIMAL:
                    assert warm.objective_value == pytest.approx(
                        cold.objective_value, abs=1e-6)
                    assert_feasible(lp, warm.x)
            done += 1

    def test_reoptimize_detects_unbounded(self):
        lp = LinearProgram(num_vars=2, objective=[-1.0, -1.0])
        lp.add_constraint([1.0, 1.0], GREATER_EQUAL, 1.0)
        sol, state = solve_with_state(lp)
        assert sol.status == OPTIMAL
        flipped = reoptimize(state, np.array([1.0, 1.0]))
        assert flipped.status == UNBOUNDED
