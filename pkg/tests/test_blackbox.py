import numpy as np
import pytest

from curebo.problems import (
    LARGE_OBJECTIVE,
    analytical_problem,
    four_point_problem,
    problem_by_name,
    two_point_problem,
)


def test_registry_dispatch_and_unknown_name():
    assert problem_by_name("analytical").name == "analytical"
    assert problem_by_name("sim2pt", t1_min=10.0).space.lower[0] == 10.0
    with pytest.raises(ValueError, match="unknown problem"):
        problem_by_name("mystery")


def test_two_point_spaces():
    r1 = two_point_problem(t1_min=1.0)
    assert list(r1.space.lower) == [1.0, 125.0]
    assert list(r1.space.upper) == [110.0, 180.0]
    assert r1.space.names == ("t1", "T1")
    assert r1.threshold == 0.995


def test_four_point_space_and_sieve():
    problem = four_point_problem()
    assert list(problem.space.lower) == [10.0, 125.0, 120.0, 150.0]
    assert list(problem.space.upper) == [110.0, 180.0, 200.0, 180.0]
    assert problem.threshold == 0.96
    # first ramp 2 C/min, second 0.25 C/min: passes the slope sieve
    assert problem.sieve_raw(np.array([60.0, 140.0, 140.0, 160.0]))
    # second ramp steeper than the first: sieved out
    assert not problem.sieve_raw(np.array([100.0, 130.0, 120.0, 180.0]))
    strict = four_point_problem(require_rising_second_ramp=True)
    # flat-to-falling second segment rejected only in the strict variant
    falling = np.array([30.0, 170.0, 150.0, 150.0])
    assert problem.sieve_raw(falling)
    assert not strict.sieve_raw(falling)


def test_unassemblable_cycle_returns_dominated_sentinel():
    problem = two_point_problem()
    # raw point outside the design box: control point after the dwell anchor
    f, g = problem.evaluate_raw(np.array([130.0, 150.0]))
    assert f == LARGE_OBJECTIVE
    assert g == 0.0


def test_simulator_problem_end_to_end_matches_direct_simulation():
    from curebo.problems import MechanicalParams, KineticParams, simulate_cure, two_point_cycle

    problem = two_point_problem(dt=0.2)
    x = problem.space.normalize(np.array([45.0, 150.0]))
    f, g = problem(x)
    trace = simulate_cure(two_point_cycle(45.0, 150.0), KineticParams(), MechanicalParams(), dt=0.2)
    assert f == trace.u_proxy
    assert g == trace.final_doc


def test_analytical_problem_is_identity_normalized():
    problem = analytical_problem()
    f0, g0 = problem(np.array([0.0, 0.0]))
    assert (f0, g0) == (pytest.approx(1.8646), pytest.approx(0.9902))
