import numpy as np
import pytest

from curebo.cbo import CboConfig, run_cbo
from curebo.problems import analytical_problem
from curebo.records import Evaluation, best_feasible
from curebo.space import DesignSpace

UNIT_SQUARE = DesignSpace(lower=[0.0, 0.0], upper=[1.0, 1.0])


def bowl(x):
    return float((x[0] - 0.3) ** 2 + (x[1] - 0.7) ** 2), 1.0


def _eval(f, g, step=0, phase="init"):
    return Evaluation(x=np.array([0.0, 0.0]), f=f, g=g, step_index=step, phase=phase)


def test_best_feasible_rules():
    assert not best_feasible([], 0.5).found
    assert not best_feasible([_eval(1.0, 0.1), _eval(0.5, 0.2)], 0.5).found
    # global minimum infeasible: the feasible runner-up wins
    mixed = [_eval(0.1, 0.2), _eval(0.7, 0.9), _eval(0.4, 0.6)]
    inc = best_feasible(mixed, 0.5)
    assert inc.found and inc.y_min == 0.4
    # boundary equality counts as feasible
    assert best_feasible([_eval(1.0, 0.5)], 0.5).found


def test_budget_exactness_forty_evaluations():
    problem = analytical_problem()
    config = CboConfig(n_init=10, n_steps=30, pool_size=500, threshold=0.995, seed=1)
    report = run_cbo(problem, problem.space, config)
    assert report.n_evaluations == 40
    assert sum(e.phase == "init" for e in report.evaluations) == 10
    assert sum(e.phase == "learn" for e in report.evaluations) == 30
    assert len(report.best_trace) == 30
    assert report.complete


def test_unconstrained_bowl_converges_and_trace_monotone():
    config = CboConfig(n_init=6, n_steps=10, pool_size=2000, threshold=0.5, seed=3)
    report = run_cbo(bowl, UNIT_SQUARE, config)
    values = [v for v in report.best_trace if v is not None]
    assert len(values) == 10  # g == 1 everywhere: feasible from the start
    assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))
    # within pool resolution of the bowl minimum
    assert report.f_star < 1e-3
    assert np.linalg.norm(report.x_star - np.array([0.3, 0.7])) < 0.05


def test_reproducible_given_seed():
    problem = analytical_problem()
    config = CboConfig(n_init=5, n_steps=6, pool_size=300, seed=11)
    a = run_cbo(problem, problem.space, config)
    b = run_cbo(problem, problem.space, config)
    assert a.n_evaluations == b.n_evaluations
    for ea, eb in zip(a.evaluations, b.evaluations):
        assert np.array_equal(ea.x, eb.x)
        assert ea.f == eb.f and ea.g == eb.g
    c = run_cbo(problem, problem.space, CboConfig(n_init=5, n_steps=6, pool_size=300, seed=12))
    assert any(not np.array_equal(ea.x, ec.x) for ea, ec in zip(a.evaluations, c.evaluations))


def test_incumbent_is_feasible_or_absent():
    problem = analytical_problem()
    report = run_cbo(problem, problem.space, CboConfig(n_init=6, n_steps=4, pool_size=300, seed=5))
    if report.x_star is not None:
        f, g = problem(report.x_star)
        assert g >= report.threshold
        assert f == report.f_star


def test_pf_only_fallback_on_empty_sieve():
    problem = analytical_problem()
    config = CboConfig(
        n_init=5, n_steps=3, pool_size=200, seed=2, sieve_predicate=lambda raw: False
    )
    report = run_cbo(problem, problem.space, config)
    assert report.n_evaluations == 8  # budget still exact
    assert sum("PF only" in e for e in report.events) == 3


def test_sieve_predicate_filters_candidates():
    problem = analytical_problem()
    config = CboConfig(
        n_init=5, n_steps=6, pool_size=400, seed=2, sieve_predicate=lambda raw: raw[0] < 0.5
    )
    report = run_cbo(problem, problem.space, config)
    for e in report.evaluations:
        if e.phase == "learn":
            assert e.x[0] < 0.5


def test_fixed_pool_mode_reuses_candidates():
    problem = analytical_problem()
    config = CboConfig(n_init=5, n_steps=5, pool_size=100, seed=9, fresh_pool=False)
    report = run_cbo(problem, problem.space, config)
    assert report.n_evaluations == 10
    assert report.complete


def test_failing_problem_returns_partial_report():
    calls = {"n": 0}

    def flaky(x):
        calls["n"] += 1
        if calls["n"] > 7:
            raise RuntimeError("simulator crashed")
        return float(x[0]), 1.0

    report = run_cbo(flaky, UNIT_SQUARE, CboConfig(n_init=5, n_steps=10, pool_size=100, seed=0))
    assert not report.complete
    assert report.n_evaluations == 7
    assert any("failed" in e for e in report.events)


def test_config_validation_lists_problems():
    with pytest.raises(ValueError, match="n_init"):
        CboConfig(n_init=1)
    with pytest.raises(ValueError, match="pool_size"):
        CboConfig(pool_size=0)
