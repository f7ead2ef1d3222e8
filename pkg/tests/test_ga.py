import numpy as np
import pytest

from curebo.ga import (
    GaConfig,
    Individual,
    _tournament,
    constraint_dominates,
    polynomial_mutation,
    run_ga,
    sbx_pair,
)
from curebo.problems import analytical_problem


def _ind(f, violation):
    return Individual(x=np.zeros(2), f=f, g=0.0, violation=violation)


def test_constraint_domination_rules():
    assert constraint_dominates(_ind(5.0, 0.0), _ind(1.0, 0.3))  # feasible beats infeasible
    assert constraint_dominates(_ind(9.0, 0.01), _ind(1.0, 0.02))  # smaller violation
    assert constraint_dominates(_ind(2.0, 0.0), _ind(3.0, 0.0))  # smaller f
    assert not constraint_dominates(_ind(3.0, 0.0), _ind(2.0, 0.0))
    same = _ind(2.0, 0.0)
    assert not constraint_dominates(same, same)  # no strict domination


class _FixedPicks:
    """rng stub whose integer draws are scripted."""

    def __init__(self, picks):
        self.picks = list(picks)

    def integers(self, lo, hi, size):
        return np.array(self.picks[:size])


def test_tournament_feasible_beats_infeasible_whenever_drawn():
    feasible, infeasible = _ind(5.0, 0.0), _ind(1.0, 0.4)
    pop = [infeasible, feasible]
    # feasible (f=5) beats infeasible (f=1) regardless of draw order
    assert _tournament(pop, _FixedPicks([0, 1]), 2) is feasible
    assert _tournament(pop, _FixedPicks([1, 0]), 2) is feasible
    assert _tournament(pop, _FixedPicks([0, 0]), 2) is infeasible  # never drawn
    better = _ind(2.0, 0.0)
    assert _tournament([feasible, better], _FixedPicks([0, 1]), 2) is better
    closer = _ind(9.0, 0.1)
    assert _tournament([infeasible, closer], _FixedPicks([0, 1]), 2) is closer


def test_operators_respect_unit_box():
    rng = np.random.default_rng(1)
    for _ in range(200):
        x1, x2 = rng.random(3), rng.random(3)
        c1, c2 = sbx_pair(x1, x2, 15.0, rng)
        m = polynomial_mutation(c1, 20.0, 0.5, rng)
        for v in (c1, c2, m):
            assert np.all(v >= 0.0) and np.all(v <= 1.0)


def test_evaluation_count_pop100_gen10():
    problem = analytical_problem()
    report = run_ga(problem, problem.space, GaConfig(pop_size=100, generations=10, seed=0))
    assert report.n_evaluations == 1100  # 100 init + 10 x 100 offspring
    assert 1000 <= report.n_evaluations <= 1100
    assert len(report.best_trace) == 1100


def test_run_is_deterministic_and_genes_bounded():
    problem = analytical_problem()
    config = GaConfig(pop_size=12, generations=4, seed=21)
    a = run_ga(problem, problem.space, config)
    b = run_ga(problem, problem.space, config)
    for ea, eb in zip(a.evaluations, b.evaluations):
        assert np.array_equal(ea.x, eb.x) and ea.f == eb.f
    for e in a.evaluations:
        assert np.all(e.x >= 0.0) and np.all(e.x <= 1.0)


def test_best_trace_monotone_and_incumbent_feasible():
    problem = analytical_problem()
    report = run_ga(problem, problem.space, GaConfig(pop_size=20, generations=5, seed=3))
    values = [v for v in report.best_trace if v is not None]
    assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))
    assert report.x_star is not None
    f, g = problem(report.x_star)
    assert g >= report.threshold and f == report.f_star


def test_elitism_generation_best_never_regresses():
    problem = analytical_problem()
    report = run_ga(problem, problem.space, GaConfig(pop_size=16, generations=6, seed=5))
    # best feasible seen through the end of each generation is non-increasing
    per_generation = []
    best = None
    current_gen = 0
    for e in report.evaluations:
        if e.step_index != current_gen:
            per_generation.append(best)
            current_gen = e.step_index
        if e.g >= report.threshold and (best is None or e.f < best):
            best = e.f
    per_generation.append(best)
    seen = [v for v in per_generation if v is not None]
    assert all(b <= a for a, b in zip(seen, seen[1:]))


def test_failing_problem_returns_partial_report():
    calls = {"n": 0}

    def flaky(x):
        calls["n"] += 1
        if calls["n"] > 15:
            raise RuntimeError("boom")
        return float(x[0]), 1.0

    problem = analytical_problem()
    report = run_ga(flaky, problem.space, GaConfig(pop_size=10, generations=3, seed=0))
    assert not report.complete
    assert report.n_evaluations == 15


def test_config_validation():
    with pytest.raises(ValueError, match="even"):
        GaConfig(pop_size=7)
    with pytest.raises(ValueError, match="crossover_prob"):
        GaConfig(crossover_prob=1.5)
    with pytest.raises(ValueError, match="generations"):
        GaConfig(generations=0)
