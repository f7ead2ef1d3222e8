"""Constrained Bayesian optimization loop.

Each run spends its budget as exactly n_init space-filling evaluations
followed by n_steps acquisition-driven evaluations. Every learn step refits
both surrogates on all data so far, scores a fresh Latin hypercube candidate
pool by expected constrained improvement, and evaluates the true functions at
the argmax. With no feasible incumbent the acquisition degrades to the
probability of feasibility alone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from curebo.acquisition import ei_values, pf_values
from curebo.gp import FitConfig, fit_gp, predict_batch
from curebo.records import (
    PHASE_INIT,
    PHASE_LEARN,
    Evaluation,
    RunReport,
    best_feasible,
)
from curebo.space import DesignSpace, drop_near_duplicates, lhs_sample, sieve


@dataclass(frozen=True)
class CboConfig:
    """Budget, pool, threshold and seeding for one cBO run.

    sieve_predicate, when set, is a pure deterministic test on raw
    coordinates applied to every candidate pool before scoring. fresh_pool
    controls whether the pool is regenerated each step (default) or drawn
    once and reused.
    """

    n_init: int = 10
    n_steps: int = 30
    pool_size: int = 10_000
    threshold: float = 0.995
    seed: int = 0
    fresh_pool: bool = True
    duplicate_tol: float = 1e-9
    sieve_predicate: Optional[Callable[[np.ndarray], bool]] = None
    fit: FitConfig = field(default_factory=FitConfig)

    def __post_init__(self):
        problems = []
        if self.n_init < 2:
            problems.append("n_init must be at least 2")
        if self.n_steps < 1:
            problems.append("n_steps must be at least 1")
        if self.pool_size < 1:
            problems.append("pool_size must be at least 1")
        if problems:
            raise ValueError("; ".join(problems))


def run_cbo(problem, space: DesignSpace, config: CboConfig) -> RunReport:
    """Run the constrained BO loop against a black box.

    Parameters
    ----------
    problem : callable mapping a normalized point (d,) to (f, g).
    space : DesignSpace used for pool generation and sieve denormalization.
    config : CboConfig.

    The report is bitwise reproducible for identical inputs. A failing
    problem evaluation aborts the run and returns the partial report with
    complete=False.
    """
    t0 = time.perf_counter()
    root = np.random.SeedSequence(config.seed)
    init_ss, *pool_seeds = root.spawn(1 + config.n_steps)

    evaluations: list[Evaluation] = []
    events: list[str] = []
    best_trace: list[Optional[float]] = []
    acq_trace: list[float] = []
    complete = True

    def finish() -> RunReport:
        inc = best_feasible(evaluations, config.threshold)
        return RunReport(
            evaluations=evaluations,
            best_trace=best_trace,
            x_star=inc.x_best,
            f_star=inc.y_min,
            g_star=None if not inc.found else _g_at(evaluations, inc),
            n_init=config.n_init,
            n_steps=config.n_steps,
            threshold=config.threshold,
            wall_time=time.perf_counter() - t0,
            complete=complete,
            events=events,
            acq_trace=acq_trace,
        )

    for x in lhs_sample(space, config.n_init, init_ss).points:
        try:
            f, g = problem(x)
        except Exception as exc:  # noqa: BLE001 - report partial run
            events.append(f"evaluation failed during init: {exc}")
            complete = False
            return finish()
        evaluations.append(Evaluation(x=x, f=float(f), g=float(g), step_index=0, phase=PHASE_INIT))

    fixed_pool = None
    for step in range(1, config.n_steps + 1):
        train_x = np.array([e.x for e in evaluations])
        y_f = np.array([e.f for e in evaluations])
        y_g = np.array([e.g for e in evaluations])
        model_f = fit_gp(train_x, y_f, config.fit)
        model_g = fit_gp(train_x, y_g, config.fit)

        if config.fresh_pool or fixed_pool is None:
            pool = lhs_sample(space, config.pool_size, pool_seeds[step - 1])
            if not config.fresh_pool:
                fixed_pool = pool
        else:
            pool = fixed_pool

        pf_only = False
        if config.sieve_predicate is not None:
            sieved = sieve(pool, config.sieve_predicate, space)
            if len(sieved) == 0:
                events.append(f"step {step}: sieve emptied the pool, scoring unsieved pool by PF only")
                pf_only = True
            else:
                pool = sieved

        guarded = drop_near_duplicates(pool, train_x, config.duplicate_tol)
        if len(guarded) == 0:
            events.append(f"step {step}: duplicate guard emptied the pool, keeping it as is")
        else:
            pool = guarded

        mean_g, var_g = predict_batch(model_g, pool.points)
        pf = pf_values(mean_g, var_g, config.threshold)
        incumbent = best_feasible(evaluations, config.threshold)
        if pf_only or not incumbent.found:
            scores = pf
        else:
            mean_f, var_f = predict_batch(model_f, pool.points)
            scores = ei_values(mean_f, var_f, incumbent.y_min) * pf

        pick = int(np.argmax(scores))  # first maximum on ties
        x_next = pool.points[pick]
        try:
            f, g = problem(x_next)
        except Exception as exc:  # noqa: BLE001
            events.append(f"evaluation failed at step {step}: {exc}")
            complete = False
            return finish()
        evaluations.append(
            Evaluation(x=x_next, f=float(f), g=float(g), step_index=step, phase=PHASE_LEARN)
        )
        acq_trace.append(float(scores[pick]))
        inc = best_feasible(evaluations, config.threshold)
        best_trace.append(inc.y_min)

    return finish()


def _g_at(evaluations, incumbent) -> Optional[float]:
    for e in evaluations:
        if e.x is incumbent.x_best:
            return e.g
    return None
