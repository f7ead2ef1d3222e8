"""Shared evaluation records and run reports for the cBO and GA drivers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from curebo.acquisition import Incumbent

PHASE_INIT = "init"
PHASE_LEARN = "learn"


@dataclass(frozen=True)
class Evaluation:
    """One true black-box evaluation: normalized input, objective, constraint."""

    x: np.ndarray
    f: float
    g: float
    step_index: int
    phase: str


@dataclass
class RunReport:
    """Per-evaluation log plus the best-feasible-so-far trace of one run.

    best_trace follows the optimizer's step axis: learn steps for cBO
    (one entry per acquisition-driven evaluation), raw evaluations for the
    GA (one entry per evaluation, initialization included). Entries are None
    until the first feasible point has been seen.
    """

    evaluations: list[Evaluation]
    best_trace: list[Optional[float]]
    x_star: Optional[np.ndarray]
    f_star: Optional[float]
    g_star: Optional[float]
    n_init: int
    n_steps: int
    threshold: float
    wall_time: float
    complete: bool = True
    events: list[str] = field(default_factory=list)
    acq_trace: list[float] = field(default_factory=list)

    @property
    def n_evaluations(self) -> int:
        return len(self.evaluations)


def best_feasible(evaluations, threshold: float) -> Incumbent:
    """Minimum-f evaluation among those with g >= threshold; ties to earliest."""
    best = None
    for e in evaluations:
        if e.g >= threshold and (best is None or e.f < best.f):
            best = e
    if best is None:
        return Incumbent()
    return Incumbent(y_min=best.f, x_best=best.x)


def running_best_trace(evaluations, threshold: float) -> list[Optional[float]]:
    """Best feasible f after each successive evaluation."""
    trace: list[Optional[float]] = []
    current: Optional[float] = None
    for e in evaluations:
        if e.g >= threshold and (current is None or e.f < current):
            current = e.f
        trace.append(current)
    return trace
