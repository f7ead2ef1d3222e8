"""Black-box problem suite: each problem maps normalized design points to an
(objective, degree-of-cure) pair over its own raw-unit design space."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from curebo.problems.analytical import DOC_THRESHOLD, AnalyticalPidProblem
from curebo.problems.cycle import (
    START_TEMP_C,
    InfeasibleCycleError,
    four_point_cycle,
    two_point_cycle,
)
from curebo.problems.simulate import KineticParams, MechanicalParams, simulate_cure
from curebo.space import DesignSpace

# Sentinel returned for unassemblable cycles so optimizers treat the point as
# dominated instead of crashing.
LARGE_OBJECTIVE = 1e30


@dataclass(frozen=True)
class Problem:
    """Named black box with its design space and feasibility threshold."""

    name: str
    space: DesignSpace
    threshold: float
    raw_fn: Callable[[np.ndarray], tuple]
    sieve_raw: Optional[Callable[[np.ndarray], bool]] = None

    def evaluate_raw(self, raw) -> tuple:
        try:
            f, g = self.raw_fn(np.asarray(raw, dtype=float))
        except InfeasibleCycleError:
            return LARGE_OBJECTIVE, 0.0
        return float(f), float(g)

    def __call__(self, x) -> tuple:
        """Evaluate at a normalized design point."""
        return self.evaluate_raw(self.space.denormalize(np.asarray(x, dtype=float)))


def analytical_problem(threshold: float = DOC_THRESHOLD) -> Problem:
    """Closed-form validation problem on the normalized unit square."""
    surfaces = AnalyticalPidProblem()

    def fn(raw):
        u, doc = surfaces.eval(raw[0], raw[1])
        return float(u), float(doc)

    return Problem(
        name="analytical",
        space=DesignSpace(lower=[0.0, 0.0], upper=[1.0, 1.0], names=("t", "T")),
        threshold=threshold,
        raw_fn=fn,
    )


def two_point_problem(
    t1_min: float = 1.0,
    threshold: float = 0.995,
    dt: float = 0.1,
    kin: KineticParams = KineticParams(),
    mech: MechanicalParams = MechanicalParams(),
    start_temp: float = START_TEMP_C,
) -> Problem:
    """Simulator problem over one heating control point A = (t1, T1).

    t1_min selects the case family (1 min or 10 min in the shipped configs).
    """
    def fn(raw):
        trace = simulate_cure(two_point_cycle(raw[0], raw[1], start_temp), kin, mech, dt)
        return trace.u_proxy, trace.final_doc

    return Problem(
        name="sim2pt",
        space=DesignSpace(lower=[t1_min, 125.0], upper=[110.0, 180.0], names=("t1", "T1")),
        threshold=threshold,
        raw_fn=fn,
    )


def four_point_problem(
    threshold: float = 0.96,
    require_rising_second_ramp: bool = False,
    dt: float = 0.1,
    kin: KineticParams = KineticParams(),
    mech: MechanicalParams = MechanicalParams(),
    start_temp: float = START_TEMP_C,
) -> Problem:
    """Simulator problem over two control points A = (t1, T1), B = (t2, T2).

    Candidate cycles are sieved so the first heating segment is steeper than
    the second; require_rising_second_ramp additionally demands a positive
    second slope.
    """
    def fn(raw):
        trace = simulate_cure(
            four_point_cycle(raw[0], raw[1], raw[2], raw[3], start_temp), kin, mech, dt
        )
        return trace.u_proxy, trace.final_doc

    def slopes_ok(raw) -> bool:
        s1 = (raw[1] - start_temp) / raw[0]
        s2 = (raw[3] - raw[1]) / (raw[2] - raw[0])
        if require_rising_second_ramp and s2 <= 0.0:
            return False
        return s1 > s2

    return Problem(
        name="sim4pt",
        space=DesignSpace(
            lower=[10.0, 125.0, 120.0, 150.0],
            upper=[110.0, 180.0, 200.0, 180.0],
            names=("t1", "T1", "t2", "T2"),
        ),
        threshold=threshold,
        raw_fn=fn,
        sieve_raw=slopes_ok,
    )


_FACTORIES = {
    "analytical": analytical_problem,
    "sim2pt": two_point_problem,
    "sim4pt": four_point_problem,
}


def problem_by_name(name: str, **options) -> Problem:
    """Instantiate a problem from its config selector name."""
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(_FACTORIES)}") from None
    return factory(**options)
