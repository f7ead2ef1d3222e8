"""Black-box problems: the analytical validation pair and the cure simulator."""

from curebo.problems.analytical import (
    DOC_COEFFS,
    DOC_THRESHOLD,
    U_COEFFS,
    AnalyticalPidProblem,
    eval_analytical,
)
from curebo.problems.blackbox import (
    LARGE_OBJECTIVE,
    Problem,
    analytical_problem,
    four_point_problem,
    problem_by_name,
    two_point_problem,
)
from curebo.problems.cycle import (
    CureCycle,
    InfeasibleCycleError,
    baseline_cycle,
    build_cycle,
    four_point_cycle,
    two_point_cycle,
)
from curebo.problems.simulate import (
    CureTrace,
    IntegrationError,
    KineticParams,
    MechanicalParams,
    chile_modulus,
    cure_rate,
    glass_transition_c,
    shrinkage_strain,
    simulate_cure,
    viscosity,
    volumetric_shrinkage,
)

__all__ = [
    "AnalyticalPidProblem",
    "CureCycle",
    "CureTrace",
    "DOC_COEFFS",
    "DOC_THRESHOLD",
    "IntegrationError",
    "InfeasibleCycleError",
    "KineticParams",
    "LARGE_OBJECTIVE",
    "MechanicalParams",
    "Problem",
    "U_COEFFS",
    "analytical_problem",
    "baseline_cycle",
    "build_cycle",
    "chile_modulus",
    "cure_rate",
    "eval_analytical",
    "four_point_cycle",
    "four_point_problem",
    "glass_transition_c",
    "problem_by_name",
    "shrinkage_strain",
    "simulate_cure",
    "two_point_cycle",
    "two_point_problem",
    "viscosity",
    "volumetric_shrinkage",
]
