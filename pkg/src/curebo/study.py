"""Batch orchestration: seeded replication studies, summaries, grid oracles.

A study executes one optimizer (or both) against one problem for a number of
replications, seeding replication i with root_seed + i. Artifacts are a CSV
evaluation log per replication, a combined per-step convergence CSV, and a
JSON summary with mean/median/5th/95th percentile of the best-feasible
objective at every step. Outputs depend only on the config contents, so
reruns are byte identical regardless of worker count.

Step-axis convention: for cBO the step index counts acquisition-driven
evaluations after initialization; for the GA it counts raw evaluations,
initialization included.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from curebo.cbo import CboConfig, run_cbo
from curebo.ga import GaConfig, run_ga
from curebo.problems import eval_analytical, problem_by_name
from curebo.problems.blackbox import Problem
from curebo.problems.simulate import KineticParams, MechanicalParams
from curebo.records import PHASE_LEARN, RunReport

_PROBLEMS = ("analytical", "sim2pt", "sim4pt")
_OPTIMIZERS = ("cbo", "ga", "both")
_TOP_KEYS = {
    "problem",
    "optimizer",
    "replications",
    "seed",
    "output_dir",
    "workers",
    "cbo",
    "ga",
    "problem_options",
    "reference_optimum",
    "convergence_tol",
}


class ConfigError(ValueError):
    """Invalid run configuration; message lists every violation found."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class RunConfig:
    """One study: problem, optimizer(s), replication count, seeding, output."""

    problem: str
    optimizer: str
    replications: int
    seed: int
    output_dir: str
    workers: int = 1
    cbo: dict = field(default_factory=dict)
    ga: dict = field(default_factory=dict)
    problem_options: dict = field(default_factory=dict)
    reference_optimum: Optional[float] = None
    convergence_tol: float = 2e-4

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        violations = []
        if not isinstance(data, dict):
            raise ConfigError(["config must be a JSON object"])
        unknown = sorted(set(data) - _TOP_KEYS)
        if unknown:
            violations.append(f"unknown keys: {', '.join(unknown)}")
        problem = data.get("problem")
        if problem not in _PROBLEMS:
            violations.append(f"problem must be one of {_PROBLEMS}")
        optimizer = data.get("optimizer")
        if optimizer not in _OPTIMIZERS:
            violations.append(f"optimizer must be one of {_OPTIMIZERS}")
        reps = data.get("replications")
        if not isinstance(reps, int) or reps < 1:
            violations.append("replications must be an integer >= 1")
        seed = data.get("seed")
        if not isinstance(seed, int):
            violations.append("seed must be an integer")
        out_dir = data.get("output_dir")
        if not isinstance(out_dir, str) or not out_dir:
            violations.append("output_dir must be a nonempty string")
        workers = data.get("workers", 1)
        if not isinstance(workers, int) or workers < 1:
            violations.append("workers must be an integer >= 1")
        for key in ("cbo", "ga", "problem_options"):
            if not isinstance(data.get(key, {}), dict):
                violations.append(f"{key} must be an object")
        ref = data.get("reference_optimum")
        if ref is not None and not isinstance(ref, (int, float)):
            violations.append("reference_optimum must be a number")
        tol = data.get("convergence_tol", 2e-4)
        if not isinstance(tol, (int, float)) or tol <= 0:
            violations.append("convergence_tol must be a positive number")
        if violations:
            raise ConfigError(violations)

        config = cls(
            problem=problem,
            optimizer=optimizer,
            replications=reps,
            seed=seed,
            output_dir=out_dir,
            workers=workers,
            cbo=dict(data.get("cbo", {})),
            ga=dict(data.get("ga", {})),
            problem_options=dict(data.get("problem_options", {})),
            reference_optimum=None if ref is None else float(ref),
            convergence_tol=float(tol),
        )
        # dry-run the nested constructions so their complaints surface now
        try:
            problem_obj = build_problem(config)
            if config.optimizer in ("cbo", "both"):
                _cbo_config(config, problem_obj, config.seed)
            if config.optimizer in ("ga", "both"):
                _ga_config(config, problem_obj, config.seed)
        except (TypeError, ValueError) as exc:
            raise ConfigError(violations + [str(exc)]) from None
        return config

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        with open(path) as handle:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as exc:
                raise ConfigError([f"config is not valid JSON: {exc}"]) from None
        return cls.from_dict(data)


def build_problem(config: RunConfig) -> Problem:
    """Instantiate the configured problem, applying material overrides."""
    options = dict(config.problem_options)
    kinetics = options.pop("kinetics", None)
    mechanical = options.pop("mechanical", None)
    if config.problem in ("sim2pt", "sim4pt"):
        if kinetics:
            options["kin"] = replace(KineticParams(), **kinetics)
        if mechanical:
            options["mech"] = replace(MechanicalParams(), **mechanical)
    elif kinetics or mechanical:
        raise ConfigError(["material overrides only apply to simulator problems"])
    return problem_by_name(config.problem, **options)


def _cbo_config(config: RunConfig, problem: Problem, seed: int) -> CboConfig:
    kwargs = dict(config.cbo)
    use_sieve = kwargs.pop("use_sieve", True)
    kwargs.setdefault("threshold", problem.threshold)
    kwargs["seed"] = seed
    if use_sieve and problem.sieve_raw is not None:
        kwargs.setdefault("sieve_predicate", problem.sieve_raw)
    return CboConfig(**kwargs)


def _ga_config(config: RunConfig, problem: Problem, seed: int) -> GaConfig:
    kwargs = dict(config.ga)
    kwargs.setdefault("threshold", problem.threshold)
    kwargs["seed"] = seed
    return GaConfig(**kwargs)


def percentile(values, p: float) -> float:
    """Order statistic with linear interpolation at rank 1 + p/100 (n-1)."""
    vals = sorted(float(v) for v in values)
    if not vals:
        raise ValueError("percentile of an empty list")
    if not 0.0 <= p <= 100.0:
        raise ValueError("percentile level must lie in [0, 100]")
    rank = 1.0 + (p / 100.0) * (len(vals) - 1)
    low = int(math.floor(rank))
    frac = rank - low
    if frac == 0.0:  # exact order statistic; also avoids inf * 0
        return vals[low - 1]
    high = min(low + 1, len(vals))
    return vals[low - 1] * (1.0 - frac) + vals[high - 1] * frac


def evals_to_reach(report: RunReport, target: float) -> Optional[int]:
    """1-based count of true evaluations until best feasible f <= target."""
    best = None
    for i, e in enumerate(report.evaluations, start=1):
        if e.g >= report.threshold and (best is None or e.f < best):
            best = e.f
        if best is not None and best <= target:
            return i
    return None


@dataclass
class StudySummary:
    """Per-step aggregates of the best-feasible objective over replications."""

    problem: str
    optimizer: str
    replications: int
    step_index: list[int]
    n_feasible: list[int]
    mean: list[Optional[float]]
    median: list[Optional[float]]
    p5: list[Optional[float]]
    p95: list[Optional[float]]
    evaluations_per_replication: list[int]
    final_best: list[Optional[float]]
    reference_optimum: Optional[float] = None
    convergence_tol: Optional[float] = None
    convergence_evals: Optional[list[Optional[int]]] = None
    convergence_median: Optional[float] = None

    def step_row(self, step: int) -> dict:
        i = self.step_index.index(step)
        return {
            "step": step,
            "n_feasible": self.n_feasible[i],
            "mean": self.mean[i],
            "median": self.median[i],
            "p5": self.p5[i],
            "p95": self.p95[i],
        }

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def summarize(config: RunConfig, optimizer: str, reports: list[RunReport]) -> StudySummary:
    """Aggregate best-feasible traces across replications."""
    lengths = {len(r.best_trace) for r in reports}
    if len(lengths) != 1:
        raise ValueError("replication traces have inconsistent lengths")
    n_steps = lengths.pop()
    steps, counts, means, medians, p5s, p95s = [], [], [], [], [], []
    for s in range(n_steps):
        values = [r.best_trace[s] for r in reports if r.best_trace[s] is not None]
        steps.append(s + 1)
        counts.append(len(values))
        if values:
            means.append(float(np.mean(values)))
            medians.append(percentile(values, 50.0))
            p5s.append(percentile(values, 5.0))
            p95s.append(percentile(values, 95.0))
        else:
            means.append(None)
            medians.append(None)
            p5s.append(None)
            p95s.append(None)

    summary = StudySummary(
        problem=config.problem,
        optimizer=optimizer,
        replications=len(reports),
        step_index=steps,
        n_feasible=counts,
        mean=means,
        median=medians,
        p5=p5s,
        p95=p95s,
        evaluations_per_replication=[r.n_evaluations for r in reports],
        final_best=[r.f_star for r in reports],
    )
    if config.reference_optimum is not None:
        target = config.reference_optimum + config.convergence_tol
        conv = [evals_to_reach(r, target) for r in reports]
        summary.reference_optimum = config.reference_optimum
        summary.convergence_tol = config.convergence_tol
        summary.convergence_evals = conv
        as_inf = [float("inf") if c is None else float(c) for c in conv]
        med = percentile(as_inf, 50.0)
        summary.convergence_median = None if math.isinf(med) else med
    return summary


def _fmt(value) -> str:
    if value is None:
        return ""
    return format(float(value), ".17g")


def _write_replication_csv(path: Path, problem: Problem, report: RunReport) -> None:
    import csv

    header = ["eval", "phase", "step", *problem.space.names, "f", "g", "best_feasible", "acq"]
    best = None
    learn_seen = 0
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for i, e in enumerate(report.evaluations, start=1):
            if e.g >= report.threshold and (best is None or e.f < best):
                best = e.f
            acq = None
            if e.phase == PHASE_LEARN and learn_seen < len(report.acq_trace):
                acq = report.acq_trace[learn_seen]
                learn_seen += 1
            raw = problem.space.denormalize(e.x)
            writer.writerow(
                [
                    i,
                    e.phase,
                    e.step_index,
                    *(_fmt(v) for v in raw),
                    _fmt(e.f),
                    _fmt(e.g),
                    _fmt(best),
                    _fmt(acq),
                ]
            )


def _write_convergence_csv(path: Path, summary: StudySummary) -> None:
    import csv

    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["step", "n_feasible", "mean", "median", "p5", "p95"])
        for i, step in enumerate(summary.step_index):
            writer.writerow(
                [
                    step,
                    summary.n_feasible[i],
                    _fmt(summary.mean[i]),
                    _fmt(summary.median[i]),
                    _fmt(summary.p5[i]),
                    _fmt(summary.p95[i]),
                ]
            )


def _replicate(args) -> tuple[int, RunReport]:
    config_data, optimizer, index = args
    config = RunConfig.from_dict(config_data)
    problem = build_problem(config)
    seed = config.seed + index
    if optimizer == "cbo":
        return index, run_cbo(problem, problem.space, _cbo_config(config, problem, seed))
    return index, run_ga(problem, problem.space, _ga_config(config, problem, seed))


def run_study(config: RunConfig) -> dict[str, StudySummary]:
    """Execute all replications, write artifacts, and return the summaries.

    Replication i runs with seed root_seed + i; results are merged in
    replication order, so the artifacts do not depend on worker count.
    """
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    probe = out_dir / ".write_probe"
    try:
        probe.write_text("")
    finally:
        if probe.exists():
            probe.unlink()

    problem = build_problem(config)
    optimizers = ["cbo", "ga"] if config.optimizer == "both" else [config.optimizer]
    config_data = asdict(config)

    summaries: dict[str, StudySummary] = {}
    for optimizer in optimizers:
        jobs = [(config_data, optimizer, i) for i in range(config.replications)]
        if config.workers > 1 and config.replications > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                results = list(pool.map(_replicate, jobs))
        else:
            results = [_replicate(job) for job in jobs]
        results.sort(key=lambda pair: pair[0])
        reports = [r for _, r in results]

        for i, report in enumerate(reports):
            _write_replication_csv(out_dir / f"{optimizer}_rep{i:03d}.csv", problem, report)
        summary = summarize(config, optimizer, reports)
        _write_convergence_csv(out_dir / f"{optimizer}_convergence.csv", summary)
        (out_dir / f"{optimizer}_summary.json").write_text(summary.to_json())
        summaries[optimizer] = summary
    return summaries


@dataclass(frozen=True)
class OracleResult:
    f_min: Optional[float]
    x_raw: Optional[np.ndarray]
    g_at_min: Optional[float]
    n_feasible: int
    grid: int
    runtime: float


def grid_oracle(problem: Problem, grid: int) -> OracleResult:
    """Brute-force feasible minimum over a full-factorial normalized grid."""
    if grid < 2:
        raise ValueError("grid needs at least 2 points per dimension")
    t0 = time.perf_counter()
    d = problem.space.dims
    axis = np.linspace(0.0, 1.0, grid)
    if problem.name == "analytical":
        tt, TT = np.meshgrid(axis, axis, indexing="ij")
        u, doc = eval_analytical(tt, TT)
        feasible = doc >= problem.threshold
        n_feasible = int(feasible.sum())
        if n_feasible == 0:
            return OracleResult(None, None, None, 0, grid, time.perf_counter() - t0)
        masked = np.where(feasible, u, np.inf)
        flat = int(np.argmin(masked))
        i, j = np.unravel_index(flat, masked.shape)
        x_norm = np.array([axis[i], axis[j]])
        return OracleResult(
            f_min=float(u[i, j]),
            x_raw=problem.space.denormalize(x_norm),
            g_at_min=float(doc[i, j]),
            n_feasible=n_feasible,
            grid=grid,
            runtime=time.perf_counter() - t0,
        )

    best_f, best_x, best_g, n_feasible = None, None, None, 0
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    for x in points:
        f, g = problem(x)
        if g >= problem.threshold:
            n_feasible += 1
            if best_f is None or f < best_f:
                best_f, best_x, best_g = f, x, g
    return OracleResult(
        f_min=best_f,
        x_raw=None if best_x is None else problem.space.denormalize(best_x),
        g_at_min=best_g,
        n_feasible=n_feasible,
        grid=grid,
        runtime=time.perf_counter() - t0,
    )
