import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from curebo.cli import main
from curebo.study import (
    ConfigError,
    RunConfig,
    build_problem,
    evals_to_reach,
    grid_oracle,
    percentile,
    run_study,
)


def small_config(tmp_path, **overrides):
    data = {
        "problem": "analytical",
        "optimizer": "cbo",
        "replications": 3,
        "seed": 42,
        "output_dir": str(tmp_path / "out"),
        "workers": 1,
        "cbo": {"n_init": 5, "n_steps": 4, "pool_size": 200},
    }
    data.update(overrides)
    return data


def test_percentile_examples():
    assert percentile(range(1, 101), 50.0) == pytest.approx(50.5)
    assert percentile([7.25], 0.0) == 7.25
    assert percentile([7.25], 95.0) == 7.25
    assert percentile([10, 20, 30, 40], 5.0) == pytest.approx(11.5)  # rank 1.15
    assert percentile([3, 1, 2], 50.0) == 2.0  # order independent
    with pytest.raises(ValueError):
        percentile([], 50.0)
    with pytest.raises(ValueError):
        percentile([1.0], 120.0)


def test_config_lists_every_violation():
    with pytest.raises(ConfigError) as err:
        RunConfig.from_dict({"problem": "bad", "optimizer": "bad", "replications": 0})
    message = str(err.value)
    for fragment in ("problem", "optimizer", "replications", "seed", "output_dir"):
        assert fragment in message


def test_config_rejects_unknown_keys_and_nested_errors(tmp_path):
    with pytest.raises(ConfigError, match="unknown keys"):
        RunConfig.from_dict(small_config(tmp_path, extra_knob=1))
    with pytest.raises(ConfigError, match="n_init"):
        RunConfig.from_dict(small_config(tmp_path, cbo={"n_init": 1}))
    with pytest.raises(ConfigError, match="t1_min"):
        RunConfig.from_dict(small_config(tmp_path, problem_options={"t1_min": "x"}))


def test_single_replication_percentiles_collapse(tmp_path):
    config = RunConfig.from_dict(small_config(tmp_path, replications=1))
    summary = run_study(config)["cbo"]
    for i in range(len(summary.step_index)):
        if summary.n_feasible[i]:
            assert summary.p5[i] == summary.median[i] == summary.p95[i]


def test_summary_percentiles_ordered_and_artifacts_exist(tmp_path):
    config = RunConfig.from_dict(small_config(tmp_path))
    summary = run_study(config)["cbo"]
    out = Path(config.output_dir)
    assert (out / "cbo_summary.json").exists()
    assert (out / "cbo_convergence.csv").exists()
    csvs = sorted(out.glob("cbo_rep*.csv"))
    assert len(csvs) == 3
    header = csvs[0].read_text().splitlines()[0]
    assert header == "eval,phase,step,t,T,f,g,best_feasible,acq"
    # acquisition values recorded for every learn-phase row
    for line in csvs[0].read_text().splitlines()[1:]:
        cells = line.split(",")
        assert (cells[1] == "learn") == (cells[-1] != "")
    for i in range(len(summary.step_index)):
        if summary.n_feasible[i]:
            assert summary.p5[i] <= summary.median[i] <= summary.p95[i]


def test_rerun_is_byte_identical(tmp_path):
    config = RunConfig.from_dict(small_config(tmp_path))
    run_study(config)
    out = Path(config.output_dir)
    first = {p.name: p.read_bytes() for p in out.iterdir()}
    run_study(config)
    second = {p.name: p.read_bytes() for p in out.iterdir()}
    assert first == second


def test_worker_count_does_not_change_artifacts(tmp_path):
    serial = RunConfig.from_dict(small_config(tmp_path, output_dir=str(tmp_path / "serial")))
    parallel = RunConfig.from_dict(
        small_config(tmp_path, output_dir=str(tmp_path / "parallel"), workers=2)
    )
    run_study(serial)
    run_study(parallel)
    for path in sorted(Path(serial.output_dir).iterdir()):
        twin = Path(parallel.output_dir) / path.name
        assert twin.read_bytes() == path.read_bytes(), path.name


def test_both_optimizers_and_convergence_tracking(tmp_path):
    config = RunConfig.from_dict(
        small_config(
            tmp_path,
            optimizer="both",
            ga={"pop_size": 10, "generations": 2},
            reference_optimum=1.8570136,
            convergence_tol=0.05,
        )
    )
    summaries = run_study(config)
    assert set(summaries) == {"cbo", "ga"}
    for summary in summaries.values():
        assert summary.convergence_evals is not None
        assert len(summary.convergence_evals) == 3
    assert summaries["ga"].evaluations_per_replication == [30, 30, 30]


def test_unwritable_output_fails_before_compute(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("file, not a directory")
    config_data = small_config(tmp_path, output_dir=str(blocker / "out"))
    config = RunConfig.from_dict(config_data)
    with pytest.raises(OSError):
        run_study(config)


def test_evals_to_reach():
    from curebo.records import Evaluation, RunReport

    evals = [
        Evaluation(x=np.zeros(1), f=2.0, g=1.0, step_index=0, phase="init"),
        Evaluation(x=np.zeros(1), f=1.0, g=0.0, step_index=1, phase="learn"),
        Evaluation(x=np.zeros(1), f=1.2, g=1.0, step_index=2, phase="learn"),
    ]
    report = RunReport(
        evaluations=evals, best_trace=[], x_star=None, f_star=None, g_star=None,
        n_init=1, n_steps=2, threshold=0.5, wall_time=0.0,
    )
    assert evals_to_reach(report, 2.5) == 1
    assert evals_to_reach(report, 1.3) == 3  # the infeasible f=1.0 does not count
    assert evals_to_reach(report, 0.5) is None


def test_generic_grid_oracle_agrees_with_fast_path():
    from dataclasses import replace

    problem = build_problem(RunConfig.from_dict(small_config(Path("."))))
    fast = grid_oracle(problem, 41)
    generic = grid_oracle(replace(problem, name="generic"), 41)
    assert fast.f_min == pytest.approx(generic.f_min, rel=0.0, abs=0.0)
    assert np.allclose(fast.x_raw, generic.x_raw)
    assert fast.n_feasible == generic.n_feasible


def test_cli_oracle_and_error_codes(tmp_path):
    runner = CliRunner()
    ok = runner.invoke(main, ["oracle", "analytical", "--grid", "101"])
    assert ok.exit_code == 0
    assert "feasible minimum" in ok.output

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"problem": "unknown"}))
    res = runner.invoke(main, ["run", str(bad)])
    assert res.exit_code == 2

    res = runner.invoke(main, ["trace", str(tmp_path / "missing.json")])
    assert res.exit_code == 3

    not_json = tmp_path / "syntax.json"
    not_json.write_text("{")
    res = runner.invoke(main, ["run", str(not_json)])
    assert res.exit_code == 2


def test_cli_trace_writes_csv(tmp_path):
    runner = CliRunner()
    cfg = tmp_path / "cycle.json"
    cfg.write_text(json.dumps({"variant": "two-point", "params": {"t1": 60, "T1": 140}, "dt": 0.5}))
    out = tmp_path / "trace.csv"
    res = runner.invoke(main, ["trace", str(cfg), "--out", str(out)])
    assert res.exit_code == 0
    assert out.exists()
    assert out.read_text().startswith("time_min,T_C,alpha")


def test_cli_run_smoke(tmp_path):
    runner = CliRunner()
    cfg = tmp_path / "study.json"
    cfg.write_text(json.dumps(small_config(tmp_path)))
    res = runner.invoke(main, ["run", str(cfg)])
    assert res.exit_code == 0
    assert "median best-feasible" in res.output
