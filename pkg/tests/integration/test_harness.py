import math

import pytest
import yaml

from src.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main
from src.harness import (
    RunConfig,
    TABLES,
    format_reproduction,
    get_table,
    load_checkpoint,
    load_run_config,
    parse_override,
    preset_names,
    read_metrics,
    read_predictions,
    read_summary,
    read_sweep,
    reproduce,
    resolve_config,
    run,
    sweep,
)
from src.harness.tables import Check
from src.utils.errors import ConfigError, NumericalFailureError


def test_resolve_layers_defaults_and_overrides(tiny_document):
    """Problem defaults fill what the document leaves out; overrides win."""
    config = resolve_config(tiny_document, ["training.lr=0.01", "model.levels=[1, 2]"], seed=4)
    assert isinstance(config, RunConfig)
    assert config.training.lr == 0.01
    assert config.model.levels == [1, 2]
    assert config.model.degree == 3
    assert config.training.counts.n_data == 64
    assert config.training.weights.lambda_data == 1.0
    assert config.seed == 4


def test_unknown_key_is_named(tiny_document):
    """Typos are rejected with the offending key."""
    with pytest.raises(ConfigError) as info:
        resolve_config(tiny_document, ["training.learning_rate=0.1"])
    assert info.value.key == "training.learning_rate"


def test_invalid_values_are_named(tiny_document):
    """Out-of-range values name their key."""
    with pytest.raises(ConfigError) as info:
        resolve_config(tiny_document, ["model.overlap=0.5"])
    assert info.value.key == "model.overlap"
    with pytest.raises(ConfigError):
        resolve_config(tiny_document, ["problem.name=burgers"])
    with pytest.raises(ConfigError):
        resolve_config(tiny_document, ["training.grid_values=[3, 2]", "training.grid_iterations=[0, 2]"])


def test_grid_override_without_schedule():
    """A fixed-grid preset takes any model.grid; a schedule must start there."""
    config = load_run_config("helmholtz-fixed", ["model.grid=3"])
    assert config.training.grid_values is None
    assert config.schedule().grid_values == (3,)
    assert config.schedule().initial_grid == 3
    with pytest.raises(ConfigError) as info:
        load_run_config("physics1", ["model.grid=3"])
    assert info.value.key == "training.grid_values"


def test_parse_override():
    """Dotted keys nest and values are read as YAML."""
    assert parse_override("model.levels=[1, 4]") == {"model": {"levels": [1, 4]}}
    assert parse_override("problem.params.c=2.0") == {"problem": {"params": {"c": 2.0}}}
    with pytest.raises(ConfigError):
        parse_override("training.lr")


def test_fast_scales_iterations(tiny_document):
    """--fast shrinks iteration counts and grid events."""
    document = dict(tiny_document, training={**tiny_document["training"], "iterations": 400})
    config = resolve_config(
        document, ["training.grid_values=[3, 6]", "training.grid_iterations=[0, 200]"], fast=True
    )
    assert config.fast
    assert config.training.iterations == 100
    assert config.training.grid_iterations == [0, 50]


@pytest.mark.parametrize("name", preset_names())
def test_presets_resolve(name):
    """Every shipped preset is a valid configuration."""
    config = load_run_config(name)
    config.schedule()
    assert config.build_problem().name == config.problem.name


def test_presets_cover_published_columns():
    """One preset per hyperparameter table column."""
    assert set(preset_names()) >= {
        "data1-scaling", "data1-noise", "data2-fixed", "data2-extension", "physics1",
        "helmholtz-fixed", "helmholtz-extension", "helmholtz-narrow",
        "wave-c-sqrt2", "wave-c-2", "ml-helmholtz", "ml-laplacian",
        "data1-L4", "helmholtz-a1=1-a2=4-fbkan1",
    }
    assert load_run_config("helmholtz-fixed", ["problem.params.a1=6", "problem.params.a2=6"]).training.iterations == 30000


@pytest.mark.parametrize(
    "name,base", [("data1-L4", "data1-scaling"), ("helmholtz-a1=1-a2=4-fbkan1", "helmholtz-fixed")]
)
def test_named_column_presets(name, base):
    """Column presets resolve to the runs of the table they come from."""
    config, reference = load_run_config(name), load_run_config(base)
    assert config.model == reference.model
    assert config.training == reference.training
    assert config.problem == reference.problem
    assert config.model.levels == [4]


def test_run_writes_artifacts(tiny_document, tmp_path):
    """A run leaves re-readable tables, a checkpoint and a consistent summary."""
    config = resolve_config(tiny_document, output_dir=str(tmp_path / "run"))
    summary = run(config)
    history = read_metrics(summary.artifacts["metrics"])
    assert len(history) == 6
    assert history[-1]["rel_l2"] == summary.relative_l2
    assert math.isnan(history[0]["rel_l2"])
    predictions = read_predictions(summary.artifacts["predictions"])
    assert list(predictions) == ["x", "prediction", "exact", "error"]
    assert len(predictions["x"]) == 1000
    # two subdomains of [1, 3, 1] with g=3, k=3: 2 * 6 edges * 8 parameters
    assert summary.param_count == 96
    reread = read_summary(tmp_path / "run")
    assert reread.result_hash == summary.result_hash
    assert yaml.safe_load(open(summary.artifacts["config"]))["problem"]["name"] == "data1"
    assert load_checkpoint(summary.artifacts["checkpoint"]).param_count() == 96


def test_runs_are_deterministic(tiny_document, tmp_path):
    """Same config and seed, same results."""
    first = run(resolve_config(tiny_document, output_dir=str(tmp_path / "a")))
    second = run(resolve_config(tiny_document, output_dir=str(tmp_path / "b")))
    assert first.result_hash == second.result_hash
    assert first.config_hash == second.config_hash
    assert first.config_hash != run(resolve_config(tiny_document, seed=1, output_dir=str(tmp_path / "c"))).config_hash


def test_zero_iterations_report_initial_error(tiny_document, tmp_path):
    """Without training the summary holds the initial model's error."""
    summary = run(resolve_config(tiny_document, ["training.iterations=0"], output_dir=str(tmp_path)))
    assert summary.iterations == 0
    assert summary.relative_l2 > 0
    assert read_metrics(summary.artifacts["metrics"]) == []


def test_resume_reproduces_predictions(tiny_document, tmp_path):
    """Resuming a checkpoint for zero iterations predicts bit-identically."""
    first = run(resolve_config(tiny_document, ["training.grid_values=[3, 6]", "training.grid_iterations=[0, 3]"],
                               output_dir=str(tmp_path / "a")))
    resumed = run(resolve_config(
        tiny_document,
        ["training.iterations=0", f"checkpoint={first.artifacts['checkpoint']}"],
        output_dir=str(tmp_path / "b"),
    ))
    assert resumed.final_grid == 6
    assert read_predictions(first.artifacts["predictions"]) == read_predictions(resumed.artifacts["predictions"])
    assert resumed.param_count == first.param_count


def test_resume_after_grid_extensions(tiny_document, tmp_path):
    """Replaying the schedule on an extended checkpoint keeps its finer grid."""
    schedule = ["training.grid_values=[3, 6, 9]", "training.grid_iterations=[0, 2, 4]"]
    first = run(resolve_config(tiny_document, schedule, output_dir=str(tmp_path / "a")))
    assert first.final_grid == 9
    resumed = run(resolve_config(
        tiny_document, [*schedule, f"checkpoint={first.artifacts['checkpoint']}"], output_dir=str(tmp_path / "b")
    ))
    assert resumed.final_grid == 9
    assert resumed.param_count == first.param_count
    assert resumed.grid_extensions == []
    assert math.isfinite(resumed.relative_l2)


def test_physics_run(tmp_path):
    """A short physics-informed run records its loss terms."""
    config = load_run_config(
        "physics1",
        ["training.iterations=3", "model.widths=[1, 2, 1]", "training.counts.n_r=20", "training.eval_every=1"],
        output_dir=str(tmp_path),
    )
    summary = run(config)
    assert summary.loss_parts["loss_r"] > 0
    assert summary.loss_parts["loss_bc"] == 0.0
    assert math.isfinite(summary.relative_l2)


def test_cli_run_and_config_error(tiny_document, tmp_path, capsys):
    """The command line returns 0 on success and 2 on a bad key."""
    path = tmp_path / "tiny.yaml"
    path.write_text(yaml.safe_dump(tiny_document))
    assert main(["run", "--config", str(path), "--out", str(tmp_path / "out"), "--seed", "1"]) == EXIT_OK
    assert '"relative_l2"' in capsys.readouterr().out
    assert main(["run", "--config", str(path), "--set", "model.width=[1, 2]"]) == EXIT_CONFIG
    assert "model.width" in capsys.readouterr().err


def test_cli_plot(tiny_document, tmp_path):
    """Figures are rendered from the tables of a finished run."""
    pytest.importorskip("matplotlib")
    summary = run(resolve_config(tiny_document, output_dir=str(tmp_path)))
    assert main(["plot", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "loss.png").exists() and (tmp_path / "solution.png").exists()
    assert summary.artifacts["metrics"]


def test_published_tables():
    """Tables carry the published rows and their bounds."""
    data2 = get_table("data2")
    assert [row.published for row in data2.rows] == [0.236, 0.0743, 0.081, 0.0227]
    pi2 = get_table("pi2")
    assert len(pi2.rows) == 24
    assert pi2.published["KAN-1 [a1=4,a2=4]"] == 0.5465
    assert {row.key for row in pi2.required_rows()} == {
        "FBKAN-1 L=4 [a1=4,a2=4]", "KAN-1 [a1=4,a2=4]", "FBKAN-1 L=16 [a1=1,a2=4]",
    }
    ml = get_table("ml-pi")
    assert ml.published["MLFBKAN N=4 [a=8]"] == 0.04231
    assert ml.published["FBKAN L=16 [a=8]"] == 0.28707
    assert set(TABLES) == {"data2", "pi2", "ml-pi", "wave", "physics1"}


def test_checks():
    """Bounds compare against constants, other rows or published values."""
    results = {"a": 0.05, "b": 0.2}
    published = {"a": 0.03}
    assert Check("upper", "a", 0.06).evaluate(results, published)
    assert not Check("upper", "a", 0.02).evaluate(results, published)
    assert Check("upper", "a", 0.02).evaluate(results, published, tolerance=3.0)
    assert Check("lower", "b", 0.1).evaluate(results, published)
    assert Check("ratio", "a", 0.5, "b").evaluate(results, published)
    assert Check("factor", "a", 2.0).evaluate(results, published)
    assert not Check("factor", "a", 1.5).evaluate(results, published)


def test_reproduce_reports_failed_rows(tmp_path, monkeypatch):
    """Rows are run per seed and checks read their medians."""
    import src.harness.experiments as experiments

    values = {"KAN-1": [0.30, 0.20, 0.25], "FBKAN-1": [0.07, 0.08, 0.06], "KAN-2": [0.09] * 3, "FBKAN-2": [math.nan] * 3}

    def fake_run_jobs(jobs, workers=1):
        return [
            {"key": j["key"], "seed": j["seed"], "relative_l2": values[j["key"]][j["seed"]], "mean_relative_noise": 0.0}
            for j in jobs
        ]

    monkeypatch.setattr(experiments, "run_jobs", fake_run_jobs)
    report = reproduce("data2", seeds=[0, 1, 2], output_dir=str(tmp_path))
    rows = {row.key: row for row in report.rows}
    assert rows["KAN-1"].obtained == 0.25
    assert rows["FBKAN-1"].ratio == pytest.approx(0.07 / 0.0743)
    assert math.isnan(rows["FBKAN-2"].obtained)
    assert not report.passed
    assert (tmp_path / "data2" / "report.csv").exists()
    assert "FAIL" in format_reproduction(report)


def test_sweep_subdomains(tiny_document, tmp_path):
    """A subdomain sweep runs once per value and writes a table."""
    preset = tmp_path / "tiny.yaml"
    preset.write_text(yaml.safe_dump(tiny_document))
    report = sweep("subdomains", str(preset), [1, 2], output_dir=str(tmp_path / "sweep"))
    assert [p.value for p in report.points] == [1, 2]
    assert all(math.isfinite(p.relative_l2) for p in report.points)
    rows = read_sweep(tmp_path / "sweep" / "tiny-subdomains" / "sweep.csv")
    assert [row["value"] for row in rows] == [1.0, 2.0]


def test_noise_sweep_with_baseline(tiny_document, tmp_path):
    """Noise sweeps report the measured noise and an optional single-KAN baseline."""
    preset = tmp_path / "tiny.yaml"
    preset.write_text(yaml.safe_dump(tiny_document))
    report = sweep("noise", str(preset), [0.0, 0.1], baseline=True, output_dir=str(tmp_path / "sweep"))
    assert report.points[0].mean_relative_noise == 0.0
    assert report.points[1].mean_relative_noise > 0.0
    assert all(p.baseline_relative_l2 is not None for p in report.points)


def test_noise_sweep_at_zero_matches_clean_run(tiny_document, tmp_path):
    """Zero noise reproduces the noise-free run exactly."""
    preset = tmp_path / "tiny.yaml"
    preset.write_text(yaml.safe_dump(tiny_document))
    report = sweep("noise", str(preset), [0.0], output_dir=str(tmp_path / "sweep"))
    clean = run(resolve_config(tiny_document, output_dir=str(tmp_path / "clean")))
    assert report.points[0].relative_l2 == clean.relative_l2
    assert report.passed


def test_cli_sweep_fails_when_a_run_fails(tiny_document, tmp_path, monkeypatch, capsys):
    """A sweep with a failed point exits non-zero and names the point."""
    import src.harness.experiments as experiments

    preset = tmp_path / "tiny.yaml"
    preset.write_text(yaml.safe_dump(tiny_document))

    def failing_run(config):
        raise NumericalFailureError("loss is not finite", term="data")

    monkeypatch.setattr(experiments, "run", failing_run)
    argv = ["sweep", "subdomains", "--preset", str(preset), "--values", "2,4", "--out", str(tmp_path / "sweep")]
    assert main(argv) == EXIT_FAILED
    assert '"model:2.0 seed 0"' in capsys.readouterr().out
