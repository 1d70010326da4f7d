"""Single training runs from a resolved configuration."""

import logging
import time
from pathlib import Path
from typing import Any, Dict, List

import torch
from pydantic import BaseModel, Field

from src.config import FBKAN_NUM_THREADS, FBKAN_OUTPUT_DIR
from src.decomposition import FbkanModel, build_fbkan, multilevel_decomposition
from src.problems import ProblemSpec
from src.training import evaluate, relative_l2, train
from src.utils.decorators import log_io
from src.utils.errors import InvalidArgumentError, TrainingAborted
from src.utils.json_utils import dump_json, hash_files, load_json, stable_hash
from .artifacts import (
    CHECKPOINT_FILE,
    CONFIG_FILE,
    METRICS_FILE,
    PREDICTIONS_FILE,
    SNAPSHOT_FILE,
    SUMMARY_FILE,
    load_checkpoint,
    save_checkpoint,
    write_metrics,
    write_predictions,
)
from .config import RunConfig, config_to_yaml

logger = logging.getLogger(__name__)

SOURCE_ROOT = Path(__file__).resolve().parent.parent


class RunSummary(BaseModel):
    name: str
    problem: str
    relative_l2: float
    loss_parts: Dict[str, float] = Field(default_factory=dict)
    param_count: int
    iterations: int
    final_grid: int
    mean_relative_noise: float = 0.0
    wall_time_s: float
    grid_extensions: List[Dict[str, float]] = Field(default_factory=list)
    config: Dict[str, Any]
    artifacts: Dict[str, str]
    config_hash: str
    code_hash: str
    result_hash: str


def code_hash() -> str:
    return hash_files(SOURCE_ROOT.rglob("*.py"))


def build_model(config: RunConfig, problem: ProblemSpec) -> FbkanModel:
    """Fresh model for ``config``, or the one stored at ``config.checkpoint``."""
    if config.checkpoint:
        model = load_checkpoint(config.checkpoint)
        if list(model.widths) != list(config.model.widths) or model.input_dim != problem.dim:
            raise InvalidArgumentError(
                f"checkpoint {config.checkpoint} has widths {list(model.widths)}, config asks for {config.model.widths}"
            )
        logger.info(f"resuming from {config.checkpoint} (g={model.intervals}, {model.param_count()} parameters)")
        return model
    decomposition = multilevel_decomposition(problem.domain.extent, config.model.levels, config.model.overlap)
    return build_fbkan(
        decomposition,
        config.model.widths,
        config.model.grid,
        config.model.degree,
        seed=config.seed,
        hidden_range=tuple(config.model.hidden_range),
        bounds_samples=config.model.bounds_samples,
    )


def run_directory(config: RunConfig) -> Path:
    return Path(config.output_dir or Path(FBKAN_OUTPUT_DIR) / config.name)


@log_io
def run(config: RunConfig) -> RunSummary:
    """Train one model and write its metrics, predictions, checkpoint and summary.

    Raises:
        NumericalFailureError: If the problem's exact solution fails its own residual.
        TrainingAborted: After writing the partial metrics and a snapshot checkpoint.
    """
    if FBKAN_NUM_THREADS:
        torch.set_num_threads(FBKAN_NUM_THREADS)
    out = run_directory(config)
    out.mkdir(parents=True, exist_ok=True)
    (out / CONFIG_FILE).write_text(config_to_yaml(config), encoding="utf-8")

    problem = config.build_problem()
    problem.check_consistency()
    model = build_model(config, problem)

    start = time.perf_counter()
    history: List[Dict[str, Any]] = []
    try:
        result = train(
            model,
            problem,
            config.schedule(),
            config.weights(),
            config.counts(),
            seed=config.seed,
            noise_level=config.training.noise_level,
            callbacks=[lambda row, _: history.append(row)],
        )
    except TrainingAborted as e:
        write_metrics(out / METRICS_FILE, history)
        if e.snapshot is not None:
            dump_json(e.snapshot, out / SNAPSHOT_FILE)
        logger.error(f"run {config.name} aborted; snapshot written to {out / SNAPSHOT_FILE}")
        raise
    wall_time = time.perf_counter() - start

    points = problem.test_points()
    prediction = evaluate(model, points)
    exact = problem.exact(points)
    final_row = result.final_row
    error = final_row["rel_l2"] if final_row else relative_l2(prediction, exact)

    artifacts = {
        "metrics": str(write_metrics(out / METRICS_FILE, result.history)),
        "predictions": str(write_predictions(out / PREDICTIONS_FILE, problem.coordinates, points, prediction, exact)),
        "checkpoint": str(save_checkpoint(out / CHECKPOINT_FILE, model)),
        "config": str(out / CONFIG_FILE),
    }
    config_echo = config.model_dump(mode="json")
    summary = RunSummary(
        name=config.name,
        problem=problem.name,
        relative_l2=error,
        loss_parts={k: final_row[k] for k in final_row if k.startswith("loss_")} if final_row else {},
        param_count=model.param_count(),
        iterations=len(result.history),
        final_grid=model.intervals,
        mean_relative_noise=result.samples.mean_relative_noise,
        wall_time_s=wall_time,
        grid_extensions=result.extensions,
        config=config_echo,
        artifacts={**artifacts, "summary": str(out / SUMMARY_FILE)},
        config_hash=stable_hash(config.model_dump(mode="json", exclude={"output_dir"})),
        code_hash=code_hash(),
        result_hash=stable_hash({"history": result.history, "prediction": prediction}),
    )
    dump_json(summary.model_dump(), out / SUMMARY_FILE)
    logger.info(f"run {config.name}: relative l2 {error:.4e}, {summary.param_count} parameters, {wall_time:.1f}s")
    return summary


def read_summary(path) -> RunSummary:
    path = Path(path)
    return RunSummary.model_validate(load_json(path / SUMMARY_FILE if path.is_dir() else path))
