"""Adam training loop with scheduled grid extension."""

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Callable, Dict, List, Optional, Sequence

import torch

from src.decomposition import FbkanModel, model_to_document
from src.diffengine import loss_gradient, scalar_output
from src.utils.errors import NumericalFailureError, TrainingAborted
from .loss import LossResult, compute_loss, relative_l2
from .optimizer import adam_step
from .sampling import SampleSet, build_samples, resample_residual
from .types import AdamState, LossWeights, SampleCounts, TrainSchedule

if TYPE_CHECKING:
    from src.problems.types import ProblemSpec

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ("iteration", "lr", "g", "loss_total", "loss_ic", "loss_bc", "loss_r", "loss_data", "rel_l2")

Callback = Callable[[Dict[str, Any], FbkanModel], None]


@dataclass
class TrainResult:
    model: FbkanModel
    history: List[Dict[str, Any]]
    samples: SampleSet
    final_lr: float
    extensions: List[Dict[str, float]] = field(default_factory=list)

    @property
    def final_row(self) -> Optional[Dict[str, Any]]:
        return self.history[-1] if self.history else None


def evaluate(model: FbkanModel, points: torch.Tensor) -> torch.Tensor:
    with torch.no_grad():
        return scalar_output(model(points))


def train(
    model: FbkanModel,
    problem: "ProblemSpec",
    schedule: TrainSchedule,
    weights: LossWeights,
    counts: SampleCounts,
    seed: int = 0,
    noise_level: float = 0.0,
    callbacks: Sequence[Callback] = (),
    samples: Optional[SampleSet] = None,
) -> TrainResult:
    """Train ``model`` in place and return its history.

    Row ``i`` holds the loss evaluated before update ``i`` and, on evaluation
    iterations, the test-grid relative error after it. At each grid event the
    grids are refined, the learning rate is scaled and the Adam moments restart
    from zero. A resumed model keeps grids already finer than the event asks for.

    Raises:
        TrainingAborted: If a loss term or the gradient stops being finite.
    """
    test_points = problem.test_points()
    truth = problem.exact(test_points)
    if samples is None:
        samples = build_samples(problem, counts, seed, noise_level)

    lr = schedule.lr_initial
    state = AdamState.zeros(model.param_count())
    events = schedule.extension_events()
    history: List[Dict[str, Any]] = []
    extensions: List[Dict[str, float]] = []
    last = schedule.iterations - 1

    logger.info(
        f"training {problem.name}: {schedule.iterations} iterations, {model.param_count()} parameters, "
        f"levels {model.decomposition.counts}"
    )
    for it in range(schedule.iterations):
        if it in events:
            new_g = events[it]
            # a resumed model may already be past this event
            if new_g > model.intervals:
                before = evaluate(model, test_points)
                model.extend_grid(new_g)
                shift = float((evaluate(model, test_points) - before).abs().max())
                extensions.append({"iteration": it, "g": new_g, "max_output_change": shift})
                logger.debug(f"grid extension at {it}: max output change {shift:.3e}")
            elif new_g < model.intervals:
                logger.info(f"keeping g={model.intervals} at iteration {it}, schedule asks for g={new_g}")
            lr *= schedule.lr_scale
            state = AdamState.zeros(model.param_count())
        if schedule.resample_residual_each_iter and it > 0:
            samples = resample_residual(samples, problem, counts.n_r, seed, it)

        losses: Dict[str, LossResult] = {}

        def evaluator(m: FbkanModel) -> LossResult:
            losses["current"] = compute_loss(m, samples, weights, problem)
            return losses["current"]

        try:
            grad = loss_gradient(model, evaluator)
            params, state = adam_step(state, model.flat_parameters(), grad, lr)
        except NumericalFailureError as e:
            logger.error(f"numerical failure at iteration {it}: {e}")
            raise TrainingAborted(
                it, e, last_row=history[-1] if history else None, snapshot=model_to_document(model)
            ) from e
        model.load_flat_parameters(params)

        parts = losses["current"].as_floats()
        row: Dict[str, Any] = {
            "iteration": it,
            "lr": lr,
            "g": model.intervals,
            "loss_total": parts["total"],
            "loss_ic": parts["ic"],
            "loss_bc": parts["bc"],
            "loss_r": parts["r"],
            "loss_data": parts["data"],
            "rel_l2": math.nan,
        }
        if (it + 1) % schedule.eval_every == 0 or it == last:
            row["rel_l2"] = relative_l2(evaluate(model, test_points), truth)
            logger.info(f"iteration {it}: loss {row['loss_total']:.4e}, relative l2 {row['rel_l2']:.4e}")
        history.append(row)
        for callback in callbacks:
            callback(dict(row), model)

    return TrainResult(model=model, history=history, samples=samples, final_lr=lr, extensions=extensions)
