"""Weighted physics-informed and data-driven losses."""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, Union

import numpy as np
import torch

from src.diffengine import eval_jet, scalar_output
from src.utils.errors import InvalidArgumentError, NumericalFailureError
from .sampling import SampleSet, TargetSet
from .types import LossWeights

if TYPE_CHECKING:
    from src.problems.types import ProblemSpec

LOSS_TERMS = ("ic", "bc", "r", "data")


@dataclass
class LossResult:
    total: torch.Tensor
    parts: Dict[str, torch.Tensor]

    def as_floats(self) -> Dict[str, float]:
        return {"total": float(self.total.detach()), **{name: float(v.detach()) for name, v in self.parts.items()}}


def _target_loss(model, targets: TargetSet) -> torch.Tensor:
    if not targets.derivatives:
        return torch.mean((scalar_output(model(targets.points)) - targets.values) ** 2)
    jet = eval_jet(model, targets.points, order=1)
    loss = torch.mean((jet.value - targets.values) ** 2)
    for axis, values in targets.derivatives:
        loss = loss + torch.mean((jet.first[:, axis] - values) ** 2)
    return loss


def compute_loss(model, samples: SampleSet, weights: LossWeights, problem: "ProblemSpec") -> LossResult:
    """Mean-squared loss terms and their weighted sum.

    Terms without points are reported as zero.

    Raises:
        NumericalFailureError: Naming the first term that is not finite.
    """
    zero = torch.zeros((), dtype=torch.float64)
    parts = dict.fromkeys(LOSS_TERMS, zero)
    if samples.residual is not None:
        jet = eval_jet(model, samples.residual, order=problem.residual_order)
        parts["r"] = torch.mean(problem.residual(samples.residual, jet) ** 2)
    if samples.boundary is not None:
        parts["bc"] = _target_loss(model, samples.boundary)
    if samples.initial is not None:
        parts["ic"] = _target_loss(model, samples.initial)
    if samples.data is not None:
        parts["data"] = _target_loss(model, samples.data)

    for name, value in parts.items():
        if not math.isfinite(float(value.detach())):
            raise NumericalFailureError(f"loss term {name!r} is not finite ({float(value.detach())})", term=name)
    lambdas = weights.as_dict()
    total = sum(lambdas[name] * parts[name] for name in LOSS_TERMS)
    return LossResult(total=total, parts=parts)


def relative_l2(prediction: Union[torch.Tensor, np.ndarray], truth: Union[torch.Tensor, np.ndarray]) -> float:
    """``||prediction - truth|| / ||truth||`` over matching point sets."""
    pred = torch.as_tensor(prediction, dtype=torch.float64).reshape(-1)
    true = torch.as_tensor(truth, dtype=torch.float64).reshape(-1)
    if pred.numel() != true.numel() or true.numel() == 0:
        raise InvalidArgumentError(f"cannot compare {pred.numel()} predictions with {true.numel()} values")
    norm = float(torch.linalg.vector_norm(true))
    if norm == 0:
        raise InvalidArgumentError("relative error is undefined for an all-zero reference")
    return float(torch.linalg.vector_norm(pred - true)) / norm
