"""Value types shared by the loss, optimiser and training loop."""

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import torch

from src.utils.errors import InvalidArgumentError


@dataclass(frozen=True)
class LossWeights:
    lambda_ic: float = 0.0
    lambda_bc: float = 0.0
    lambda_r: float = 0.0
    lambda_data: float = 0.0

    def __post_init__(self):
        values = self.as_dict()
        if any(not math.isfinite(v) or v < 0 for v in values.values()):
            raise InvalidArgumentError(f"loss weights must be finite and non-negative, got {values}")
        if not any(v > 0 for v in values.values()):
            raise InvalidArgumentError("at least one loss weight must be positive")

    def as_dict(self) -> Dict[str, float]:
        return {"ic": self.lambda_ic, "bc": self.lambda_bc, "r": self.lambda_r, "data": self.lambda_data}


@dataclass(frozen=True)
class SampleCounts:
    n_r: int = 0
    n_bc: int = 0
    n_ic: int = 0
    n_data: int = 0


@dataclass(frozen=True)
class TrainSchedule:
    """Iteration budget, grid-extension events and learning-rate schedule.

    ``grid_values[i]`` becomes the grid size at iteration ``grid_iterations[i]``;
    every event after the first also multiplies the learning rate by ``lr_scale``.
    """

    iterations: int
    lr_initial: float
    grid_values: Tuple[int, ...]
    grid_iterations: Tuple[int, ...] = (0,)
    lr_scale: float = 1.0
    resample_residual_each_iter: bool = False
    eval_every: int = 100

    def __post_init__(self):
        if self.iterations < 0:
            raise InvalidArgumentError(f"iterations must be non-negative, got {self.iterations}")
        if self.lr_initial <= 0 or self.lr_scale <= 0:
            raise InvalidArgumentError("learning rate and its scale must be positive")
        if len(self.grid_values) != len(self.grid_iterations) or not self.grid_values:
            raise InvalidArgumentError("grid_values and grid_iterations must be non-empty and of equal length")
        if self.grid_iterations[0] != 0:
            raise InvalidArgumentError("grid_iterations must start at 0")
        if any(b <= a for a, b in zip(self.grid_iterations, self.grid_iterations[1:])):
            raise InvalidArgumentError(f"grid_iterations must be strictly increasing, got {self.grid_iterations}")
        if any(b < a for a, b in zip(self.grid_values, self.grid_values[1:])):
            raise InvalidArgumentError(f"grid_values must be nondecreasing, got {self.grid_values}")
        if self.eval_every < 1:
            raise InvalidArgumentError(f"eval_every must be positive, got {self.eval_every}")

    @property
    def initial_grid(self) -> int:
        return self.grid_values[0]

    def extension_events(self) -> Dict[int, int]:
        """Iteration -> new grid size, for every event after the initial grid."""
        return dict(zip(self.grid_iterations[1:], self.grid_values[1:]))


@dataclass
class AdamState:
    """Step counter and moment estimates aligned with the flat parameter vector."""

    step: int
    m: torch.Tensor
    v: torch.Tensor
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros(cls, count: int) -> "AdamState":
        return cls(step=0, m=torch.zeros(count, dtype=torch.float64), v=torch.zeros(count, dtype=torch.float64))
