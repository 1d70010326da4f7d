"""Benchmark problem description shared by every problem constructor."""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
import torch

from src.config import DEFAULT_OVERLAP
from src.diffengine import JetValue, eval_jet
from src.training import Box, LossWeights, SampleCounts, rng_stream, sample_faces, sample_uniform
from src.utils.errors import NumericalFailureError

logger = logging.getLogger(__name__)

Field = Callable[[torch.Tensor], torch.Tensor]
Residual = Callable[[torch.Tensor, JetValue], torch.Tensor]
Sampler = Callable[[int, np.random.Generator], torch.Tensor]

CONSISTENCY_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Constraint:
    """Boundary or initial condition: where to sample, what the model must match there.

    ``derivative_targets`` pairs an input axis with the target of the first
    derivative along it, e.g. a zero initial velocity.
    """

    sample: Sampler
    target: Field
    derivative_targets: Tuple[Tuple[int, Field], ...] = ()


def face_constraint(domain: Box, faces: Sequence[Tuple[int, int]], target: Field, derivative_targets=()) -> Constraint:
    return Constraint(lambda n, rng: sample_faces(domain, n, rng, faces), target, tuple(derivative_targets))


def zero_field(x: torch.Tensor) -> torch.Tensor:
    return torch.zeros(x.shape[0], dtype=torch.float64)


@dataclass(frozen=True)
class ProblemDefaults:
    """Hyperparameters a problem trains with unless a preset or override says otherwise."""

    widths: Tuple[int, ...]
    grid: int
    degree: int
    lr: float
    iterations: int
    weights: LossWeights
    counts: SampleCounts
    levels: Tuple[int, ...] = (4,)
    overlap: float = DEFAULT_OVERLAP
    lr_scale: float = 1.0
    grid_values: Optional[Tuple[int, ...]] = None
    grid_iterations: Optional[Tuple[int, ...]] = None
    resample_residual: bool = False
    eval_every: int = 100

    def to_config(self) -> Dict[str, Any]:
        """Model and training sections in the run configuration layout."""
        return {
            "model": {
                "widths": list(self.widths),
                "grid": self.grid,
                "degree": self.degree,
                "levels": list(self.levels),
                "overlap": self.overlap,
            },
            "training": {
                "iterations": self.iterations,
                "lr": self.lr,
                "lr_scale": self.lr_scale,
                "grid_values": list(self.grid_values) if self.grid_values else None,
                "grid_iterations": list(self.grid_iterations) if self.grid_iterations else None,
                "weights": {
                    "lambda_ic": self.weights.lambda_ic,
                    "lambda_bc": self.weights.lambda_bc,
                    "lambda_r": self.weights.lambda_r,
                    "lambda_data": self.weights.lambda_data,
                },
                "counts": {
                    "n_r": self.counts.n_r,
                    "n_bc": self.counts.n_bc,
                    "n_ic": self.counts.n_ic,
                    "n_data": self.counts.n_data,
                },
                "resample_residual": self.resample_residual,
                "eval_every": self.eval_every,
            },
        }


@dataclass(frozen=True)
class ProblemSpec:
    """A benchmark: domain, exact solution, residual operator and conditions.

    ``residual(x, jet)`` maps points and the model's jet there to the pointwise
    residual; ``residual_order`` is the highest input derivative it reads.
    """

    name: str
    domain: Box
    exact: Field
    defaults: ProblemDefaults
    residual: Optional[Residual] = None
    residual_order: int = 0
    boundary: Optional[Constraint] = None
    initial: Optional[Constraint] = None
    data_driven: bool = False
    coordinates: Tuple[str, ...] = ("x",)
    params: Mapping[str, Any] = field(default_factory=dict)
    test_resolution: Optional[int] = None

    @property
    def dim(self) -> int:
        return self.domain.dim

    def test_points(self) -> torch.Tensor:
        """Evenly spaced evaluation grid: 1000 points in 1D, 100 per axis otherwise."""
        per_axis = self.test_resolution or (1000 if self.dim == 1 else 100)
        axes = [torch.linspace(lo, hi, per_axis, dtype=torch.float64) for lo, hi in self.domain.extent]
        mesh = torch.meshgrid(*axes, indexing="ij")
        return torch.stack([m.reshape(-1) for m in mesh], dim=1)

    def check_consistency(self, n: int = 100, seed: int = 0, tolerance: float = CONSISTENCY_TOLERANCE) -> float:
        """Maximum residual of the exact solution at ``n`` random interior points.

        Raises:
            NumericalFailureError: If it exceeds ``tolerance``.
        """
        if self.residual is None:
            return 0.0
        points = sample_uniform(self.domain, n, rng_stream(seed, "consistency"))
        jet = eval_jet(lambda x: self.exact(x), points, order=self.residual_order, create_graph=False)
        worst = float(self.residual(points, jet).detach().abs().max())
        logger.debug(f"{self.name}: exact-solution residual {worst:.3e}")
        if not worst <= tolerance:
            raise NumericalFailureError(
                f"{self.name}: exact solution leaves residual {worst:.3e} > {tolerance:g}", term="r"
            )
        return worst
