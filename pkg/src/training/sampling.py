"""Collocation, boundary and data point sampling from labelled random streams."""

import logging
import math
import zlib
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

import numpy as np
import torch

from src.utils.errors import InvalidArgumentError
from .types import SampleCounts

if TYPE_CHECKING:
    from src.problems.types import ProblemSpec

logger = logging.getLogger(__name__)

Face = Tuple[int, int]


def rng_stream(seed: int, label: str, iteration: int = 0) -> np.random.Generator:
    """Independent generator for one purpose, derived from the run seed.

    Streams with different labels or iterations never share state, so adding a
    sampling step elsewhere does not shift the points drawn here.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), zlib.crc32(label.encode()), int(iteration)]))


@dataclass(frozen=True)
class Box:
    """Axis-aligned domain ``[lows[0], highs[0]] x ... x [lows[d-1], highs[d-1]]``."""

    lows: Tuple[float, ...]
    highs: Tuple[float, ...]

    def __post_init__(self):
        if len(self.lows) != len(self.highs) or not self.lows:
            raise InvalidArgumentError("box bounds must be non-empty and of equal length")
        for lo, hi in zip(self.lows, self.highs):
            if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
                raise InvalidArgumentError(f"degenerate box side ({lo}, {hi})")

    @classmethod
    def of(cls, *sides: Tuple[float, float]) -> "Box":
        return cls(tuple(float(lo) for lo, _ in sides), tuple(float(hi) for _, hi in sides))

    @property
    def dim(self) -> int:
        return len(self.lows)

    @property
    def extent(self) -> List[Tuple[float, float]]:
        return list(zip(self.lows, self.highs))

    def faces(self) -> List[Face]:
        """Every ``(axis, side)`` pair, side 0 for the low face and 1 for the high face."""
        return [(axis, side) for axis in range(self.dim) for side in (0, 1)]

    def face_measure(self, face: Face) -> float:
        axis, _ = face
        return math.prod(hi - lo for k, (lo, hi) in enumerate(self.extent) if k != axis)


def sample_uniform(box: Box, n: int, rng: np.random.Generator) -> torch.Tensor:
    if n < 0:
        raise InvalidArgumentError(f"sample count must be non-negative, got {n}")
    points = rng.uniform(box.lows, box.highs, size=(n, box.dim))
    return torch.as_tensor(points, dtype=torch.float64)


def sample_faces(box: Box, n: int, rng: np.random.Generator, faces: Optional[Sequence[Face]] = None) -> torch.Tensor:
    """Uniform points on the union of ``faces``, each face drawn in proportion to its measure."""
    faces = list(faces) if faces is not None else box.faces()
    if not faces:
        raise InvalidArgumentError("no faces to sample from")
    measures = np.array([box.face_measure(f) for f in faces], dtype=float)
    choice = rng.choice(len(faces), size=n, p=measures / measures.sum())
    points = rng.uniform(box.lows, box.highs, size=(n, box.dim))
    for k, (axis, side) in enumerate(faces):
        points[choice == k, axis] = box.highs[axis] if side else box.lows[axis]
    return torch.as_tensor(points, dtype=torch.float64)


def noise_sigma(targets: torch.Tensor, level: float) -> float:
    """Noise scale giving a mean relative perturbation of roughly ``level``."""
    if level < 0:
        raise InvalidArgumentError(f"noise level must be non-negative, got {level}")
    return float(level * targets.abs().mean() * math.sqrt(math.pi / 2))


def add_noise(targets: torch.Tensor, sigma: float, rng: np.random.Generator) -> Tuple[torch.Tensor, float]:
    """Add N(0, sigma^2) noise and report the mean relative noise ``mean|eps| / mean|f|``."""
    if sigma == 0:
        return targets.clone(), 0.0
    eps = torch.as_tensor(rng.normal(0.0, sigma, size=tuple(targets.shape)), dtype=torch.float64)
    scale = float(targets.abs().mean())
    relative = float(eps.abs().mean()) / scale if scale > 0 else math.inf
    return targets + eps, relative


@dataclass(frozen=True)
class TargetSet:
    """Points with target values and, optionally, targets for first derivatives along given axes."""

    points: torch.Tensor
    values: torch.Tensor
    derivatives: Tuple[Tuple[int, torch.Tensor], ...] = ()


@dataclass(frozen=True)
class SampleSet:
    residual: Optional[torch.Tensor] = None
    boundary: Optional[TargetSet] = None
    initial: Optional[TargetSet] = None
    data: Optional[TargetSet] = None
    mean_relative_noise: float = 0.0


def _constraint_targets(constraint, n: int, rng: np.random.Generator) -> TargetSet:
    points = constraint.sample(n, rng)
    derivatives = tuple((axis, fn(points)) for axis, fn in constraint.derivative_targets)
    return TargetSet(points, constraint.target(points), derivatives)


def build_samples(problem: "ProblemSpec", counts: SampleCounts, seed: int, noise_level: float = 0.0) -> SampleSet:
    """Draw every point set a problem needs, each from its own labelled stream."""
    residual = boundary = initial = data = None
    relative_noise = 0.0
    if problem.residual is not None and counts.n_r > 0:
        residual = sample_uniform(problem.domain, counts.n_r, rng_stream(seed, "residual"))
    if problem.boundary is not None and counts.n_bc > 0:
        boundary = _constraint_targets(problem.boundary, counts.n_bc, rng_stream(seed, "boundary"))
    if problem.initial is not None and counts.n_ic > 0:
        initial = _constraint_targets(problem.initial, counts.n_ic, rng_stream(seed, "initial"))
    if problem.data_driven and counts.n_data > 0:
        points = sample_uniform(problem.domain, counts.n_data, rng_stream(seed, "data"))
        clean = problem.exact(points)
        values, relative_noise = add_noise(clean, noise_sigma(clean, noise_level), rng_stream(seed, "noise"))
        data = TargetSet(points, values)
        if noise_level > 0:
            logger.info(f"noise level {noise_level}: mean relative noise {relative_noise:.4f}")
    return SampleSet(residual, boundary, initial, data, relative_noise)


def resample_residual(samples: SampleSet, problem: "ProblemSpec", n: int, seed: int, iteration: int) -> SampleSet:
    if samples.residual is None:
        return samples
    points = sample_uniform(problem.domain, n, rng_stream(seed, "residual", iteration))
    return replace(samples, residual=points)
