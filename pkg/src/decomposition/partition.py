"""Overlapping uniform decompositions and their partition-of-unity weights."""

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np
import torch

from src.config import BOUNDS_THRESHOLD, DEFAULT_OVERLAP
from src.utils.errors import CoverageViolationError, InvalidArgumentError

Bounds = Tuple[float, float]


@dataclass(frozen=True)
class Decomposition1D:
    """``count`` overlapping subdomains of ``[lo, hi]`` with overlap ratio ``overlap``.

    For more than one subdomain, centers are ``lo + l (j - 1) / (L - 1)`` and every
    half width is ``(overlap * l / 2) / (L - 1)`` with ``l = hi - lo``.
    """

    lo: float
    hi: float
    count: int
    overlap: float = DEFAULT_OVERLAP

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.hi <= self.lo:
            raise InvalidArgumentError(f"invalid extent ({self.lo}, {self.hi})")
        if int(self.count) != self.count or self.count < 1:
            raise InvalidArgumentError(f"subdomain count must be a positive integer, got {self.count}")
        if self.overlap <= 1:
            raise InvalidArgumentError(f"overlap ratio must exceed 1, got {self.overlap}")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def centers(self) -> Tuple[float, ...]:
        if self.count == 1:
            return (0.5 * (self.lo + self.hi),)
        return tuple(self.lo + self.length * j / (self.count - 1) for j in range(self.count))

    @property
    def half_widths(self) -> Tuple[float, ...]:
        if self.count == 1:
            return (0.5 * self.overlap * self.length,)
        return (0.5 * self.overlap * self.length / (self.count - 1),) * self.count

    def raw_weights(self, x: torch.Tensor) -> torch.Tensor:
        """Unnormalised weights ``[1 + cos(pi (x - mu_j) / sigma_j)]^2``, zero outside the support.

        Args:
            x: Coordinates, shape ``(B,)``

        Returns:
            Tensor of shape ``(B, count)``
        """
        if self.count == 1:
            return torch.ones(x.shape[0], 1, dtype=x.dtype, device=x.device)
        mu = torch.tensor(self.centers, dtype=x.dtype, device=x.device)
        sigma = torch.tensor(self.half_widths, dtype=x.dtype, device=x.device)
        u = (x.unsqueeze(-1) - mu) / sigma
        bump = (1 + torch.cos(math.pi * u)) ** 2
        return torch.where(u.abs() <= 1, bump, torch.zeros_like(bump))


@dataclass(frozen=True)
class TensorDecomposition:
    """Tensor product of one decomposition per input dimension.

    Subdomain ``j`` corresponds to the row-major multi-index over ``dims``.
    """

    dims: Tuple[Decomposition1D, ...]

    @property
    def dim(self) -> int:
        return len(self.dims)

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(d.count for d in self.dims)

    @property
    def count(self) -> int:
        return int(np.prod(self.counts))

    @property
    def extent(self) -> List[Bounds]:
        return [(d.lo, d.hi) for d in self.dims]

    def multi_index(self, j: int) -> Tuple[int, ...]:
        if not 0 <= j < self.count:
            raise InvalidArgumentError(f"subdomain index {j} outside [0, {self.count})")
        return tuple(int(i) for i in np.unravel_index(j, self.counts))

    def flat_index(self, multi_index: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(multi_index), self.counts))

    def raw_weights(self, x: torch.Tensor) -> torch.Tensor:
        """Products of the per-dimension raw weights, shape ``(B, count)``."""
        weights = self.dims[0].raw_weights(x[:, 0])
        for i in range(1, self.dim):
            factor = self.dims[i].raw_weights(x[:, i])
            weights = (weights.unsqueeze(-1) * factor.unsqueeze(1)).reshape(x.shape[0], -1)
        return weights


@dataclass(frozen=True)
class MultilevelDecomposition:
    """Stack of independent decompositions; a single level is a plain FBKAN."""

    levels: Tuple[TensorDecomposition, ...]

    @property
    def level_count(self) -> int:
        return len(self.levels)

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(level.count for level in self.levels)

    @property
    def dim(self) -> int:
        return self.levels[0].dim

    @property
    def extent(self) -> List[Bounds]:
        return self.levels[0].extent


def pou_weights(dec: TensorDecomposition, x: Union[Sequence[float], torch.Tensor]) -> torch.Tensor:
    """Normalised partition-of-unity weights.

    Args:
        dec: Decomposition to evaluate
        x: One point ``(d,)`` or a batch ``(B, d)``

    Returns:
        Weights ``(count,)`` or ``(B, count)`` summing to one per point

    Raises:
        CoverageViolationError: If a point lies outside every subdomain support.
    """
    x = torch.as_tensor(x, dtype=torch.float64)
    single = x.ndim == 1
    if single:
        x = x.unsqueeze(0)
    if x.ndim != 2 or x.shape[1] != dec.dim:
        raise InvalidArgumentError(f"expected points of dimension {dec.dim}, got shape {tuple(x.shape)}")
    raw = dec.raw_weights(x)
    total = raw.sum(-1, keepdim=True)
    uncovered = total.squeeze(-1) <= 0
    if bool(uncovered.any()):
        point = x[uncovered][0].detach().tolist()
        raise CoverageViolationError(f"point {point} lies outside every subdomain support")
    weights = raw / total
    return weights[0] if single else weights


def _normalized_1d(dec: Decomposition1D, samples: int) -> Tuple[torch.Tensor, torch.Tensor]:
    xs = torch.linspace(dec.lo, dec.hi, samples, dtype=torch.float64)
    raw = dec.raw_weights(xs)
    return xs, raw / raw.sum(-1, keepdim=True)


def subdomain_bounds(
    dec: TensorDecomposition,
    j: int,
    samples_per_dim: int = 1000,
    threshold: float = BOUNDS_THRESHOLD,
) -> List[Bounds]:
    """Per-dimension extent ``(a, b)`` of the region where subdomain ``j`` has weight above ``threshold``.

    The dense sample is the tensor grid of ``samples_per_dim`` uniform points per
    dimension. Normalised tensor weights factor into per-dimension weights, so the
    extent along dimension ``i`` is where the 1D weight times the peak weight of the
    other dimensions exceeds the threshold.
    """
    if samples_per_dim < 100:
        raise InvalidArgumentError(f"samples_per_dim must be at least 100, got {samples_per_dim}")
    index = dec.multi_index(j)
    columns, peaks = [], []
    for d, i in zip(dec.dims, index):
        xs, weights = _normalized_1d(d, samples_per_dim)
        columns.append((xs, weights[:, i]))
        peaks.append(float(weights[:, i].max()))

    bounds = []
    for axis, (xs, column) in enumerate(columns):
        others = math.prod(p for k, p in enumerate(peaks) if k != axis)
        inside = xs[column * others > threshold]
        if inside.numel() == 0:
            raise CoverageViolationError(f"subdomain {j} never exceeds weight {threshold} along axis {axis}")
        bounds.append((float(inside.min()), float(inside.max())))
    return bounds


def uniform_decomposition(
    extent: Sequence[Bounds], counts: Sequence[int], overlap: float = DEFAULT_OVERLAP
) -> TensorDecomposition:
    if len(extent) != len(counts):
        raise InvalidArgumentError(f"{len(counts)} counts for a {len(extent)}-dimensional domain")
    return TensorDecomposition(
        tuple(Decomposition1D(float(lo), float(hi), int(n), overlap) for (lo, hi), n in zip(extent, counts))
    )


def counts_for_total(total: int, dim: int) -> Tuple[int, ...]:
    """Split ``total`` subdomains into a uniform grid, e.g. 16 in 2D -> (4, 4)."""
    per_dim = int(round(total ** (1.0 / dim)))
    if per_dim < 1 or per_dim**dim != total:
        raise InvalidArgumentError(f"{total} subdomains do not form a uniform {dim}-dimensional grid")
    return (per_dim,) * dim


def multilevel_decomposition(
    extent: Sequence[Bounds], totals: Sequence[int], overlap: float = DEFAULT_OVERLAP
) -> MultilevelDecomposition:
    """One level per entry of ``totals``, e.g. ``[1, 4, 16]`` in 2D."""
    if not totals:
        raise InvalidArgumentError("at least one level is required")
    dim = len(extent)
    return MultilevelDecomposition(
        tuple(uniform_decomposition(extent, counts_for_total(int(t), dim), overlap) for t in totals)
    )
