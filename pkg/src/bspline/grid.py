"""Uniform knot grids for degree-k B-splines."""

import math
from dataclasses import dataclass
from functools import cached_property

import torch

from src.utils.errors import InvalidArgumentError


@dataclass(frozen=True)
class KnotGrid:
    """Uniform knots over ``[lo, hi]`` split into ``intervals`` pieces.

    The interior knots ``lo = t_0 < ... < t_g = hi`` are continued by ``degree``
    extra knots with the same spacing on each side, so the grid holds
    ``intervals + 2 * degree + 1`` knots and ``intervals + degree`` basis functions.
    """

    lo: float
    hi: float
    intervals: int
    degree: int

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / self.intervals

    @property
    def basis_count(self) -> int:
        return self.intervals + self.degree

    @property
    def knot_count(self) -> int:
        return self.intervals + 2 * self.degree + 1

    @cached_property
    def knots(self) -> torch.Tensor:
        steps = torch.arange(-self.degree, self.intervals + self.degree + 1, dtype=torch.float64)
        knots = self.lo + (self.hi - self.lo) * steps / self.intervals
        # Pin the interval ends so [lo, hi] is reproduced exactly.
        knots[self.degree] = self.lo
        knots[self.degree + self.intervals] = self.hi
        return knots

    def refined(self, intervals: int) -> "KnotGrid":
        return build_grid(self.lo, self.hi, intervals, self.degree)


def build_grid(lo: float, hi: float, intervals: int, degree: int) -> KnotGrid:
    """Build a uniform knot grid.

    Args:
        lo: Interval start
        hi: Interval end, strictly greater than ``lo``
        intervals: Number of sub-intervals g (at least 1)
        degree: Spline degree k (non-negative)

    Returns:
        KnotGrid over ``[lo, hi]``

    Raises:
        InvalidArgumentError: On non-finite bounds, ``hi <= lo`` or a non-positive interval count.
    """
    lo, hi = float(lo), float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise InvalidArgumentError(f"grid bounds must be finite, got ({lo}, {hi})")
    if hi <= lo:
        raise InvalidArgumentError(f"grid requires hi > lo, got ({lo}, {hi})")
    if int(intervals) != intervals or intervals < 1:
        raise InvalidArgumentError(f"intervals must be a positive integer, got {intervals}")
    if int(degree) != degree or degree < 0:
        raise InvalidArgumentError(f"degree must be a non-negative integer, got {degree}")
    return KnotGrid(lo=lo, hi=hi, intervals=int(intervals), degree=int(degree))
