"""Least-squares spline fitting and grid extension."""

import logging
from typing import Tuple

import numpy as np
import torch

from src.utils.errors import InvalidArgumentError, NumericalFailureError
from .basis import SplineCoefficients, basis_values
from .grid import KnotGrid

logger = logging.getLogger(__name__)

# Refit sample count is max(SAMPLES_PER_BASIS * basis count, MIN_REFIT_SAMPLES)
SAMPLES_PER_BASIS = 10
MIN_REFIT_SAMPLES = 200


def fit_spline(grid: KnotGrid, x: torch.Tensor, y: torch.Tensor) -> SplineCoefficients:
    """Least-squares coefficients on ``grid`` for samples ``(x, y)``.

    Args:
        grid: Target knot grid
        x: Sample locations, shape ``(S,)``
        y: Sample values, shape ``(S,)`` or ``(S, m)`` for m splines fitted at once

    Returns:
        Coefficients of shape ``(basis_count,)`` or ``(m, basis_count)``

    Raises:
        NumericalFailureError: If the design matrix is rank deficient.
    """
    design = basis_values(grid, torch.as_tensor(x, dtype=torch.float64)).cpu().numpy()
    targets = torch.as_tensor(y, dtype=torch.float64).cpu().numpy()
    solution, _, rank, _ = np.linalg.lstsq(design, targets, rcond=None)
    if rank < grid.basis_count:
        raise NumericalFailureError(
            f"spline fit is rank deficient: rank {rank} < {grid.basis_count} basis functions"
        )
    if not np.all(np.isfinite(solution)):
        raise NumericalFailureError("spline fit produced non-finite coefficients")
    coeffs = torch.from_numpy(np.ascontiguousarray(solution))
    return coeffs if coeffs.ndim == 1 else coeffs.T.contiguous()


def refit_samples(grid: KnotGrid, basis_count: int) -> torch.Tensor:
    count = max(SAMPLES_PER_BASIS * basis_count, MIN_REFIT_SAMPLES)
    return torch.linspace(grid.lo, grid.hi, count, dtype=torch.float64)


def extend_grid(
    grid: KnotGrid, coeffs: SplineCoefficients, new_intervals: int
) -> Tuple[KnotGrid, SplineCoefficients]:
    """Refine ``grid`` to ``new_intervals`` and transfer the spline onto it.

    The old spline is sampled at ``max(10 * new basis count, 200)`` uniform points
    in ``[lo, hi]`` and refitted on the new grid. Leading axes of ``coeffs`` are
    treated as independent splines sharing the grid.

    Returns:
        The new grid and coefficients with the same leading axes as ``coeffs``
    """
    if new_intervals < grid.intervals:
        raise InvalidArgumentError(
            f"grid extension cannot coarsen: {grid.intervals} -> {new_intervals}"
        )
    coeffs = torch.as_tensor(coeffs, dtype=torch.float64)
    if coeffs.shape[-1] != grid.basis_count:
        raise InvalidArgumentError(
            f"expected {grid.basis_count} coefficients, got {coeffs.shape[-1]}"
        )
    new_grid = grid.refined(new_intervals)
    x = refit_samples(new_grid, new_grid.basis_count)
    batch_shape = coeffs.shape[:-1]
    flat = coeffs.detach().reshape(-1, grid.basis_count).cpu()
    old_values = basis_values(grid, x) @ flat.T
    new_flat = fit_spline(new_grid, x, old_values)
    logger.debug(f"extended grid [{grid.lo}, {grid.hi}] from g={grid.intervals} to g={new_intervals}")
    return new_grid, new_flat.reshape(*batch_shape, new_grid.basis_count).to(coeffs.device)
