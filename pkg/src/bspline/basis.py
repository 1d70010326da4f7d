"""Cox–de Boor evaluation of B-spline bases and their derivatives."""

from typing import Union

import torch

from src.utils.errors import InvalidArgumentError
from .grid import KnotGrid

# Coefficients c_i of spline(x) = sum_i c_i B_i(x); the last axis has basis_count entries.
SplineCoefficients = torch.Tensor


def cox_de_boor(
    x: torch.Tensor,
    knots: torch.Tensor,
    degree: int,
    hi: Union[float, torch.Tensor],
    closing_interval: int,
) -> torch.Tensor:
    """Evaluate all degree-``degree`` B-splines on ``knots`` at ``x``.

    Args:
        x: Points with a trailing singleton axis, shape ``(..., 1)``
        knots: Knot vectors broadcastable against ``x``, shape ``(..., G)``
        degree: Degree of the returned basis
        hi: Right end of the grid interval; points equal to it fall into the interval
            ``closing_interval`` so the basis still sums to one there
        closing_interval: Index of the knot interval that ends at ``hi``

    Returns:
        Basis values of shape ``(..., G - degree - 1)``
    """
    t = knots
    bases = ((x >= t[..., :-1]) & (x < t[..., 1:])).to(x.dtype)
    at_hi = x == hi
    if bool(at_hi.any()):
        closing = torch.zeros(bases.shape[-1], dtype=x.dtype, device=x.device)
        closing[closing_interval] = 1.0
        bases = torch.where(at_hi, closing, bases)
    for p in range(1, degree + 1):
        left = (x - t[..., : -(p + 1)]) / (t[..., p:-1] - t[..., : -(p + 1)]) * bases[..., :-1]
        right = (t[..., p + 1 :] - x) / (t[..., p + 1 :] - t[..., 1:-p]) * bases[..., 1:]
        bases = left + right
    return bases


def differentiate_basis(lower: torch.Tensor, knots: torch.Tensor, degree: int) -> torch.Tensor:
    """Raise a derivative of the degree-``degree - 1`` basis to the degree-``degree`` basis.

    Uses d/dx B_{i,p} = p / (t_{i+p} - t_i) B_{i,p-1} - p / (t_{i+p+1} - t_{i+1}) B_{i+1,p-1},
    applied to whatever derivative order ``lower`` already carries.
    """
    t = knots
    p = degree
    left = p / (t[..., p:-1] - t[..., : -(p + 1)])
    right = p / (t[..., p + 1 :] - t[..., 1:-p])
    return left * lower[..., :-1] - right * lower[..., 1:]


def basis_values(
    grid: KnotGrid,
    x: Union[float, torch.Tensor],
    derivative_order: int = 0,
) -> torch.Tensor:
    """Evaluate the basis of ``grid`` (or its derivatives) at ``x``.

    Points outside ``[lo, hi]`` go through the same recursion without clamping.

    Args:
        grid: Knot grid
        x: Scalar or tensor of points of any shape
        derivative_order: Order m of the derivative, ``0 <= m <= grid.degree``

    Returns:
        Tensor of shape ``x.shape + (grid.basis_count,)``
    """
    if derivative_order < 0 or derivative_order > grid.degree:
        raise InvalidArgumentError(
            f"derivative_order must lie in [0, {grid.degree}], got {derivative_order}"
        )
    x = torch.as_tensor(x, dtype=torch.float64)
    points = x.unsqueeze(-1)
    knots = grid.knots.to(device=x.device)
    closing = grid.degree + grid.intervals - 1
    values = cox_de_boor(points, knots, grid.degree - derivative_order, grid.hi, closing)
    for p in range(grid.degree - derivative_order + 1, grid.degree + 1):
        values = differentiate_basis(values, knots, p)
    return values


def evaluate_spline(
    grid: KnotGrid,
    coeffs: SplineCoefficients,
    x: Union[float, torch.Tensor],
    derivative_order: int = 0,
) -> torch.Tensor:
    """Evaluate ``sum_i c_i B_i(x)``; leading axes of ``coeffs`` broadcast against ``x``."""
    coeffs = torch.as_tensor(coeffs, dtype=torch.float64)
    if coeffs.shape[-1] != grid.basis_count:
        raise InvalidArgumentError(
            f"expected {grid.basis_count} coefficients, got {coeffs.shape[-1]}"
        )
    return (basis_values(grid, x, derivative_order) * coeffs).sum(-1)
