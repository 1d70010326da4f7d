"""B-spline knot grids, basis evaluation and grid extension."""

from .grid import KnotGrid, build_grid
from .basis import SplineCoefficients, basis_values, cox_de_boor, evaluate_spline
from .extension import extend_grid, fit_spline

__all__ = [
    "KnotGrid",
    "SplineCoefficients",
    "build_grid",
    "basis_values",
    "cox_de_boor",
    "evaluate_spline",
    "extend_grid",
    "fit_spline",
]
