"""A single KAN layer: one trainable activation per (input, output) edge."""

import math
from typing import Optional, Sequence, Tuple, Union

import torch
import torch.nn as nn
import torch.nn.functional as F

from src.bspline import KnotGrid, cox_de_boor, extend_grid
from src.utils.errors import InvalidArgumentError


def base_function(x: Union[float, torch.Tensor]) -> Union[float, torch.Tensor]:
    """b(x) = x / (1 + exp(-x)), evaluated without overflow for large |x|."""
    if isinstance(x, torch.Tensor):
        return F.silu(x)
    return float(F.silu(torch.tensor(float(x), dtype=torch.float64)))


class KanLayer(nn.Module):
    """Edges ``phi(x) = w_b * b(x) + w_s * sum_i c_i B_i(x)`` summed over inputs.

    Edges leaving input ``i`` share the knot grid ``grids[i]``. Parameters are
    stored input-major: ``base_weight[i, o]``, ``spline_weight[i, o]`` and
    ``coefficients[i, o, :]`` belong to the edge from input ``i`` to output ``o``.
    """

    def __init__(
        self,
        grids: Sequence[KnotGrid],
        fan_out: int,
        generator: Optional[torch.Generator] = None,
    ):
        super().__init__()
        if fan_out < 1 or not grids:
            raise InvalidArgumentError("a KAN layer needs at least one input and one output")
        if len({(g.intervals, g.degree) for g in grids}) != 1:
            raise InvalidArgumentError("all grids of a layer must share intervals and degree")
        self.grids: Tuple[KnotGrid, ...] = tuple(grids)
        fan_in = len(self.grids)
        basis_count = self.grids[0].basis_count

        bound = math.sqrt(6.0 / (fan_in + fan_out))
        base = (torch.rand(fan_in, fan_out, generator=generator, dtype=torch.float64) * 2 - 1) * bound
        coefficients = 0.1 * torch.randn(fan_in, fan_out, basis_count, generator=generator, dtype=torch.float64)
        self.base_weight = nn.Parameter(base)
        self.spline_weight = nn.Parameter(torch.ones(fan_in, fan_out, dtype=torch.float64))
        self.coefficients = nn.Parameter(coefficients)
        self._register_grid_buffers()

    def _register_grid_buffers(self) -> None:
        self.register_buffer("knots", torch.stack([g.knots for g in self.grids]))
        self.register_buffer("upper", torch.tensor([[g.hi] for g in self.grids], dtype=torch.float64))

    @property
    def fan_in(self) -> int:
        return len(self.grids)

    @property
    def fan_out(self) -> int:
        return self.base_weight.shape[1]

    @property
    def intervals(self) -> int:
        return self.grids[0].intervals

    @property
    def degree(self) -> int:
        return self.grids[0].degree

    @property
    def basis_count(self) -> int:
        return self.grids[0].basis_count

    def param_count(self) -> int:
        return self.fan_in * self.fan_out * (self.basis_count + 2)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        base = F.silu(x) @ self.base_weight
        closing = self.degree + self.intervals - 1
        bases = cox_de_boor(x.unsqueeze(-1), self.knots, self.degree, self.upper, closing)
        weighted = self.coefficients * self.spline_weight.unsqueeze(-1)
        return base + torch.einsum("bin,ion->bo", bases, weighted)

    @staticmethod
    def pack(base: torch.Tensor, spline: torch.Tensor, coefficients: torch.Tensor) -> torch.Tensor:
        """Flatten edge-major, with ``[w_b, w_s, c_0, ..., c_{n-1}]`` per edge."""
        return torch.cat([base.unsqueeze(-1), spline.unsqueeze(-1), coefficients], dim=-1).reshape(-1)

    def flat_parameters(self) -> torch.Tensor:
        return self.pack(self.base_weight, self.spline_weight, self.coefficients).detach().clone()

    @torch.no_grad()
    def load_flat_parameters(self, flat: torch.Tensor) -> None:
        if flat.numel() != self.param_count():
            raise InvalidArgumentError(f"expected {self.param_count()} values, got {flat.numel()}")
        edges = flat.reshape(self.fan_in, self.fan_out, self.basis_count + 2)
        self.base_weight.copy_(edges[..., 0])
        self.spline_weight.copy_(edges[..., 1])
        self.coefficients.copy_(edges[..., 2:])

    @torch.no_grad()
    def extend(self, new_intervals: int) -> None:
        """Refine every input grid and refit the coefficients of its edges."""
        grids, coefficients = [], []
        for i, grid in enumerate(self.grids):
            new_grid, new_coeffs = extend_grid(grid, self.coefficients[i], new_intervals)
            grids.append(new_grid)
            coefficients.append(new_coeffs)
        self.grids = tuple(grids)
        self.coefficients = nn.Parameter(torch.stack(coefficients))
        self._register_grid_buffers()
