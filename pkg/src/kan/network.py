"""Layered Kolmogorov–Arnold networks."""

import logging
from typing import List, Optional, Sequence, Tuple, Union

import torch
import torch.nn as nn

from src.bspline import build_grid
from src.utils.errors import InvalidArgumentError
from .layer import KanLayer

logger = logging.getLogger(__name__)

Bounds = Tuple[float, float]

# Grid range for hidden-layer inputs; post-activation sums concentrate here.
DEFAULT_HIDDEN_RANGE: Bounds = (-2.0, 2.0)


class KanNetwork(nn.Module):
    """Composition of KAN layers with architecture ``widths``."""

    def __init__(self, widths: Sequence[int], layers: Sequence[KanLayer]):
        super().__init__()
        self.widths: Tuple[int, ...] = tuple(int(w) for w in widths)
        self.layers = nn.ModuleList(layers)
        for j, layer in enumerate(self.layers):
            if layer.fan_in != self.widths[j] or layer.fan_out != self.widths[j + 1]:
                raise InvalidArgumentError(
                    f"layer {j} is {layer.fan_in}->{layer.fan_out}, widths say "
                    f"{self.widths[j]}->{self.widths[j + 1]}"
                )

    @property
    def input_dim(self) -> int:
        return self.widths[0]

    @property
    def output_dim(self) -> int:
        return self.widths[-1]

    @property
    def intervals(self) -> int:
        return self.layers[0].intervals

    @property
    def degree(self) -> int:
        return self.layers[0].degree

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = torch.as_tensor(x, dtype=torch.float64)
        single = x.ndim == 1
        if single:
            x = x.unsqueeze(0)
        if x.ndim != 2 or x.shape[1] != self.input_dim:
            raise InvalidArgumentError(
                f"expected inputs of dimension {self.input_dim}, got shape {tuple(x.shape)}"
            )
        for layer in self.layers:
            x = layer(x)
        return x[0] if single else x

    def param_count(self) -> int:
        return sum(layer.param_count() for layer in self.layers)

    def flat_parameters(self) -> torch.Tensor:
        """Parameters in layer-major, edge-major, coefficient-minor order."""
        return torch.cat([layer.flat_parameters() for layer in self.layers])

    def load_flat_parameters(self, flat: torch.Tensor) -> None:
        if flat.numel() != self.param_count():
            raise InvalidArgumentError(f"expected {self.param_count()} values, got {flat.numel()}")
        offset = 0
        for layer in self.layers:
            count = layer.param_count()
            layer.load_flat_parameters(flat[offset : offset + count])
            offset += count

    def flat_gradients(self, grads: dict) -> torch.Tensor:
        """Gather ``grads`` (parameter -> gradient or None) in the flat parameter order."""
        chunks = []
        for layer in self.layers:
            parts = []
            for param in (layer.base_weight, layer.spline_weight, layer.coefficients):
                grad = grads.get(param)
                parts.append(torch.zeros_like(param) if grad is None else grad)
            chunks.append(KanLayer.pack(*parts))
        return torch.cat(chunks)

    def extend_grid(self, new_intervals: int) -> None:
        for layer in self.layers:
            layer.extend(new_intervals)

    def grid_bounds(self) -> List[List[Bounds]]:
        return [[(g.lo, g.hi) for g in layer.grids] for layer in self.layers]


def init_network(
    widths: Sequence[int],
    intervals: int,
    degree: int,
    input_bounds: Optional[Sequence[Bounds]] = None,
    hidden_range: Bounds = DEFAULT_HIDDEN_RANGE,
    seed: Union[int, torch.Generator] = 0,
) -> KanNetwork:
    """Build a randomly initialised KAN.

    Coefficients are drawn from N(0, 0.1^2), spline weights start at 1 and base
    weights are uniform in ``±sqrt(6 / (fan_in + fan_out))``.

    Args:
        widths: Architecture, e.g. ``[2, 10, 1]``
        intervals: Grid intervals g of every layer
        degree: Spline degree k of every layer
        input_bounds: ``(lo, hi)`` per input coordinate; defaults to ``hidden_range``
        hidden_range: ``(lo, hi)`` of the grids of hidden-layer inputs
        seed: Integer seed or an existing generator

    Returns:
        KanNetwork, deterministic given the seed
    """
    if len(widths) < 2:
        raise InvalidArgumentError(f"widths needs at least two entries, got {list(widths)}")
    if any(int(w) != w or w < 1 for w in widths):
        raise InvalidArgumentError(f"widths must be positive integers, got {list(widths)}")
    if input_bounds is None:
        input_bounds = [hidden_range] * widths[0]
    if len(input_bounds) != widths[0]:
        raise InvalidArgumentError(
            f"got {len(input_bounds)} input bounds for input dimension {widths[0]}"
        )
    generator = seed if isinstance(seed, torch.Generator) else torch.Generator().manual_seed(int(seed))

    layers = []
    for j, (fan_in, fan_out) in enumerate(zip(widths[:-1], widths[1:])):
        bounds = input_bounds if j == 0 else [hidden_range] * fan_in
        grids = [build_grid(lo, hi, intervals, degree) for lo, hi in bounds]
        layers.append(KanLayer(grids, fan_out, generator=generator))
    return KanNetwork(widths, layers)


def kan_forward(net: KanNetwork, x: torch.Tensor) -> torch.Tensor:
    """Evaluate ``net`` at one point ``(d,)`` or a batch ``(B, d)``."""
    return net(x)


def param_count(net: KanNetwork) -> int:
    return net.param_count()
