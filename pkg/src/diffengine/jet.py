"""Input derivatives of models through nested reverse-mode differentiation."""

from dataclasses import dataclass
from typing import Callable, Optional, Union

import torch

from src.utils.errors import InvalidArgumentError

Model = Callable[[torch.Tensor], torch.Tensor]


@dataclass
class JetValue:
    """Value, gradient and diagonal Hessian of a scalar model at a batch of points.

    ``value`` has shape ``(B,)``; ``first`` and ``second_diag`` have shape ``(B, d)``.
    Orders that were not requested are ``None``.
    """

    value: torch.Tensor
    first: Optional[torch.Tensor] = None
    second_diag: Optional[torch.Tensor] = None

    def __add__(self, other: "JetValue") -> "JetValue":
        def add(a, b):
            return None if a is None or b is None else a + b

        return JetValue(self.value + other.value, add(self.first, other.first), add(self.second_diag, other.second_diag))


def scalar_output(output: torch.Tensor) -> torch.Tensor:
    if output.ndim == 2 and output.shape[1] == 1:
        return output[:, 0]
    if output.ndim == 1:
        return output
    raise InvalidArgumentError(f"expected a scalar-valued model, got output shape {tuple(output.shape)}")


def _grad(outputs: torch.Tensor, inputs: torch.Tensor, create_graph: bool, retain_graph: bool = False) -> torch.Tensor:
    if not outputs.requires_grad:
        return torch.zeros_like(inputs)
    (grad,) = torch.autograd.grad(
        outputs.sum(), inputs, create_graph=create_graph, retain_graph=create_graph or retain_graph, allow_unused=True
    )
    return torch.zeros_like(inputs) if grad is None else grad


def eval_jet(
    model: Model,
    x: Union[torch.Tensor, list],
    order: int = 2,
    create_graph: bool = True,
) -> JetValue:
    """Evaluate ``model`` and its input derivatives up to ``order`` at the points ``x``.

    The derivatives are exact for the composite model, POU weights included.
    Points do not interact, so summing over the batch before differentiating
    yields per-point derivatives.

    Args:
        model: Callable mapping ``(B, d)`` points to ``(B,)`` or ``(B, 1)`` values
        x: One point ``(d,)`` or a batch ``(B, d)``
        order: Highest derivative order, 0 to 2
        create_graph: Keep the graph so parameter gradients can flow through the derivatives

    Returns:
        JetValue for the batch
    """
    if order not in (0, 1, 2):
        raise InvalidArgumentError(f"derivative order must be 0, 1 or 2, got {order}")
    points = torch.as_tensor(x, dtype=torch.float64)
    if points.ndim == 1:
        points = points.unsqueeze(0)
    points = points.detach().clone().requires_grad_(order > 0)
    value = scalar_output(model(points))
    if order == 0:
        return JetValue(value)

    first = _grad(value, points, create_graph=create_graph or order > 1)
    if order == 1:
        return JetValue(value, first)

    # every pass but the last walks the graph of `first` again
    dim = points.shape[1]
    second = torch.stack(
        [_grad(first[:, i], points, create_graph, retain_graph=i < dim - 1)[:, i] for i in range(dim)],
        dim=1,
    )
    return JetValue(value, first, second)
