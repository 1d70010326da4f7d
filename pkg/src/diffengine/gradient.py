"""Gradients of scalar losses with respect to every trainable parameter."""

import math
from dataclasses import dataclass
from typing import Any, Callable, Mapping

import torch

from src.utils.errors import NumericalFailureError


@dataclass
class ParameterGradient:
    """Flat gradient aligned with ``model.flat_parameters()``."""

    values: torch.Tensor
    loss: float

    def __add__(self, other: "ParameterGradient") -> "ParameterGradient":
        return ParameterGradient(self.values + other.values, self.loss + other.loss)


def _check_finite(result: Any) -> torch.Tensor:
    """Return the scalar total of ``result``; raise naming the first non-finite term."""
    parts: Mapping[str, torch.Tensor] = getattr(result, "parts", {}) or {}
    for name, part in parts.items():
        if not math.isfinite(float(part.detach())):
            raise NumericalFailureError(f"loss term {name!r} is not finite ({float(part.detach())})", term=name)
    total = getattr(result, "total", result)
    total = torch.as_tensor(total, dtype=torch.float64)
    if not math.isfinite(float(total.detach())):
        raise NumericalFailureError(f"loss is not finite ({float(total.detach())})", term="total")
    return total


def loss_gradient(model: torch.nn.Module, loss_evaluator: Callable[[torch.nn.Module], Any]) -> ParameterGradient:
    """Exact gradient of ``loss_evaluator(model)`` with respect to all parameters of ``model``.

    ``loss_evaluator`` returns either a scalar tensor or an object exposing ``total``
    and a ``parts`` mapping. Parameters the loss never touches get zero entries.

    Raises:
        NumericalFailureError: If the loss or one of its parts is not finite.
    """
    total = _check_finite(loss_evaluator(model))
    params = list(model.parameters())
    if total.requires_grad:
        grads = torch.autograd.grad(total, params, allow_unused=True)
    else:
        grads = [None] * len(params)
    flat = model.flat_gradients(dict(zip(params, grads)))
    return ParameterGradient(values=flat.detach(), loss=float(total.detach()))
