from dataclasses import replace
from typing import Tuple, Union

import torch

from src.diffengine import ParameterGradient
from src.utils.errors import InvalidArgumentError, NumericalFailureError
from .types import AdamState


def adam_step(
    state: AdamState,
    params: torch.Tensor,
    grad: Union[ParameterGradient, torch.Tensor],
    lr: float,
) -> Tuple[torch.Tensor, AdamState]:
    """One bias-corrected Adam update of a flat parameter vector.

    Returns:
        Updated parameters and a new state; the inputs are left untouched.
    """
    g = grad.values if isinstance(grad, ParameterGradient) else grad
    if g.shape != params.shape or state.m.shape != params.shape:
        raise InvalidArgumentError(
            f"shape mismatch: params {tuple(params.shape)}, grad {tuple(g.shape)}, moments {tuple(state.m.shape)}"
        )
    if not bool(torch.isfinite(g).all()):
        bad = int((~torch.isfinite(g)).nonzero()[0])
        raise NumericalFailureError(f"gradient entry {bad} is not finite")

    step = state.step + 1
    m = state.beta1 * state.m + (1 - state.beta1) * g
    v = state.beta2 * state.v + (1 - state.beta2) * g * g
    m_hat = m / (1 - state.beta1**step)
    v_hat = v / (1 - state.beta2**step)
    updated = params - lr * m_hat / (torch.sqrt(v_hat) + state.eps)
    return updated, replace(state, step=step, m=m, v=v)
