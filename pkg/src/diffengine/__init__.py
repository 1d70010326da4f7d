"""Exact input derivatives and parameter gradients."""

from .jet import JetValue, eval_jet, scalar_output
from .gradient import ParameterGradient, loss_gradient

__all__ = [
    "JetValue",
    "ParameterGradient",
    "eval_jet",
    "loss_gradient",
    "scalar_output",
]
