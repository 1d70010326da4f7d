"""Kolmogorov–Arnold network layers and networks."""

from .layer import KanLayer, base_function
from .network import DEFAULT_HIDDEN_RANGE, KanNetwork, init_network, kan_forward, param_count
from .checkpoint import network_from_document, network_to_document

__all__ = [
    "DEFAULT_HIDDEN_RANGE",
    "KanLayer",
    "KanNetwork",
    "base_function",
    "init_network",
    "kan_forward",
    "param_count",
    "network_from_document",
    "network_to_document",
]
