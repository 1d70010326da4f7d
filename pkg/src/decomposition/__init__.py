"""Overlapping decompositions, partition-of-unity weights and FBKAN models."""

from .partition import (
    Decomposition1D,
    MultilevelDecomposition,
    TensorDecomposition,
    counts_for_total,
    multilevel_decomposition,
    pou_weights,
    subdomain_bounds,
    uniform_decomposition,
)
from .model import (
    FbkanModel,
    build_fbkan,
    fbkan_forward,
    model_from_document,
    model_to_document,
)

__all__ = [
    "Decomposition1D",
    "MultilevelDecomposition",
    "TensorDecomposition",
    "counts_for_total",
    "multilevel_decomposition",
    "pou_weights",
    "subdomain_bounds",
    "uniform_decomposition",
    "FbkanModel",
    "build_fbkan",
    "fbkan_forward",
    "model_from_document",
    "model_to_document",
]
