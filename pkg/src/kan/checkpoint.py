"""Self-describing documents for KAN networks."""

from typing import Any, Dict

import torch

from src.bspline import build_grid
from src.utils.errors import InvalidArgumentError
from .layer import KanLayer
from .network import KanNetwork

NETWORK_FORMAT = "kan-network/1"


def network_to_document(net: KanNetwork) -> Dict[str, Any]:
    """Describe ``net`` as plain data: widths, per-input grids and flat parameters."""
    return {
        "format": NETWORK_FORMAT,
        "widths": list(net.widths),
        "grids": [
            [[g.lo, g.hi, g.intervals, g.degree] for g in layer.grids] for layer in net.layers
        ],
        "parameters": net.flat_parameters().tolist(),
    }


def network_from_document(document: Dict[str, Any]) -> KanNetwork:
    if document.get("format") != NETWORK_FORMAT:
        raise InvalidArgumentError(f"unsupported network format {document.get('format')!r}")
    widths = document["widths"]
    layers = []
    for layer_grids, fan_out in zip(document["grids"], widths[1:]):
        grids = [build_grid(lo, hi, g, k) for lo, hi, g, k in layer_grids]
        layers.append(KanLayer(grids, fan_out, generator=torch.Generator().manual_seed(0)))
    net = KanNetwork(widths, layers)
    net.load_flat_parameters(torch.tensor(document["parameters"], dtype=torch.float64))
    return net
