"""FBKAN and multilevel FBKAN models."""

import logging
from typing import Any, Dict, List, Optional, Sequence

import torch
import torch.nn as nn

from src.kan import (
    DEFAULT_HIDDEN_RANGE,
    KanNetwork,
    init_network,
    network_from_document,
    network_to_document,
)
from src.utils.errors import InvalidArgumentError
from .partition import (
    Decomposition1D,
    MultilevelDecomposition,
    TensorDecomposition,
    pou_weights,
    subdomain_bounds,
)

logger = logging.getLogger(__name__)

MODEL_FORMAT = "fbkan-model/1"


class FbkanModel(nn.Module):
    """``(1/N) sum_l sum_j w_j^(l)(x) K_j^(l)(x)`` over N decomposition levels.

    ``networks[l][j]`` is the KAN of subdomain ``j`` on level ``l``. A network is
    only evaluated on the points where its weight is positive.
    """

    def __init__(self, decomposition: MultilevelDecomposition, networks: Sequence[Sequence[KanNetwork]]):
        super().__init__()
        if len(networks) != decomposition.level_count:
            raise InvalidArgumentError(
                f"{len(networks)} network levels for {decomposition.level_count} decomposition levels"
            )
        for level, nets in zip(decomposition.levels, networks):
            if len(nets) != level.count:
                raise InvalidArgumentError(f"{len(nets)} networks for a level with {level.count} subdomains")
        widths = {net.widths for nets in networks for net in nets}
        if len(widths) != 1:
            raise InvalidArgumentError(f"all subdomain networks must share one architecture, got {widths}")
        self.decomposition = decomposition
        self.networks = nn.ModuleList(nn.ModuleList(nets) for nets in networks)

    @property
    def widths(self) -> Sequence[int]:
        return self.networks[0][0].widths

    @property
    def input_dim(self) -> int:
        return self.widths[0]

    @property
    def intervals(self) -> int:
        return self.networks[0][0].intervals

    @property
    def degree(self) -> int:
        return self.networks[0][0].degree

    @property
    def network_count(self) -> int:
        return sum(len(nets) for nets in self.networks)

    def iter_networks(self):
        for nets in self.networks:
            yield from nets

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = torch.as_tensor(x, dtype=torch.float64)
        single = x.ndim == 1
        if single:
            x = x.unsqueeze(0)
        if x.ndim != 2 or x.shape[1] != self.input_dim:
            raise InvalidArgumentError(
                f"expected inputs of dimension {self.input_dim}, got shape {tuple(x.shape)}"
            )
        out = torch.zeros(x.shape[0], self.widths[-1], dtype=x.dtype, device=x.device)
        for level, nets in zip(self.decomposition.levels, self.networks):
            weights = pou_weights(level, x)
            for j, net in enumerate(nets):
                active = torch.nonzero(weights[:, j] > 0).squeeze(1)
                if active.numel() == 0:
                    continue
                if active.numel() == x.shape[0]:
                    out = out + weights[:, j : j + 1] * net(x)
                else:
                    contribution = weights[active, j].unsqueeze(-1) * net(x[active])
                    out = out.index_add(0, active, contribution)
        out = out / self.decomposition.level_count
        return out[0] if single else out

    def param_count(self) -> int:
        return sum(net.param_count() for net in self.iter_networks())

    def flat_parameters(self) -> torch.Tensor:
        """Level-major, subdomain-major concatenation of every network's flat parameters."""
        return torch.cat([net.flat_parameters() for net in self.iter_networks()])

    def load_flat_parameters(self, flat: torch.Tensor) -> None:
        if flat.numel() != self.param_count():
            raise InvalidArgumentError(f"expected {self.param_count()} values, got {flat.numel()}")
        offset = 0
        for net in self.iter_networks():
            count = net.param_count()
            net.load_flat_parameters(flat[offset : offset + count])
            offset += count

    def flat_gradients(self, grads: Dict[torch.nn.Parameter, Optional[torch.Tensor]]) -> torch.Tensor:
        return torch.cat([net.flat_gradients(grads) for net in self.iter_networks()])

    def extend_grid(self, new_intervals: int) -> None:
        logger.info(f"extending grids of {self.network_count} networks: g={self.intervals} -> g={new_intervals}")
        for net in self.iter_networks():
            net.extend_grid(new_intervals)


def build_fbkan(
    decomposition: MultilevelDecomposition,
    widths: Sequence[int],
    intervals: int,
    degree: int,
    seed: int = 0,
    hidden_range=DEFAULT_HIDDEN_RANGE,
    bounds_samples: int = 1000,
) -> FbkanModel:
    """One freshly initialised KAN per subdomain, gridded on that subdomain's bounds."""
    if widths[0] != decomposition.dim:
        raise InvalidArgumentError(
            f"network input width {widths[0]} does not match domain dimension {decomposition.dim}"
        )
    generator = torch.Generator().manual_seed(int(seed))
    networks: List[List[KanNetwork]] = []
    for level in decomposition.levels:
        nets = []
        for j in range(level.count):
            bounds = subdomain_bounds(level, j, bounds_samples)
            nets.append(init_network(widths, intervals, degree, bounds, hidden_range, seed=generator))
        networks.append(nets)
    model = FbkanModel(decomposition, networks)
    logger.debug(
        f"built FBKAN with levels {decomposition.counts}, widths {list(widths)}, "
        f"{model.param_count()} parameters"
    )
    return model


def fbkan_forward(model: FbkanModel, x: torch.Tensor) -> torch.Tensor:
    return model(x)


def model_to_document(model: FbkanModel) -> Dict[str, Any]:
    return {
        "format": MODEL_FORMAT,
        "levels": [
            [[d.lo, d.hi, d.count, d.overlap] for d in level.dims] for level in model.decomposition.levels
        ],
        "networks": [[network_to_document(net) for net in nets] for nets in model.networks],
    }


def model_from_document(document: Dict[str, Any]) -> FbkanModel:
    if document.get("format") != MODEL_FORMAT:
        raise InvalidArgumentError(f"unsupported model format {document.get('format')!r}")
    decomposition = MultilevelDecomposition(
        tuple(
            TensorDecomposition(tuple(Decomposition1D(lo, hi, int(n), overlap) for lo, hi, n, overlap in level))
            for level in document["levels"]
        )
    )
    networks = [[network_from_document(doc) for doc in level] for level in document["networks"]]
    return FbkanModel(decomposition, networks)

