"""Data-driven benchmarks: fit a known function from (optionally noisy) samples."""

import math

import torch

from src.training import Box, LossWeights, SampleCounts
from src.utils.errors import InvalidArgumentError
from .types import ProblemDefaults, ProblemSpec

DATA_ONLY = LossWeights(lambda_data=1.0)


def multiscale_1d(x: torch.Tensor) -> torch.Tensor:
    """``exp(sin(0.3 pi x^2))``."""
    return torch.exp(torch.sin(0.3 * math.pi * x[:, 0] ** 2))


def oscillatory_2d(x: torch.Tensor) -> torch.Tensor:
    """``sin(6 pi x^2) sin(8 pi y^2)``."""
    return torch.sin(6 * math.pi * x[:, 0] ** 2) * torch.sin(8 * math.pi * x[:, 1] ** 2)


def data_test_1(study: str = "scaling") -> ProblemSpec:
    """One-dimensional function on [0, 8] whose frequency grows with x.

    ``study`` picks the sample count: 1200 points for subdomain scaling, 600
    for the noise study.
    """
    if study not in ("scaling", "noise"):
        raise InvalidArgumentError(f"unknown study {study!r}, expected 'scaling' or 'noise'")
    defaults = ProblemDefaults(
        widths=(1, 5, 1),
        grid=5,
        degree=3,
        lr=0.04,
        iterations=4000,
        weights=DATA_ONLY,
        counts=SampleCounts(n_data=1200 if study == "scaling" else 600),
        levels=(4,),
    )
    return ProblemSpec(
        name="data1",
        domain=Box.of((0.0, 8.0)),
        exact=multiscale_1d,
        defaults=defaults,
        data_driven=True,
        params={"study": study},
    )


def data_test_2(variant: str = "fixed") -> ProblemSpec:
    """Two-dimensional fine-scale oscillations on [0, 1]^2.

    ``fixed`` trains a [2, 10, 1] network on a g=5 grid; ``extension`` trains
    [2, 5, 1] while the grid grows 5, 10, 25, 30 every 600 iterations.
    """
    common = dict(degree=3, lr=0.02, iterations=2400, weights=DATA_ONLY, counts=SampleCounts(n_data=10000), levels=(4,))
    if variant == "fixed":
        defaults = ProblemDefaults(widths=(2, 10, 1), grid=5, **common)
    elif variant == "extension":
        defaults = ProblemDefaults(
            widths=(2, 5, 1),
            grid=5,
            lr_scale=0.8,
            grid_values=(5, 10, 25, 30),
            grid_iterations=(0, 600, 1200, 1800),
            **common,
        )
    else:
        raise InvalidArgumentError(f"unknown variant {variant!r}, expected 'fixed' or 'extension'")
    return ProblemSpec(
        name="data2",
        domain=Box.of((0.0, 1.0), (0.0, 1.0)),
        exact=oscillatory_2d,
        defaults=defaults,
        data_driven=True,
        coordinates=("x", "y"),
        params={"variant": variant},
    )
