"""Benchmarks for multilevel decompositions: high-frequency Helmholtz and a multiscale Laplacian."""

import math

import torch

from src.diffengine import JetValue
from src.training import Box, LossWeights, SampleCounts
from src.utils.errors import InvalidArgumentError
from .physics import helmholtz_problem
from .types import ProblemDefaults, ProblemSpec, face_constraint, zero_field

MULTILEVEL_LEVELS = (1, 4, 16)


def ml_physics_test_1(a: float = 8.0, kh: float = 1.0) -> ProblemSpec:
    """Helmholtz with ``a1 = a2 = a`` and the long multilevel training budget."""
    defaults = ProblemDefaults(
        widths=(2, 10, 1),
        grid=5,
        degree=5,
        lr=0.005,
        iterations=30000,
        weights=LossWeights(lambda_bc=1.0, lambda_r=0.01),
        counts=SampleCounts(n_r=800, n_bc=400),
        levels=MULTILEVEL_LEVELS,
    )
    return helmholtz_problem(a, a, kh, defaults, "ml-helmholtz", a=a)


def laplacian_solution(M: int):
    """``(1/M) sum_{i=1..M} sin(2^i pi x) sin(2^i pi y)``."""

    def exact(x: torch.Tensor) -> torch.Tensor:
        total = torch.zeros(x.shape[0], dtype=torch.float64)
        for i in range(1, M + 1):
            w = 2**i * math.pi
            total = total + torch.sin(w * x[:, 0]) * torch.sin(w * x[:, 1])
        return total / M

    return exact


def laplacian_forcing(M: int):
    """``(2/M) sum_{i=1..M} (2^i pi)^2 sin(2^i pi x) sin(2^i pi y)``."""

    def forcing(x: torch.Tensor) -> torch.Tensor:
        total = torch.zeros(x.shape[0], dtype=torch.float64)
        for i in range(1, M + 1):
            w = 2**i * math.pi
            total = total + w**2 * torch.sin(w * x[:, 0]) * torch.sin(w * x[:, 1])
        return 2 * total / M

    return forcing


def ml_physics_test_2(M: int = 5) -> ProblemSpec:
    """``-laplace(u) = f`` on [0, 1]^2 with ``M`` superposed scales and zero Dirichlet data."""
    if int(M) != M or M < 1:
        raise InvalidArgumentError(f"number of scales must be a positive integer, got {M}")
    M = int(M)
    forcing = laplacian_forcing(M)

    def residual(x: torch.Tensor, jet: JetValue) -> torch.Tensor:
        return -jet.second_diag.sum(dim=1) - forcing(x)

    defaults = ProblemDefaults(
        widths=(2, 10, 1),
        grid=5,
        degree=5,
        lr=0.005,
        iterations=30000,
        weights=LossWeights(lambda_bc=1.0, lambda_r=0.001),
        counts=SampleCounts(n_r=800, n_bc=400),
        levels=MULTILEVEL_LEVELS,
    )
    domain = Box.of((0.0, 1.0), (0.0, 1.0))
    return ProblemSpec(
        name="ml-laplacian",
        domain=domain,
        exact=laplacian_solution(M),
        defaults=defaults,
        residual=residual,
        residual_order=2,
        boundary=face_constraint(domain, domain.faces(), zero_field),
        coordinates=("x", "y"),
        params={"M": M},
    )
