"""Physics-informed benchmarks: an ODE, the Helmholtz equation and the wave equation."""

import math

import torch

from src.diffengine import JetValue
from src.training import Box, LossWeights, SampleCounts
from src.utils.errors import InvalidArgumentError
from .types import Constraint, ProblemDefaults, ProblemSpec, face_constraint, zero_field


def _sin(a: float, x: torch.Tensor) -> torch.Tensor:
    return torch.sin(a * math.pi * x)


# ODE on [-4, 4]


def ode_solution(x: torch.Tensor) -> torch.Tensor:
    return torch.sin(4 * x[:, 0]) + torch.sin(40 * x[:, 0])


def ode_forcing(x: torch.Tensor) -> torch.Tensor:
    return 4 * torch.cos(4 * x[:, 0]) + 40 * torch.cos(40 * x[:, 0])


def physics_test_1() -> ProblemSpec:
    """``f'(x) = 4 cos(4x) + 40 cos(40x)`` with ``f(0) = 0`` on [-4, 4]."""

    def residual(x: torch.Tensor, jet: JetValue) -> torch.Tensor:
        return jet.first[:, 0] - ode_forcing(x)

    initial = Constraint(lambda n, rng: torch.zeros((n, 1), dtype=torch.float64), zero_field)
    defaults = ProblemDefaults(
        widths=(1, 10, 1),
        grid=5,
        degree=3,
        lr=0.01,
        lr_scale=0.8,
        iterations=4000,
        grid_values=(5, 10, 15, 20),
        grid_iterations=(0, 1000, 2000, 3000),
        weights=LossWeights(lambda_ic=1.0, lambda_r=1.0 / 40),
        counts=SampleCounts(n_r=400, n_ic=1),
        levels=(4,),
        resample_residual=True,
    )
    return ProblemSpec(
        name="physics1",
        domain=Box.of((-4.0, 4.0)),
        exact=ode_solution,
        defaults=defaults,
        residual=residual,
        residual_order=1,
        initial=initial,
    )


# Helmholtz on [-1, 1]^2


def helmholtz_solution(a1: float, a2: float):
    def exact(x: torch.Tensor) -> torch.Tensor:
        return _sin(a1, x[:, 0]) * _sin(a2, x[:, 1])

    return exact


def helmholtz_forcing(a1: float, a2: float, kh: float):
    """``q = (-(a1 pi)^2 - (a2 pi)^2 + kh^2) sin(a1 pi x) sin(a2 pi y)``."""

    def forcing(x: torch.Tensor) -> torch.Tensor:
        scale = -((a1 * math.pi) ** 2) - (a2 * math.pi) ** 2 + kh**2
        return scale * _sin(a1, x[:, 0]) * _sin(a2, x[:, 1])

    return forcing


HELMHOLTZ_VARIANTS = ("fixed", "extension", "narrow")


def helmholtz_problem(a1: float, a2: float, kh: float, defaults: ProblemDefaults, name: str, **params) -> ProblemSpec:
    forcing = helmholtz_forcing(a1, a2, kh)

    def residual(x: torch.Tensor, jet: JetValue) -> torch.Tensor:
        return jet.second_diag[:, 1] + jet.second_diag[:, 0] + kh**2 * jet.value - forcing(x)

    domain = Box.of((-1.0, 1.0), (-1.0, 1.0))
    return ProblemSpec(
        name=name,
        domain=domain,
        exact=helmholtz_solution(a1, a2),
        defaults=defaults,
        residual=residual,
        residual_order=2,
        boundary=face_constraint(domain, domain.faces(), zero_field),
        coordinates=("x", "y"),
        params={"a1": a1, "a2": a2, "kh": kh, **params},
    )


def physics_test_2(a1: float = 1.0, a2: float = 4.0, kh: float = 1.0, variant: str = "fixed") -> ProblemSpec:
    """Helmholtz equation with zero Dirichlet data and exact solution ``sin(a1 pi x) sin(a2 pi y)``.

    Variants follow the three architectures compared for this problem:
    ``fixed`` (k=5, g=5), ``extension`` (k=3, g 5 -> 10 -> 15) and ``narrow``
    (one hidden layer of 5).
    """
    common = dict(
        lr=0.005,
        weights=LossWeights(lambda_bc=1.0, lambda_r=0.01),
        counts=SampleCounts(n_r=800, n_bc=400),
        levels=(4,),
    )
    if variant == "fixed":
        iterations = 30000 if min(a1, a2) >= 6 else 10000
        defaults = ProblemDefaults(widths=(2, 10, 1), grid=5, degree=5, iterations=iterations, **common)
    elif variant == "extension":
        defaults = ProblemDefaults(
            widths=(2, 10, 1),
            grid=5,
            degree=3,
            iterations=10000,
            lr_scale=0.8,
            grid_values=(5, 10, 15),
            grid_iterations=(0, 3000, 6000),
            **common,
        )
    elif variant == "narrow":
        defaults = ProblemDefaults(widths=(2, 5, 1), grid=5, degree=5, iterations=10000, **common)
    else:
        raise InvalidArgumentError(f"unknown variant {variant!r}, expected one of {HELMHOLTZ_VARIANTS}")
    return helmholtz_problem(a1, a2, kh, defaults, "helmholtz", variant=variant)


# Wave equation on [0, 1] x [0, 1], coordinates (x, t)


def wave_solution(c: float):
    def exact(x: torch.Tensor) -> torch.Tensor:
        space, time = x[:, 0], x[:, 1]
        return _sin(1, space) * torch.cos(c * math.pi * time) + 0.5 * _sin(4, space) * torch.cos(4 * c * math.pi * time)

    return exact


def wave_initial_displacement(x: torch.Tensor) -> torch.Tensor:
    return _sin(1, x[:, 0]) + 0.5 * _sin(4, x[:, 0])


def physics_test_3(c: float = math.sqrt(2)) -> ProblemSpec:
    """``f_tt = c^2 f_xx`` with fixed ends, a two-mode initial displacement and zero initial velocity."""
    if c <= 0:
        raise InvalidArgumentError(f"wave speed must be positive, got {c}")

    def residual(x: torch.Tensor, jet: JetValue) -> torch.Tensor:
        return jet.second_diag[:, 1] - c**2 * jet.second_diag[:, 0]

    common = dict(
        grid=10,
        degree=5,
        weights=LossWeights(lambda_ic=1.0, lambda_bc=1.0, lambda_r=0.01),
        levels=(4,),
    )
    if math.isclose(c, 2.0):
        defaults = ProblemDefaults(
            widths=(2, 10, 10, 1), lr=0.0005, iterations=120000, counts=SampleCounts(n_r=1200, n_bc=200, n_ic=100), **common
        )
    else:
        defaults = ProblemDefaults(
            widths=(2, 10, 1), lr=0.001, iterations=60000, counts=SampleCounts(n_r=1000, n_bc=200, n_ic=100), **common
        )
    domain = Box.of((0.0, 1.0), (0.0, 1.0))
    return ProblemSpec(
        name="wave",
        domain=domain,
        exact=wave_solution(c),
        defaults=defaults,
        residual=residual,
        residual_order=2,
        boundary=face_constraint(domain, [(0, 0), (0, 1)], zero_field),
        initial=face_constraint(domain, [(1, 0)], wave_initial_displacement, [(1, zero_field)]),
        coordinates=("x", "t"),
        params={"c": c},
    )
