from .data import data_test_1, data_test_2, multiscale_1d, oscillatory_2d
from .multilevel import laplacian_forcing, laplacian_solution, ml_physics_test_1, ml_physics_test_2
from .physics import (
    helmholtz_forcing,
    helmholtz_solution,
    ode_forcing,
    ode_solution,
    physics_test_1,
    physics_test_2,
    physics_test_3,
    wave_solution,
)
from .registry import PROBLEMS, get_problem, problem_names, problem_parameters
from .types import Constraint, ProblemDefaults, ProblemSpec

__all__ = [
    "PROBLEMS",
    "Constraint",
    "ProblemDefaults",
    "ProblemSpec",
    "data_test_1",
    "data_test_2",
    "get_problem",
    "helmholtz_forcing",
    "helmholtz_solution",
    "laplacian_forcing",
    "laplacian_solution",
    "ml_physics_test_1",
    "ml_physics_test_2",
    "multiscale_1d",
    "ode_forcing",
    "ode_solution",
    "oscillatory_2d",
    "physics_test_1",
    "physics_test_2",
    "physics_test_3",
    "problem_names",
    "problem_parameters",
    "wave_solution",
]
