"""Problem lookup by name, as used by run configurations."""

import inspect
import logging
from typing import Any, Callable, Dict, List

from src.utils.errors import InvalidArgumentError
from .data import data_test_1, data_test_2
from .multilevel import ml_physics_test_1, ml_physics_test_2
from .physics import physics_test_1, physics_test_2, physics_test_3
from .types import ProblemSpec

logger = logging.getLogger(__name__)

PROBLEMS: Dict[str, Callable[..., ProblemSpec]] = {
    "data1": data_test_1,
    "data2": data_test_2,
    "physics1": physics_test_1,
    "helmholtz": physics_test_2,
    "wave": physics_test_3,
    "ml-helmholtz": ml_physics_test_1,
    "ml-laplacian": ml_physics_test_2,
}


def problem_names() -> List[str]:
    return sorted(PROBLEMS)


def problem_parameters(name: str) -> List[str]:
    return list(inspect.signature(_factory(name)).parameters)


def _factory(name: str) -> Callable[..., ProblemSpec]:
    try:
        return PROBLEMS[name]
    except KeyError:
        raise InvalidArgumentError(f"unknown problem {name!r}, expected one of {problem_names()}") from None


def get_problem(name: str, **params: Any) -> ProblemSpec:
    """Build the named problem; ``params`` override its constructor defaults."""
    factory = _factory(name)
    unknown = set(params) - set(problem_parameters(name))
    if unknown:
        raise InvalidArgumentError(f"problem {name!r} does not take parameters {sorted(unknown)}")
    logger.debug(f"building problem {name} with {params}")
    return factory(**params)
