import functools
import logging
import time
from typing import Any, Callable

logger = logging.getLogger(__name__)


def log_io(func: Callable) -> Callable:
    """Log entry, elapsed wall time and failures of a harness operation."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        name = func.__qualname__
        logger.debug(f"{name} started")
        start = time.perf_counter()
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            logger.error(f"{name} failed after {time.perf_counter() - start:.2f}s: {e!r}")
            raise
        logger.debug(f"{name} finished in {time.perf_counter() - start:.2f}s")
        return result

    return wrapper
