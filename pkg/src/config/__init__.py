from .env import (
    FBKAN_OUTPUT_DIR,
    FBKAN_LOG_LEVEL,
    FBKAN_FAST_FACTOR,
    FBKAN_FAST_TOLERANCE,
    FBKAN_NUM_THREADS,
    FBKAN_RUN_SLOW,
)
from .experiments import (
    TableId,
    SweepAxis,
    PRESET_DIR,
    DEFAULT_OVERLAP,
    BOUNDS_THRESHOLD,
)

__all__ = [
    # Environment
    "FBKAN_OUTPUT_DIR",
    "FBKAN_LOG_LEVEL",
    "FBKAN_FAST_FACTOR",
    "FBKAN_FAST_TOLERANCE",
    "FBKAN_NUM_THREADS",
    "FBKAN_RUN_SLOW",
    # Experiments
    "TableId",
    "SweepAxis",
    "PRESET_DIR",
    "DEFAULT_OVERLAP",
    "BOUNDS_THRESHOLD",
]
