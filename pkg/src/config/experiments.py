from pathlib import Path
from typing import Literal

# Tables the reproduce command knows about
TableId = Literal["data2", "pi2", "ml-pi", "wave", "physics1"]

# Axes the sweep command can vary
SweepAxis = Literal["subdomains", "noise"]

# Preset YAML documents ship inside the package
PRESET_DIR = Path(__file__).resolve().parent.parent / "presets"

# Overlap ratio used for every decomposition unless a config overrides it
DEFAULT_OVERLAP = 1.9

# POU threshold defining per-subdomain grid bounds
BOUNDS_THRESHOLD = 1e-4
