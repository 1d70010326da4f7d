"""Run configuration: schema, presets and layered overrides."""

import copy
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.config import DEFAULT_OVERLAP, FBKAN_FAST_FACTOR, PRESET_DIR
from src.problems import ProblemSpec, get_problem
from src.training import LossWeights, SampleCounts, TrainSchedule
from src.utils.errors import ConfigError, FbkanError

logger = logging.getLogger(__name__)


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ProblemSection(Section):
    name: str
    params: Dict[str, Union[int, float, str]] = Field(default_factory=dict)


class ModelSection(Section):
    widths: List[int]
    grid: int = Field(gt=0)
    degree: int = Field(ge=0)
    levels: List[int] = Field(default_factory=lambda: [1], min_length=1)
    overlap: float = Field(DEFAULT_OVERLAP, gt=1)
    hidden_range: Tuple[float, float] = (-2.0, 2.0)
    bounds_samples: int = Field(1000, ge=100)

    @field_validator("widths")
    @classmethod
    def _widths(cls, v: List[int]) -> List[int]:
        if len(v) < 2 or any(w < 1 for w in v):
            raise ValueError("widths need at least two positive entries")
        return v


class WeightsSection(Section):
    lambda_ic: float = Field(0.0, ge=0)
    lambda_bc: float = Field(0.0, ge=0)
    lambda_r: float = Field(0.0, ge=0)
    lambda_data: float = Field(0.0, ge=0)


class CountsSection(Section):
    n_r: int = Field(0, ge=0)
    n_bc: int = Field(0, ge=0)
    n_ic: int = Field(0, ge=0)
    n_data: int = Field(0, ge=0)


class TrainingSection(Section):
    iterations: int = Field(ge=0)
    lr: float = Field(gt=0)
    lr_scale: float = Field(1.0, gt=0)
    grid_values: Optional[List[int]] = None
    grid_iterations: Optional[List[int]] = None
    weights: WeightsSection
    counts: CountsSection
    resample_residual: bool = False
    noise_level: float = Field(0.0, ge=0)
    eval_every: int = Field(100, ge=1)


class RunConfig(Section):
    """Everything a run needs; serialisable back to the YAML it was read from."""

    name: str = "run"
    problem: ProblemSection
    model: ModelSection
    training: TrainingSection
    seed: int = 0
    output_dir: Optional[str] = None
    checkpoint: Optional[str] = None
    fast: bool = False

    def schedule(self) -> TrainSchedule:
        """Grid schedule, learning rate and evaluation cadence.

        Without ``training.grid_values`` the grid stays at ``model.grid``.

        Raises:
            ConfigError: If the grid schedule does not start at ``model.grid``.
        """
        t = self.training
        if t.grid_values and t.grid_values[0] != self.model.grid:
            raise ConfigError(
                f"grid schedule must start at model.grid={self.model.grid}, got {t.grid_values[0]}",
                key="training.grid_values",
            )
        return TrainSchedule(
            iterations=t.iterations,
            lr_initial=t.lr,
            grid_values=tuple(t.grid_values or (self.model.grid,)),
            grid_iterations=tuple(t.grid_iterations or (0,)),
            lr_scale=t.lr_scale,
            resample_residual_each_iter=t.resample_residual,
            eval_every=t.eval_every,
        )

    def weights(self) -> LossWeights:
        return LossWeights(**self.training.weights.model_dump())

    def counts(self) -> SampleCounts:
        return SampleCounts(**self.training.counts.model_dump())

    def build_problem(self) -> ProblemSpec:
        return get_problem(self.problem.name, **self.problem.params)


def _error_key(error: ValidationError) -> str:
    first = error.errors()[0]
    return ".".join(str(part) for part in first["loc"]) or "<root>"


def deep_merge(base: Mapping[str, Any], update: Mapping[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(dict(base))
    for key, value in update.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def parse_override(text: str) -> Dict[str, Any]:
    """``"training.lr=0.01"`` -> ``{"training": {"lr": 0.01}}``; values are read as YAML."""
    key, sep, raw = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(f"override {text!r} is not of the form key=value", key=key or None)
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse value {raw!r}: {e}", key=key) from e
    nested: Dict[str, Any] = {}
    cursor = nested
    parts = key.split(".")
    for part in parts[:-1]:
        cursor = cursor.setdefault(part, {})
    cursor[parts[-1]] = value
    return nested


def preset_path(name_or_path: Union[str, Path]) -> Path:
    """A YAML file path, or the name of a shipped preset."""
    path = Path(name_or_path)
    if path.suffix in (".yaml", ".yml") and path.exists():
        return path
    shipped = PRESET_DIR / f"{name_or_path}.yaml"
    if shipped.exists():
        return shipped
    raise ConfigError(f"no config file or preset named {str(name_or_path)!r}; presets: {preset_names()}", key="config")


def preset_names() -> List[str]:
    return sorted(p.stem for p in PRESET_DIR.glob("*.yaml"))


def load_document(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"{path} is not valid YAML: {e}", key="config") from e
    if not isinstance(document, dict):
        raise ConfigError(f"{path} must contain a mapping", key="config")
    return document


def scale_for_fast(document: Dict[str, Any], factor: float = FBKAN_FAST_FACTOR) -> Dict[str, Any]:
    """Shrink iteration counts and grid events by ``factor``."""
    scaled = copy.deepcopy(document)
    training = scaled["training"]
    training["iterations"] = max(1, round(training["iterations"] * factor)) if training["iterations"] else 0
    if training.get("grid_iterations"):
        training["grid_iterations"] = [round(i * factor) for i in training["grid_iterations"]]
    training["eval_every"] = max(1, round(training.get("eval_every", 100) * factor))
    scaled["fast"] = True
    return scaled


def resolve_config(
    document: Mapping[str, Any],
    overrides: Sequence[str] = (),
    seed: Optional[int] = None,
    output_dir: Optional[str] = None,
    fast: bool = False,
) -> RunConfig:
    """Layer problem defaults, ``document``, ``--set`` overrides and CLI flags, then validate.

    Raises:
        ConfigError: Naming the dotted key at fault.
    """
    user = dict(document)
    for text in overrides:
        user = deep_merge(user, parse_override(text))
    if not isinstance(user.get("problem"), Mapping) or "name" not in user["problem"]:
        raise ConfigError("a problem name is required", key="problem.name")

    problem_section = user["problem"]
    try:
        problem = get_problem(problem_section["name"], **dict(problem_section.get("params") or {}))
    except FbkanError as e:
        raise ConfigError(str(e), key="problem") from e
    except TypeError as e:
        raise ConfigError(str(e), key="problem.params") from e

    merged = deep_merge(problem.defaults.to_config(), user)
    if seed is not None:
        merged["seed"] = seed
    if output_dir is not None:
        merged["output_dir"] = str(output_dir)
    if fast and not merged.get("fast"):
        merged = scale_for_fast(merged)

    try:
        config = RunConfig.model_validate(merged)
        config.schedule()
        config.weights()
    except ValidationError as e:
        raise ConfigError(e.errors()[0]["msg"], key=_error_key(e)) from e
    except ConfigError:
        raise
    except FbkanError as e:
        raise ConfigError(str(e), key="training") from e
    logger.debug(f"resolved config {config.name}: {config.model_dump()}")
    return config


def load_run_config(
    path_or_preset: Union[str, Path],
    overrides: Sequence[str] = (),
    seed: Optional[int] = None,
    output_dir: Optional[str] = None,
    fast: bool = False,
) -> RunConfig:
    document = load_document(preset_path(path_or_preset))
    document.setdefault("name", Path(str(path_or_preset)).stem)
    return resolve_config(document, overrides, seed, output_dir, fast)


def config_to_yaml(config: RunConfig) -> str:
    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=False)
