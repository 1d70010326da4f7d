"""Files a run leaves behind and readers for each of them."""

import csv
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import torch

from src.decomposition import FbkanModel, model_from_document, model_to_document
from src.training import HISTORY_COLUMNS
from src.utils.json_utils import dump_json, load_json

METRICS_FILE = "metrics.csv"
PREDICTIONS_FILE = "predictions.csv"
CHECKPOINT_FILE = "checkpoint.json"
SNAPSHOT_FILE = "snapshot.json"
SUMMARY_FILE = "summary.json"
CONFIG_FILE = "config.yaml"

PathLike = Union[str, Path]


def _cell(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return ""
    return value


def write_metrics(path: PathLike, history: Sequence[Dict[str, Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(HISTORY_COLUMNS)
        for row in history:
            writer.writerow([_cell(row[column]) for column in HISTORY_COLUMNS])
    return path


def read_metrics(path: PathLike) -> List[Dict[str, Any]]:
    """Rows of a metrics table; ``rel_l2`` is NaN on iterations without an evaluation."""
    rows = []
    with open(path, "r", newline="", encoding="utf-8") as f:
        for raw in csv.DictReader(f):
            row: Dict[str, Any] = {}
            for column in HISTORY_COLUMNS:
                cell = raw[column]
                if column in ("iteration", "g"):
                    row[column] = int(cell)
                else:
                    row[column] = float(cell) if cell != "" else math.nan
            rows.append(row)
    return rows


def write_predictions(
    path: PathLike,
    coordinates: Sequence[str],
    points: torch.Tensor,
    prediction: torch.Tensor,
    exact: torch.Tensor,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow([*coordinates, "prediction", "exact", "error"])
        for x, p, e in zip(points.tolist(), prediction.tolist(), exact.tolist()):
            writer.writerow([*x, p, e, abs(p - e)])
    return path


def read_predictions(path: PathLike) -> Dict[str, List[float]]:
    """Column name -> values."""
    with open(path, "r", newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader)
        columns: Dict[str, List[float]] = {name: [] for name in header}
        for row in reader:
            for name, cell in zip(header, row):
                columns[name].append(float(cell))
    return columns


def save_checkpoint(path: PathLike, model: FbkanModel) -> Path:
    path = Path(path)
    dump_json(model_to_document(model), path)
    return path


def load_checkpoint(path: PathLike) -> FbkanModel:
    return model_from_document(load_json(path))
