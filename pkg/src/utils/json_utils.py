"""Utility functions for JSON documents written by the harness."""

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Union

import numpy as np
import torch

NON_FINITE = {"NaN": math.nan, "Infinity": math.inf, "-Infinity": -math.inf}


def to_jsonable(value: Any) -> Any:
    """Convert tensors, arrays and numpy scalars into plain JSON types.

    Args:
        value: Arbitrary nested structure of dicts, lists and numbers.

    Returns:
        The same structure built from ``dict``, ``list``, ``float``, ``int``, ``str`` and ``None``,
        with non-finite floats spelled as the strings ``"NaN"``, ``"Infinity"`` and ``"-Infinity"``.
    """
    if isinstance(value, torch.Tensor):
        return to_jsonable(value.detach().cpu().tolist())
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, float) and not math.isfinite(value):
        # JSON has no NaN/inf
        return "NaN" if math.isnan(value) else ("Infinity" if value > 0 else "-Infinity")
    return value


def from_jsonable(value: Any) -> Any:
    """Inverse of the non-finite encoding of ``to_jsonable``."""
    if isinstance(value, str) and value in NON_FINITE:
        return NON_FINITE[value]
    if isinstance(value, dict):
        return {k: from_jsonable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [from_jsonable(v) for v in value]
    return value


def dump_json(value: Any, path: Union[str, Path]) -> Path:
    """Write ``value`` as indented, key-sorted JSON and return the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_jsonable(value), indent=2, sort_keys=True), encoding="utf-8")
    return path


def load_json(path: Union[str, Path]) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return from_jsonable(json.load(f))


def stable_hash(value: Any) -> str:
    """SHA-256 of the canonical JSON encoding of ``value``."""
    payload = json.dumps(to_jsonable(value), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def hash_files(paths) -> str:
    """SHA-256 over the bytes of ``paths`` in sorted order."""
    digest = hashlib.sha256()
    for path in sorted(Path(p) for p in paths):
        digest.update(str(path.name).encode("utf-8"))
        digest.update(path.read_bytes())
    return digest.hexdigest()
