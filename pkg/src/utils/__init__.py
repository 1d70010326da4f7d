"""Utility functions for the FBKAN harness."""

from .decorators import log_io
from .json_utils import dump_json, from_jsonable, hash_files, load_json, stable_hash, to_jsonable

__all__ = ['dump_json', 'from_jsonable', 'hash_files', 'load_json', 'log_io', 'stable_hash', 'to_jsonable']
