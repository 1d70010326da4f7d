from .artifacts import (
    load_checkpoint,
    read_metrics,
    read_predictions,
    save_checkpoint,
    write_metrics,
    write_predictions,
)
from .config import RunConfig, load_run_config, parse_override, preset_names, resolve_config
from .experiments import ReproductionReport, SweepReport, format_reproduction, read_sweep, reproduce, sweep
from .plots import plot_run
from .runner import RunSummary, read_summary, run
from .tables import TABLES, Check, Table, TableRow, get_table

__all__ = [
    "TABLES",
    "Check",
    "ReproductionReport",
    "RunConfig",
    "RunSummary",
    "SweepReport",
    "Table",
    "TableRow",
    "format_reproduction",
    "get_table",
    "load_checkpoint",
    "load_run_config",
    "parse_override",
    "plot_run",
    "preset_names",
    "read_metrics",
    "read_predictions",
    "read_summary",
    "read_sweep",
    "reproduce",
    "resolve_config",
    "run",
    "save_checkpoint",
    "sweep",
    "write_metrics",
    "write_predictions",
]
