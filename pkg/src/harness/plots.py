"""Figures rendered from a finished run directory."""

import logging
import math
from pathlib import Path
from typing import List, Union

from src.utils.errors import InvalidArgumentError
from .artifacts import METRICS_FILE, PREDICTIONS_FILE, read_metrics, read_predictions

logger = logging.getLogger(__name__)


def plot_run(run_dir: Union[str, Path]) -> List[Path]:
    """Write ``loss.png`` and ``solution.png`` next to the run's tables."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    run_dir = Path(run_dir)
    if not (run_dir / METRICS_FILE).exists() or not (run_dir / PREDICTIONS_FILE).exists():
        raise InvalidArgumentError(f"{run_dir} does not contain {METRICS_FILE} and {PREDICTIONS_FILE}")
    written = []

    history = read_metrics(run_dir / METRICS_FILE)
    fig, ax = plt.subplots(figsize=(6, 4))
    iterations = [row["iteration"] for row in history]
    for column in ("loss_total", "loss_ic", "loss_bc", "loss_r", "loss_data"):
        values = [row[column] for row in history]
        if any(v > 0 for v in values):
            ax.semilogy(iterations, values, label=column.removeprefix("loss_"))
    evaluated = [(row["iteration"], row["rel_l2"]) for row in history if not math.isnan(row["rel_l2"])]
    if evaluated:
        ax.semilogy(*zip(*evaluated), "k--", label="rel. l2")
    ax.set_xlabel("iteration")
    ax.legend()
    fig.tight_layout()
    written.append(run_dir / "loss.png")
    fig.savefig(written[-1], dpi=150)
    plt.close(fig)

    columns = read_predictions(run_dir / PREDICTIONS_FILE)
    coords = [name for name in columns if name not in ("prediction", "exact", "error")]
    if len(coords) == 1:
        fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 6), sharex=True)
        x = columns[coords[0]]
        top.plot(x, columns["exact"], label="exact")
        top.plot(x, columns["prediction"], "--", label="prediction")
        top.legend()
        bottom.plot(x, columns["error"])
        bottom.set_ylabel("|error|")
        bottom.set_xlabel(coords[0])
    else:
        fig, axes = plt.subplots(1, 3, figsize=(13, 4))
        x, y = columns[coords[0]], columns[coords[1]]
        for ax, name in zip(axes, ("exact", "prediction", "error")):
            image = ax.tricontourf(x, y, columns[name], levels=50)
            fig.colorbar(image, ax=ax)
            ax.set_title(name)
            ax.set_xlabel(coords[0])
            ax.set_ylabel(coords[1])
    fig.tight_layout()
    written.append(run_dir / "solution.png")
    fig.savefig(written[-1], dpi=150)
    plt.close(fig)
    logger.info(f"wrote {', '.join(str(p) for p in written)}")
    return written
