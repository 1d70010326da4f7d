"""Multi-run experiments: table reproduction and one-axis sweeps."""

import csv
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel, Field

from src.config import FBKAN_FAST_TOLERANCE, FBKAN_OUTPUT_DIR, SweepAxis, TableId
from src.utils.decorators import log_io
from src.utils.errors import FbkanError, InvalidArgumentError
from src.utils.json_utils import dump_json
from .config import load_run_config
from .runner import run
from .tables import get_table

logger = logging.getLogger(__name__)


def run_job(job: Dict[str, Any]) -> Dict[str, Any]:
    """Run one (preset, overrides, seed) job; failures are reported instead of raised."""
    outcome = {"key": job["key"], "seed": job["seed"], "relative_l2": math.nan, "mean_relative_noise": math.nan}
    try:
        config = load_run_config(
            job["preset"], job["overrides"], seed=job["seed"], output_dir=job["output_dir"], fast=job["fast"]
        )
        summary = run(config)
    except FbkanError as e:
        logger.error(f"{job['key']} (seed {job['seed']}) failed: {e}")
        outcome["error"] = str(e)
        return outcome
    outcome.update(
        relative_l2=summary.relative_l2,
        mean_relative_noise=summary.mean_relative_noise,
        final_grid=summary.final_grid,
        param_count=summary.param_count,
        wall_time_s=summary.wall_time_s,
    )
    return outcome


def run_jobs(jobs: List[Dict[str, Any]], workers: int = 1) -> List[Dict[str, Any]]:
    """Results in job order; each job writes to its own directory and draws from its own seed."""
    if workers <= 1:
        return [run_job(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_job, jobs))


def _median(values: Sequence[float]) -> float:
    finite = [v for v in values if math.isfinite(v)]
    return statistics.median(finite) if len(finite) == len(values) and finite else math.nan


def _slug(text: str) -> str:
    return "".join(c if c.isalnum() or c in "-=." else "_" for c in text).strip("_")


class RowResult(BaseModel):
    key: str
    published: Optional[float] = None
    obtained: float
    per_seed: List[float]
    ratio: Optional[float] = None
    final_grid: Optional[int] = None
    errors: List[str] = Field(default_factory=list)


class CheckResult(BaseModel):
    description: str
    required: bool
    passed: bool


class ReproductionReport(BaseModel):
    table: str
    fast: bool
    seeds: List[int]
    rows: List[RowResult]
    checks: List[CheckResult]
    passed: bool


@log_io
def reproduce(
    table_id: TableId,
    seeds: Sequence[int] = (0,),
    fast: bool = False,
    workers: int = 1,
    output_dir: Optional[str] = None,
    required_only: bool = False,
) -> ReproductionReport:
    """Run every row of a published table and compare against its values and bounds.

    The report passes when every required check passes; a row whose runs failed
    fails every check that reads it.
    """
    table = get_table(table_id)
    out = Path(output_dir or Path(FBKAN_OUTPUT_DIR) / "reproduce") / table.id
    rows = table.required_rows() if required_only else list(table.rows)
    jobs = [
        {
            "key": row.key,
            "preset": row.preset,
            "overrides": list(row.overrides),
            "seed": seed,
            "output_dir": str(out / _slug(row.key) / f"seed-{seed}"),
            "fast": fast,
        }
        for row in rows
        for seed in seeds
    ]
    logger.info(f"reproducing {table.id}: {len(rows)} rows x {len(seeds)} seeds")
    outcomes = run_jobs(jobs, workers)

    results: Dict[str, float] = {}
    row_results = []
    for row in rows:
        mine = [o for o in outcomes if o["key"] == row.key]
        obtained = _median([o["relative_l2"] for o in mine])
        results[row.key] = obtained
        row_results.append(
            RowResult(
                key=row.key,
                published=row.published,
                obtained=obtained,
                per_seed=[o["relative_l2"] for o in mine],
                ratio=obtained / row.published if row.published and math.isfinite(obtained) else None,
                final_grid=mine[0].get("final_grid"),
                errors=[o["error"] for o in mine if "error" in o],
            )
        )

    tolerance = FBKAN_FAST_TOLERANCE if fast else 1.0
    check_results = []
    for check in table.checks:
        keys = [check.a] + ([check.b] if check.b else [])
        if any(k not in results for k in keys):
            continue
        finite = all(math.isfinite(results[k]) for k in keys)
        passed = finite and check.evaluate(results, table.published, tolerance)
        check_results.append(CheckResult(description=check.describe(tolerance), required=check.required, passed=passed))

    report = ReproductionReport(
        table=table.id,
        fast=fast,
        seeds=list(seeds),
        rows=row_results,
        checks=check_results,
        passed=all(c.passed for c in check_results if c.required),
    )
    write_reproduction(out, report)
    return report


def write_reproduction(out: Path, report: ReproductionReport) -> None:
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "report.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["row", "published", "obtained", "ratio"])
        for row in report.rows:
            writer.writerow([row.key, row.published if row.published is not None else "", row.obtained, row.ratio or ""])
    dump_json(report.model_dump(), out / "report.json")


def format_reproduction(report: ReproductionReport) -> str:
    lines = [f"{'row':<32} {'published':>10} {'obtained':>10} {'ratio':>7}"]
    for row in report.rows:
        published = f"{row.published:.4g}" if row.published is not None else "-"
        ratio = f"{row.ratio:.2f}" if row.ratio is not None else "-"
        lines.append(f"{row.key:<32} {published:>10} {row.obtained:>10.4g} {ratio:>7}")
    lines.append("")
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        lines.append(f"[{status}] {check.description}{'' if check.required else ' (informational)'}")
    return "\n".join(lines)


class SweepPoint(BaseModel):
    value: float
    relative_l2: float
    mean_relative_noise: float
    baseline_relative_l2: Optional[float] = None


class SweepReport(BaseModel):
    axis: str
    preset: str
    points: List[SweepPoint]
    failed: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failed


def _axis_override(axis: SweepAxis, value: float) -> str:
    if axis == "subdomains":
        if int(value) != value or value < 1:
            raise InvalidArgumentError(f"subdomain counts must be positive integers, got {value}")
        return f"model.levels=[{int(value)}]"
    if axis == "noise":
        return f"training.noise_level={value}"
    raise InvalidArgumentError(f"unknown sweep axis {axis!r}")


@log_io
def sweep(
    axis: SweepAxis,
    preset: str,
    values: Sequence[float],
    seeds: Sequence[int] = (0,),
    baseline: bool = False,
    overrides: Sequence[str] = (),
    fast: bool = False,
    workers: int = 1,
    output_dir: Optional[str] = None,
) -> SweepReport:
    """One run per value along ``axis``; ``baseline`` adds a single-network run per value.

    Runs that raise or end with a non-finite error are listed in ``failed``.
    """
    out = Path(output_dir or Path(FBKAN_OUTPUT_DIR) / "sweep") / f"{Path(preset).stem}-{axis}"
    variants = {"model": []}
    if baseline:
        variants["baseline"] = ["model.levels=[1]"]
    jobs = [
        {
            "key": f"{variant}:{value}",
            "preset": preset,
            "overrides": [*overrides, _axis_override(axis, value), *extra],
            "seed": seed,
            "output_dir": str(out / f"{variant}-{_slug(str(value))}" / f"seed-{seed}"),
            "fast": fast,
        }
        for value in values
        for variant, extra in variants.items()
        for seed in seeds
    ]
    outcomes = run_jobs(jobs, workers)

    def median_of(key: str, field: str) -> float:
        return _median([o[field] for o in outcomes if o["key"] == key])

    points = [
        SweepPoint(
            value=value,
            relative_l2=median_of(f"model:{value}", "relative_l2"),
            mean_relative_noise=median_of(f"model:{value}", "mean_relative_noise"),
            baseline_relative_l2=median_of(f"baseline:{value}", "relative_l2") if baseline else None,
        )
        for value in values
    ]
    failed = [
        f"{o['key']} seed {o['seed']}"
        for o in outcomes
        if "error" in o or not math.isfinite(o["relative_l2"])
    ]
    if failed:
        logger.error(f"sweep {axis} over {preset}: {len(failed)} of {len(outcomes)} runs failed")
    report = SweepReport(axis=axis, preset=preset, points=points, failed=failed)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["value", "relative_l2", "mean_relative_noise", "baseline_relative_l2"])
        for p in points:
            writer.writerow([p.value, p.relative_l2, p.mean_relative_noise, "" if p.baseline_relative_l2 is None else p.baseline_relative_l2])
    return report


def read_sweep(path) -> List[Dict[str, float]]:
    with open(path, "r", newline="", encoding="utf-8") as f:
        return [{k: float(v) if v != "" else math.nan for k, v in row.items()} for row in csv.DictReader(f)]
