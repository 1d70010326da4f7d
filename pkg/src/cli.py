import argparse
import json
import logging
import sys
from typing import List, Optional, get_args

from src.config import FBKAN_LOG_LEVEL, SweepAxis, TableId
from src.utils.errors import ConfigError, FbkanError, TrainingAborted

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_ABORTED = 3


def _floats(text: str) -> List[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> List[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fbkan", description="Finite-basis KAN experiments")
    parser.add_argument("--log-level", default=FBKAN_LOG_LEVEL, help="Logging level")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Train one model")
    run.add_argument("--config", required=True, help="YAML file or shipped preset name")
    run.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help="Artifact directory")
    run.add_argument("--checkpoint", help="Resume from a checkpoint.json")
    run.add_argument("--fast", action="store_true", help="Scaled-down iteration counts")

    reproduce = commands.add_parser("reproduce", help="Reproduce a published error table")
    reproduce.add_argument("table", choices=get_args(TableId))
    reproduce.add_argument("--seeds", type=_ints, default=[0], help="Comma separated, median is reported")
    reproduce.add_argument("--workers", type=int, default=1)
    reproduce.add_argument("--out")
    reproduce.add_argument("--fast", action="store_true")
    reproduce.add_argument("--required-only", action="store_true", help="Only rows the acceptance checks read")

    sweep = commands.add_parser("sweep", help="Vary one setting of a preset")
    sweep.add_argument("axis", choices=get_args(SweepAxis))
    sweep.add_argument("--preset", required=True)
    sweep.add_argument("--values", type=_floats, required=True, help="Comma separated")
    sweep.add_argument("--baseline", action="store_true", help="Also train a single KAN per value")
    sweep.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    sweep.add_argument("--seeds", type=_ints, default=[0])
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--out")
    sweep.add_argument("--fast", action="store_true")

    plot = commands.add_parser("plot", help="Render figures from a run directory")
    plot.add_argument("run_dir")
    return parser


def dispatch(args: argparse.Namespace) -> int:
    from src.harness import format_reproduction, load_run_config, plot_run, reproduce, run, sweep

    if args.command == "run":
        overrides = list(args.overrides)
        if args.checkpoint:
            overrides.append(f"checkpoint={args.checkpoint}")
        config = load_run_config(args.config, overrides, seed=args.seed, output_dir=args.out, fast=args.fast)
        summary = run(config)
        print(json.dumps(summary.model_dump(exclude={"config"}), indent=2))
        return EXIT_OK
    if args.command == "reproduce":
        report = reproduce(
            args.table, args.seeds, fast=args.fast, workers=args.workers, output_dir=args.out,
            required_only=args.required_only,
        )
        print(format_reproduction(report))
        return EXIT_OK if report.passed else EXIT_FAILED
    if args.command == "sweep":
        report = sweep(
            args.axis, args.preset, args.values, seeds=args.seeds, baseline=args.baseline,
            overrides=args.overrides, fast=args.fast, workers=args.workers, output_dir=args.out,
        )
        print(json.dumps(report.model_dump(), indent=2))
        return EXIT_OK if report.passed else EXIT_FAILED
    for path in plot_run(args.run_dir):
        print(path)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    try:
        return dispatch(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except TrainingAborted as e:
        print(f"training aborted: {e}", file=sys.stderr)
        return EXIT_ABORTED
    except FbkanError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
