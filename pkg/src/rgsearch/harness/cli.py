"""Command-line entry point: ``tune``, ``compare`` and ``report``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from ..search.strategies import STRATEGIES
from .config import ExperimentConfig
from .experiment import RunRecord, StageError, run_experiment
from .report import ReportError, emit_report


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML experiment config (default: bundled default.yaml)")
    p.add_argument("--data", help="path to the comma-separated data file")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--budget", type=int, help="random-stage budget m")
    p.add_argument("--out", help="output directory")
    p.add_argument("--repeats", type=int, help="number of seeded repetitions")
    p.add_argument("--n-jobs", type=int, dest="n_jobs", help="worker threads per search")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rgsearch", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    tune = sub.add_parser("tune", help="run one search strategy")
    _common(tune)
    tune.add_argument("--strategy", choices=STRATEGIES, default="randomized_grid")

    compare = sub.add_parser("compare", help="run all strategies on the same split")
    _common(compare)

    report = sub.add_parser("report", help="re-render a stored run.json")
    report.add_argument("--out", required=True, help="directory holding run.json")
    return parser


def _load_config(args, strategy: str) -> ExperimentConfig:
    return ExperimentConfig.load(args.config, data=args.data, seed=args.seed, budget=args.budget,
                                 out=args.out, repeats=args.repeats, n_jobs=args.n_jobs,
                                 strategy=strategy)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "report":
            out = Path(args.out)
            try:
                record = RunRecord.load(out / "run.json")
            except (OSError, ValueError, TypeError) as exc:
                raise StageError("load-record", exc) from exc
            paths = emit_report(record, out, ("table", "csv"))
        else:
            strategy = args.strategy if args.command == "tune" else "compare_all"
            try:
                config = _load_config(args, strategy)
            except (OSError, ValueError, TypeError) as exc:
                raise StageError("config", exc) from exc
            record = run_experiment(config)
            paths = emit_report(record, config.out)
        print((Path(paths[0]).read_text() if paths[0].name == "report.txt" else ""), end="")
        for p in paths:
            print(f"wrote {p}")
        return 0
    except (StageError, ReportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
