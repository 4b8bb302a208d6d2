"""Run the three-way comparison over several seeds and print the median table.

    python scripts/run_benchmark.py --repeats 10 --out runs/benchmark
"""

import argparse
import sys
from pathlib import Path

from rgsearch.harness import RunRecord
from rgsearch.harness.cli import main as cli_main

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data", default=str(ROOT / "data" / "processed.cleveland.data"))
    ap.add_argument("--config", default=None)
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--out", default=str(ROOT / "runs" / "benchmark"))
    args = ap.parse_args(argv)

    cli = ["-v", "compare", "--data", args.data, "--repeats", str(args.repeats), "--out", args.out]
    if args.config:
        cli += ["--config", args.config]
    if args.seed is not None:
        cli += ["--seed", str(args.seed)]
    code = cli_main(cli)
    if code:
        return code

    rec = RunRecord.load(Path(args.out) / "run.json")
    med = rec.medians()
    rgs, grid = med["randomized_grid"], med["grid"]
    print(f"fit ratio randomized_grid/grid: {rgs['fit_count'] / grid['fit_count']:.2%}")
    print(f"time ratio randomized_grid/grid: {rgs['duration'] / grid['duration']:.2%}")
    for s in rec.strategies():
        accs = " ".join(f"{o.accuracy:.3f}" for o in rec.of(s))
        print(f"{s:>16} accuracy per repeat: {accs}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
