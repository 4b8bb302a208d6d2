"""Rebuild ``processed.cleveland.data`` from the copy bundled with Orange3.

The UCI archive is not always reachable, but the Orange3 wheel on PyPI ships
the same 303 Cleveland rows (label already collapsed to 0/1) as a tab file
with symbolic categories. This script maps them back to the UCI numeric codes
and writes the 14-field comma-separated format.

    python scripts/build_cleveland_data.py --out data/processed.cleveland.data
"""

import argparse
import glob
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

MEMBER = "Orange/datasets/heart_disease.tab"

CODES = {
    1: {"female": 0, "male": 1},
    2: {"typical ang": 1, "atypical ang": 2, "non-anginal": 3, "asymptomatic": 4},
    6: {"normal": 0, "ST-T abnormal": 1, "left vent hypertrophy": 2},
    10: {"upsloping": 1, "flat": 2, "downsloping": 3},
    12: {"normal": 3, "fixed defect": 6, "reversable defect": 7},
}


def fetch_wheel(dest):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "-q", "-d", dest, "Orange3"],
        check=True,
    )
    wheels = glob.glob(str(Path(dest) / "*.whl"))
    if not wheels:
        raise SystemExit("pip did not produce an Orange3 wheel")
    return wheels[0]


def fmt(value):
    return "?" if value is None else f"{float(value):.1f}"


def convert(tab_text):
    lines = tab_text.splitlines()[3:]  # name, type and flag header rows
    out = []
    for line in lines:
        fields = line.split("\t")
        if len(fields) != 14:
            raise ValueError(f"unexpected field count {len(fields)}: {line!r}")
        row = []
        for j, raw in enumerate(fields):
            if raw in ("?", ""):
                row.append("?")
            elif j in CODES:
                row.append(fmt(CODES[j][raw]))
            elif j == 13:
                row.append(str(int(raw)))
            else:
                row.append(fmt(raw))
        out.append(",".join(row))
    return "\n".join(out) + "\n"


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--wheel", help="path to an already downloaded Orange3 wheel")
    parser.add_argument("--out", default="data/processed.cleveland.data")
    args = parser.parse_args(argv)

    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel or fetch_wheel(tmp)
        text = zipfile.ZipFile(wheel).read(MEMBER).decode("utf-8")
    data = convert(text)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(data)
    print(f"wrote {len(data.splitlines())} rows to {args.out}")


if __name__ == "__main__":
    main()
