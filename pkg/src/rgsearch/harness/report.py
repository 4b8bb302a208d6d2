"""Rendering a RunRecord as a comparison table, a CSV summary and JSON."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict, Iterable, List

from .experiment import RunRecord

FORMATS = ("table", "csv", "json")
COLUMNS = (("accuracy", "Accuracy"), ("precision", "Precision"), ("recall", "Recall"),
           ("f1", "F1 Score"), ("duration", "Time-Taken(Seconds)"))
EXTRA = (("auc", "AUC"), ("fit_count", "Fits"))
LABELS = {"random": "Random Search", "grid": "Grid Search", "randomized_grid": "Randomized-Grid"}


class ReportError(ValueError):
    pass


def _cell(value: float) -> str:
    """Two-decimal value followed by the full-precision value."""
    return f"{value:.2f} ({value!r})"


def render_table(record: RunRecord) -> str:
    if not record.outcomes:
        raise ReportError("record holds no strategy results")
    medians = record.medians()
    n_rep = len({o.repeat for o in record.outcomes})
    header = ["Strategy", *(t for _, t in COLUMNS), *(t for _, t in EXTRA)]
    rows = []
    for s, med in medians.items():
        cells = [LABELS.get(s, s)]
        for key, _ in COLUMNS + EXTRA:
            v = med[key]
            cells.append(str(int(v)) if key == "fit_count" and v == int(v) else _cell(float(v)))
        rows.append(cells)
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    lines = [f"Decision tree tuning comparison ({'median of %d repeats' % n_rep if n_rep > 1 else 'single run'})",
             "Cells: value at 2 decimals (full precision)", ""]
    for r in [header, *rows]:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    lines.append("")
    for s in medians:
        best = record.of(s)[0]
        lines.append(f"{LABELS.get(s, s)} best configuration (repeat 0): {best.best_config}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> Dict[str, Dict[str, tuple]]:
    """Recover ``{label: {column: (two_decimal, full)}}`` from a rendered table."""
    out = {}
    for line in text.splitlines():
        label = next((l for l in LABELS.values() if line.startswith(l + " ")), None)
        if label is None or "best configuration" in line:
            continue
        body = line[len(label):].split()
        values = {}
        i = 0
        for key, _ in COLUMNS + EXTRA:
            if body[i].startswith("(") or i + 1 < len(body) and body[i + 1].startswith("("):
                values[key] = (body[i], body[i + 1].strip("()"))
                i += 2
            else:
                values[key] = (body[i], body[i])
                i += 1
        out[label] = values
    return out


def write_summary_csv(record: RunRecord, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        keys = [k for k, _ in COLUMNS + EXTRA]
        w.writerow(["strategy", *keys])
        for s, med in record.medians().items():
            w.writerow([s, *(repr(med[k]) for k in keys)])
    return path


def emit_report(record: RunRecord, out_dir, formats: Iterable[str] = FORMATS) -> List[Path]:
    """Write ``report.txt``, ``summary.csv`` and/or ``run.json`` into ``out_dir``."""
    formats = list(formats)
    bad = set(formats) - set(FORMATS)
    if bad:
        raise ReportError(f"unknown report formats {sorted(bad)}")
    if not record.outcomes:
        raise ReportError("record holds no strategy results")
    out = Path(out_dir)
    if not out.is_dir():
        raise ReportError(f"output directory {out} does not exist")
    written = []
    if "table" in formats:
        p = out / "report.txt"
        p.write_text(render_table(record))
        written.append(p)
    if "csv" in formats:
        written.append(write_summary_csv(record, out / "summary.csv"))
    if "json" in formats:
        written.append(record.save(out / "run.json"))
    return written
