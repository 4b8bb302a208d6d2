"""Confusion-matrix metrics, ROC curves and trapezoid AUC for binary labels.

Class 1 means disease present. Precision, recall and F1 with a zero
denominator are reported as 0 and listed in ``MetricReport.degenerate`` so a
search can keep scoring pathological configurations.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def as_dict(self) -> dict:
        return {"tp": self.tp, "tn": self.tn, "fp": self.fp, "fn": self.fn}


class RocPoint(NamedTuple):
    threshold: float
    tpr: float
    fpr: float


def _binary(values, name) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0 and 1")
    return arr.astype(np.int64)


def confusion(predicted, actual) -> ConfusionMatrix:
    pred = _binary(predicted, "predicted")
    act = _binary(actual, "actual")
    if pred.shape != act.shape:
        raise ValueError(f"length mismatch: {pred.size} predictions for {act.size} labels")
    if pred.size == 0:
        raise ValueError("cannot build a confusion matrix from zero samples")
    tp = int(np.count_nonzero((pred == 1) & (act == 1)))
    tn = int(np.count_nonzero((pred == 0) & (act == 0)))
    fp = int(np.count_nonzero((pred == 1) & (act == 0)))
    fn = int(np.count_nonzero((pred == 0) & (act == 1)))
    return ConfusionMatrix(tp, tn, fp, fn)


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise ValueError("accuracy of an empty confusion matrix is undefined")
    return (cm.tp + cm.tn) / cm.total


def precision(cm: ConfusionMatrix) -> float:
    denom = cm.tp + cm.fp
    return cm.tp / denom if denom else 0.0


def recall(cm: ConfusionMatrix) -> float:
    denom = cm.tp + cm.fn
    return cm.tp / denom if denom else 0.0


def f1(cm: ConfusionMatrix) -> float:
    p, r = precision(cm), recall(cm)
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def degenerate_metrics(cm: ConfusionMatrix) -> Tuple[str, ...]:
    """Names of metrics whose value is the zero-denominator convention."""
    flags = []
    if cm.tp + cm.fp == 0:
        flags.append("precision")
    if cm.tp + cm.fn == 0:
        flags.append("recall")
    if precision(cm) + recall(cm) == 0:
        flags.append("f1")
    return tuple(flags)


def roc_curve(scores, actual) -> List[RocPoint]:
    """ROC points for thresholds +inf followed by the distinct scores, descending.

    A sample is predicted positive when ``score >= threshold``; tied scores
    therefore move in one step.
    """
    s = np.asarray(scores, dtype=np.float64)
    y = _binary(actual, "actual")
    if s.shape != y.shape:
        raise ValueError(f"length mismatch: {s.size} scores for {y.size} labels")
    n_pos = int(y.sum())
    n_neg = int(y.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs both classes among the labels")

    order = np.argsort(-s, kind="mergesort")
    s_sorted = s[order]
    y_sorted = y[order]
    tps = np.cumsum(y_sorted)
    fps = np.cumsum(1 - y_sorted)
    # last index of each run of equal scores
    last = np.r_[np.flatnonzero(np.diff(s_sorted) != 0), s.size - 1]
    points = [RocPoint(math.inf, 0.0, 0.0)]
    for i in last:
        points.append(RocPoint(float(s_sorted[i]), float(tps[i] / n_pos), float(fps[i] / n_neg)))
    return points


def auc(roc: Sequence[RocPoint]) -> float:
    """Trapezoid area under a ROC curve, summed over ascending FPR."""
    if len(roc) < 2:
        raise ValueError("AUC needs at least two ROC points")
    pts = sorted(roc, key=lambda p: (p.fpr, p.tpr))
    area = 0.0
    for a, b in zip(pts, pts[1:]):
        area += (a.tpr + b.tpr) / 2.0 * (b.fpr - a.fpr)
    return float(area)


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    auc: float
    confusion: ConfusionMatrix
    roc: Tuple[RocPoint, ...] = field(repr=False)
    degenerate: Tuple[str, ...] = ()

    def scalars(self) -> dict:
        return {"accuracy": self.accuracy, "precision": self.precision,
                "recall": self.recall, "f1": self.f1, "auc": self.auc}

    def is_consistent(self, tol: float = 1e-12) -> bool:
        """Every scalar agrees with the stored confusion matrix and ROC points."""
        cm = self.confusion
        expected = {"accuracy": accuracy(cm), "precision": precision(cm), "recall": recall(cm),
                    "f1": f1(cm), "auc": auc(self.roc) if len(self.roc) >= 2 else float("nan")}
        got = self.scalars()
        return all(abs(got[k] - v) <= tol or (math.isnan(v) and math.isnan(got[k]))
                   for k, v in expected.items())


def evaluate(actual, predicted, scores) -> MetricReport:
    """Full report; AUC is NaN (and the ROC empty) when only one class is present."""
    cm = confusion(predicted, actual)
    y = np.asarray(actual)
    if 0 < y.sum() < y.size:
        roc = tuple(roc_curve(scores, actual))
        area = auc(roc)
    else:
        roc, area = (), float("nan")
    return MetricReport(accuracy(cm), precision(cm), recall(cm), f1(cm), area, cm, roc,
                        degenerate_metrics(cm))


def write_roc_csv(roc: Sequence[RocPoint], path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["threshold", "fpr", "tpr"])
        for p in roc:
            w.writerow([repr(p.threshold), repr(p.fpr), repr(p.tpr)])
    return path


def read_roc_csv(path) -> List[RocPoint]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [RocPoint(float(r["threshold"]), float(r["tpr"]), float(r["fpr"])) for r in rows]
