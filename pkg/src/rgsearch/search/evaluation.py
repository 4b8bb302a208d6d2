"""Scoring one hyperparameter configuration under a validation protocol."""

from __future__ import annotations

import csv
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .. import metrics
from ..dataset import DataSplit, Dataset, stratified_kfold
from ..tree import DecisionTree, TreeHyperparams, fit, prepare
from .seeding import SeedSpec
from .space import ParamConfig, ParamSpace

LOSSES = ("one_minus_accuracy", "one_minus_f1")


class TrialError(RuntimeError):
    """A tree could not be fitted for a configuration; ``config`` names it."""

    def __init__(self, config: ParamConfig, cause: Exception):
        super().__init__(f"fitting failed for {config}: {cause}")
        self.config = config


@dataclass(frozen=True)
class EvalProtocol:
    split: DataSplit
    seeds: SeedSpec
    mode: str = "kfold"
    k: int = 5
    loss: str = "one_minus_accuracy"

    def __post_init__(self):
        if self.mode not in ("holdout", "kfold"):
            raise ValueError(f"unknown protocol mode {self.mode!r}")
        if self.mode == "kfold" and self.k < 2:
            raise ValueError("kfold needs k >= 2")
        if self.loss not in LOSSES:
            raise ValueError(f"loss must be one of {LOSSES}")
        if self.mode == "holdout" and len(self.split.validation_idx) == 0:
            raise ValueError("holdout needs a non-empty validation partition")

    @property
    def fits_per_trial(self) -> int:
        return self.k if self.mode == "kfold" else 1


@dataclass(frozen=True)
class Trial:
    index: int
    stage: str
    config: ParamConfig
    loss: float
    metrics: Dict[str, float]
    fit_count: int
    duration: float = field(compare=False)


class TrialLog:
    """Trials in index order; ``best()`` is the argmin with ties to the lowest index."""

    def __init__(self, trials: Iterable[Trial] = ()):
        self.trials: List[Trial] = list(trials)

    def __len__(self):
        return len(self.trials)

    def __iter__(self):
        return iter(self.trials)

    def __getitem__(self, i):
        return self.trials[i]

    def __eq__(self, other):
        return isinstance(other, TrialLog) and self.trials == other.trials

    def best(self) -> Trial:
        if not self.trials:
            raise ValueError("empty trial log")
        best = self.trials[0]
        for t in self.trials[1:]:
            if t.loss < best.loss:
                best = t
        return best

    @property
    def fit_count(self) -> int:
        return sum(t.fit_count for t in self.trials)

    @property
    def duration(self) -> float:
        return sum(t.duration for t in self.trials)

    def to_csv(self, path, space: ParamSpace, include_duration: bool = True) -> Path:
        """One row per trial: index, stage, parameters, loss, fit_count[, duration].

        Durations vary run to run; leave them out for byte-reproducible logs.
        """
        path = Path(path)
        cols = ["index", "stage", *space.names, "loss", "fit_count"]
        if include_duration:
            cols.append("duration")
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for t in self.trials:
                row = [t.index, t.stage, *(_fmt(t.config[n]) for n in space.names),
                       repr(t.loss), t.fit_count]
                if include_duration:
                    row.append(f"{t.duration:.6f}")
                w.writerow(row)
        return path


def _fmt(value) -> str:
    if value is None:
        return "unbounded"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def hyperparams_for(config: ParamConfig, random_state: int) -> TreeHyperparams:
    return TreeHyperparams(**config, random_state=random_state)


class Evaluator:
    """Binds a dataset to a protocol and counts every tree fit it performs."""

    def __init__(self, dataset: Dataset, protocol: EvalProtocol, n_jobs: int = 1):
        self.dataset = dataset
        self.protocol = protocol
        self.n_jobs = n_jobs
        self.matrix = prepare(dataset.features, dataset.labels)
        split = protocol.split
        if protocol.mode == "kfold":
            self.folds = stratified_kfold(split.train_idx, dataset.labels, protocol.k,
                                          protocol.seeds.fold_seed)
        else:
            self.folds = [(split.train_idx, split.validation_idx)]
        self.fit_count = 0
        self._lock = threading.Lock()

    def _fit(self, config: ParamConfig, train_idx) -> DecisionTree:
        try:
            hp = hyperparams_for(config, self.protocol.seeds.tree_seed)
            tree = fit(self.matrix, None, hp, train_idx)
        except (ValueError, TypeError) as exc:
            raise TrialError(config, exc) from exc
        with self._lock:
            self.fit_count += 1
        return tree

    def evaluate(self, config: ParamConfig, index: int = 0, stage: str = "random") -> Trial:
        t0 = time.perf_counter()
        X, y = self.dataset.features, self.dataset.labels
        accs, f1s = [], []
        for train_idx, val_idx in self.folds:
            tree = self._fit(config, train_idx)
            cm = metrics.confusion(tree.predict(X[val_idx]), y[val_idx])
            accs.append(metrics.accuracy(cm))
            f1s.append(metrics.f1(cm))
        acc, f1 = float(np.mean(accs)), float(np.mean(f1s))
        loss = 1.0 - acc if self.protocol.loss == "one_minus_accuracy" else 1.0 - f1
        return Trial(index, stage, dict(config), loss, {"accuracy": acc, "f1": f1},
                     len(self.folds), time.perf_counter() - t0)

    def evaluate_many(self, configs: Sequence[ParamConfig], stage: str) -> TrialLog:
        """Evaluate in order; with ``n_jobs > 1`` trials run on a thread pool
        but the log is still ordered by index."""
        jobs = list(enumerate(configs))
        if self.n_jobs > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(self.n_jobs) as pool:
                trials = list(pool.map(lambda j: self.evaluate(j[1], j[0], stage), jobs))
        else:
            trials = [self.evaluate(c, i, stage) for i, c in jobs]
        return TrialLog(trials)

    def final_fit(self, config: ParamConfig) -> Tuple[DecisionTree, metrics.MetricReport]:
        """Refit on the whole training partition and score the test partition."""
        split = self.protocol.split
        tree = self._fit(config, split.train_idx)
        X, y = self.dataset.features, self.dataset.labels
        test = split.test_idx
        report = metrics.evaluate(y[test], tree.predict(X[test]), tree.predict_proba(X[test]))
        return tree, report


def evaluate_config(config: ParamConfig, dataset: Dataset, protocol: EvalProtocol) -> Trial:
    return Evaluator(dataset, protocol).evaluate(config)
