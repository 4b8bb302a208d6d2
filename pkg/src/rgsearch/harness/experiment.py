"""End-to-end experiment runner and the structured record it produces."""

from __future__ import annotations

import json
import logging
import statistics
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from .. import __version__
from ..dataset import prepare_data
from ..metrics import ConfusionMatrix, write_roc_csv
from ..search import EvalProtocol, SeedSpec, run_strategy
from ..search.strategies import STRATEGIES
from .config import ExperimentConfig

log = logging.getLogger(__name__)

SCALARS = ("accuracy", "precision", "recall", "f1", "auc")


class StageError(RuntimeError):
    """Failure inside one pipeline stage; ``stage`` names it."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage


@dataclass
class StrategyOutcome:
    strategy: str
    repeat: int
    master_seed: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    auc: float
    confusion: Dict[str, int]
    fit_count: int
    duration: float
    best_config: Dict[str, Any]
    validation_loss: float
    random_stage_loss: Optional[float]
    grid_stage_loss: Optional[float]
    n_random_trials: int
    n_grid_trials: int
    roc_file: str
    trials_file: str
    confusion_file: str

    def scalars(self) -> Dict[str, float]:
        return {k: getattr(self, k) for k in SCALARS}

    def confusion_matrix(self) -> ConfusionMatrix:
        return ConfusionMatrix(**self.confusion)


@dataclass
class RunRecord:
    config: Dict[str, Any]
    outcomes: List[StrategyOutcome]
    version: str = __version__
    timestamp: str = ""
    preprocessing: Dict[str, Any] = field(default_factory=dict)

    def strategies(self) -> List[str]:
        seen = []
        for o in self.outcomes:
            if o.strategy not in seen:
                seen.append(o.strategy)
        return seen

    def of(self, strategy: str) -> List[StrategyOutcome]:
        return [o for o in self.outcomes if o.strategy == strategy]

    def medians(self) -> Dict[str, Dict[str, float]]:
        """Per strategy: median of every scalar, of duration and of fit_count."""
        out = {}
        for s in self.strategies():
            rows = self.of(s)
            med = {k: statistics.median(getattr(o, k) for o in rows) for k in SCALARS}
            med["duration"] = statistics.median(o.duration for o in rows)
            med["fit_count"] = statistics.median(o.fit_count for o in rows)
            out[s] = med
        return out

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        raw = json.loads(text)
        raw["outcomes"] = [StrategyOutcome(**o) for o in raw["outcomes"]]
        return cls(**raw)

    def save(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_json())
        return path

    @classmethod
    def load(cls, path) -> "RunRecord":
        return cls.from_json(Path(path).read_text())


def _suffix(strategy: str, repeat: int, repeats: int) -> str:
    return strategy if repeats == 1 else f"{strategy}_r{repeat:02d}"


def _write_confusion(cm: ConfusionMatrix, path: Path) -> Path:
    path.write_text(
        "            pred 0  pred 1\n"
        f"actual 0  {cm.tn:7d} {cm.fp:7d}\n"
        f"actual 1  {cm.fn:7d} {cm.tp:7d}\n"
        f"tp={cm.tp} tn={cm.tn} fp={cm.fp} fn={cm.fn}\n")
    return path


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def repeat_seeds(config: ExperimentConfig) -> List[SeedSpec]:
    """One seed spec per repetition: the master seed itself for a single run,
    else ``mix64(master, r)`` for r = 0..repeats-1."""
    base = SeedSpec(config.seed)
    if config.repeats == 1:
        return [base]
    return [base.repeat(r) for r in range(config.repeats)]


def run_experiment(config: ExperimentConfig, out_dir=None) -> RunRecord:
    out = Path(out_dir if out_dir is not None else config.out)
    _stage("output", out.mkdir, parents=True, exist_ok=True)
    strategies = STRATEGIES if config.strategy == "compare_all" else (config.strategy,)
    refinement = _stage("config", config.refinement)
    outcomes: List[StrategyOutcome] = []
    preprocessing = {}

    for r, seeds in enumerate(repeat_seeds(config)):
        data, split, prep = _stage("data", prepare_data, config.data, fractions=config.fractions,
                                   seed=seeds.split_seed, clip=config.clip_outliers,
                                   normalize=config.normalize)
        if r == 0:
            preprocessing = prep.as_dict()
            _stage("output", (out / "preprocessing.txt").write_text, prep.to_text())
        protocol = _stage("protocol", EvalProtocol, split, seeds, config.protocol, config.kfold,
                          config.loss)
        for name in strategies:
            t0 = time.perf_counter()
            res = _stage(f"search:{name}", run_strategy, name, config.space, config.budget,
                         refinement, data, protocol, n_jobs=config.n_jobs)
            duration = time.perf_counter() - t0
            log.info("repeat %d %s: accuracy %.4f, %d fits, %.2fs", r, name,
                     res.test_report.accuracy, res.fit_count, duration)

            tag = _suffix(name, r, config.repeats)
            files = {"roc_file": f"roc_{tag}.csv", "trials_file": f"trials_{tag}.csv",
                     "confusion_file": f"confusion_{tag}.txt"}
            rep = res.test_report
            _stage("output", write_roc_csv, rep.roc, out / files["roc_file"])
            _stage("output", res.trials().to_csv, out / files["trials_file"], config.space,
                   include_duration=False)
            _stage("output", _write_confusion, rep.confusion, out / files["confusion_file"])

            outcomes.append(StrategyOutcome(
                strategy=name, repeat=r, master_seed=seeds.master_seed,
                **rep.scalars(), confusion=rep.confusion.as_dict(),
                fit_count=res.fit_count, duration=duration, best_config=dict(res.best_config),
                validation_loss=res.best_validation_loss,
                random_stage_loss=res.random_log.best().loss if len(res.random_log) else None,
                grid_stage_loss=res.grid_log.best().loss if len(res.grid_log) else None,
                n_random_trials=len(res.random_log), n_grid_trials=len(res.grid_log), **files))

    return RunRecord(config=config.to_dict(), outcomes=outcomes,
                     timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
                     preprocessing=preprocessing)
