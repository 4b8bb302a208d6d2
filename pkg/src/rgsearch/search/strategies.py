"""Random search, grid search and their two-stage combination."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..dataset import Dataset
from ..metrics import MetricReport
from ..tree import DecisionTree
from .evaluation import EvalProtocol, Evaluator, TrialLog
from .space import ParamConfig, ParamSpace, RefinementSpec

STRATEGIES = ("random", "grid", "randomized_grid")


def sample_config(space: ParamSpace, seed: int) -> ParamConfig:
    """Draw every dimension independently and uniformly over its domain."""
    rng = np.random.default_rng(seed)
    return {name: dom.sample(rng) for name, dom in space.dims}


def build_refined_grid(center: ParamConfig, space: ParamSpace,
                       refinement: RefinementSpec) -> List[ParamConfig]:
    """Local Cartesian grid around ``center``; the center is always a member."""
    space.validate(center)
    windows = [refinement.window(name, dom, center[name]) for name, dom in space.dims]
    return space.product(windows)


def _evaluator(dataset, protocol, evaluator, n_jobs) -> Evaluator:
    return evaluator if evaluator is not None else Evaluator(dataset, protocol, n_jobs)


def random_search(space: ParamSpace, m: int, dataset: Dataset, protocol: EvalProtocol, *,
                  evaluator: Optional[Evaluator] = None, n_jobs: int = 1
                  ) -> Tuple[ParamConfig, TrialLog]:
    if m < 1:
        raise ValueError("random search needs m >= 1")
    ev = _evaluator(dataset, protocol, evaluator, n_jobs)
    configs = [sample_config(space, protocol.seeds.trial_seed(i)) for i in range(m)]
    log = ev.evaluate_many(configs, "random")
    return log.best().config, log


def grid_search(grid: Sequence[ParamConfig], dataset: Dataset, protocol: EvalProtocol, *,
                evaluator: Optional[Evaluator] = None, n_jobs: int = 1
                ) -> Tuple[ParamConfig, TrialLog]:
    """Evaluate every configuration once; ties go to the earliest in ``grid``."""
    if len(grid) == 0:
        raise ValueError("grid search needs a non-empty grid")
    ev = _evaluator(dataset, protocol, evaluator, n_jobs)
    log = ev.evaluate_many(grid, "grid")
    return log.best().config, log


@dataclass
class SearchResult:
    strategy: str
    best_config: ParamConfig
    model: DecisionTree
    test_report: MetricReport
    random_log: TrialLog = field(default_factory=TrialLog)
    grid_log: TrialLog = field(default_factory=TrialLog)
    fit_count: int = 0
    durations: Dict[str, float] = field(default_factory=dict)

    @property
    def best_validation_loss(self) -> float:
        logs = [log for log in (self.grid_log, self.random_log) if len(log)]
        return logs[0].best().loss

    def trials(self) -> TrialLog:
        return TrialLog([*self.random_log, *self.grid_log])


def _finish(strategy, ev, best, random_log, grid_log, durations, t_start) -> SearchResult:
    t0 = time.perf_counter()
    model, report = ev.final_fit(best)
    durations["final"] = time.perf_counter() - t0
    durations["total"] = time.perf_counter() - t_start
    return SearchResult(strategy, best, model, report, random_log, grid_log, ev.fit_count, durations)


def random_strategy(space: ParamSpace, m: int, dataset: Dataset, protocol: EvalProtocol, *,
                    n_jobs: int = 1) -> SearchResult:
    t_start = time.perf_counter()
    ev = Evaluator(dataset, protocol, n_jobs)
    best, log = random_search(space, m, dataset, protocol, evaluator=ev)
    durations = {"random": time.perf_counter() - t_start}
    return _finish("random", ev, best, log, TrialLog(), durations, t_start)


def grid_strategy(space: ParamSpace, dataset: Dataset, protocol: EvalProtocol, *,
                  n_jobs: int = 1) -> SearchResult:
    """Exhaustive search over the full Cartesian product of the declared space."""
    t_start = time.perf_counter()
    ev = Evaluator(dataset, protocol, n_jobs)
    best, log = grid_search(space.full_grid(), dataset, protocol, evaluator=ev)
    durations = {"grid": time.perf_counter() - t_start}
    return _finish("grid", ev, best, TrialLog(), log, durations, t_start)


def randomized_grid_search(space: ParamSpace, m: int, refinement: RefinementSpec,
                           dataset: Dataset, protocol: EvalProtocol, *,
                           n_jobs: int = 1) -> SearchResult:
    """Random exploration, then an exhaustive grid around the random-stage winner,
    then a final fit on the training partition scored on the test partition."""
    t_start = time.perf_counter()
    ev = Evaluator(dataset, protocol, n_jobs)
    incumbent, random_log = random_search(space, m, dataset, protocol, evaluator=ev)
    t_grid = time.perf_counter()
    grid = build_refined_grid(incumbent, space, refinement)
    best, grid_log = grid_search(grid, dataset, protocol, evaluator=ev)
    durations = {"random": t_grid - t_start, "grid": time.perf_counter() - t_grid}
    return _finish("randomized_grid", ev, best, random_log, grid_log, durations, t_start)


def run_strategy(name: str, space: ParamSpace, m: int, refinement: RefinementSpec,
                 dataset: Dataset, protocol: EvalProtocol, *, n_jobs: int = 1) -> SearchResult:
    if name == "random":
        return random_strategy(space, m, dataset, protocol, n_jobs=n_jobs)
    if name == "grid":
        return grid_strategy(space, dataset, protocol, n_jobs=n_jobs)
    if name == "randomized_grid":
        return randomized_grid_search(space, m, refinement, dataset, protocol, n_jobs=n_jobs)
    raise ValueError(f"unknown strategy {name!r}; expected one of {STRATEGIES}")
