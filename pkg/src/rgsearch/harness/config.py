"""Experiment configuration: a flat YAML mapping plus a nested ``space`` block."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from ..search.evaluation import LOSSES
from ..search.space import ParamSpace, RefinementSpec
from ..search.strategies import STRATEGIES
from ..tree import TreeHyperparams

EXPERIMENT_STRATEGIES = STRATEGIES + ("compare_all",)
_TUNABLE = {f.name for f in dataclasses.fields(TreeHyperparams)} - {"random_state"}


def default_config_path() -> Path:
    return Path(str(resources.files("rgsearch") / "configs" / "default.yaml"))


@dataclass
class ExperimentConfig:
    space: ParamSpace
    data: str = "data/processed.cleveland.data"
    out: str = "runs/default"
    seed: int = 0
    repeats: int = 1
    strategy: str = "compare_all"
    budget: int = 50
    clip_outliers: bool = False
    normalize: bool = True
    train_fraction: float = 0.7
    validation_fraction: float = 0.0
    test_fraction: float = 0.3
    protocol: str = "kfold"
    kfold: int = 5
    loss: str = "one_minus_accuracy"
    refine_points: int = 5
    refine_integer_steps: int = 2
    refine_log_decades: float = 0.5
    refine_linear_fraction: float = 0.25
    n_jobs: int = 1

    def __post_init__(self):
        if self.strategy not in EXPERIMENT_STRATEGIES:
            raise ValueError(f"strategy must be one of {EXPERIMENT_STRATEGIES}, got {self.strategy!r}")
        if self.budget < 1:
            raise ValueError("budget m must be >= 1")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        fr = self.fractions
        if min(fr) < 0 or abs(sum(fr) - 1.0) > 1e-9:
            raise ValueError(f"split fractions must be non-negative and sum to 1, got {fr}")
        if self.protocol not in ("kfold", "holdout"):
            raise ValueError(f"protocol must be 'kfold' or 'holdout', got {self.protocol!r}")
        if self.loss not in LOSSES:
            raise ValueError(f"loss must be one of {LOSSES}")
        unknown = set(self.space.names) - _TUNABLE
        if unknown:
            raise ValueError(f"space declares unknown tree parameters: {sorted(unknown)}")

    @property
    def fractions(self):
        return (self.train_fraction, self.validation_fraction, self.test_fraction)

    def refinement(self) -> RefinementSpec:
        return RefinementSpec.default(
            self.space, integer_steps=self.refine_integer_steps, log_decades=self.refine_log_decades,
            linear_fraction=self.refine_linear_fraction, points=self.refine_points)

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "ExperimentConfig":
        raw = dict(raw)
        if "space" not in raw:
            raise ValueError("config needs a 'space' block")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        raw["space"] = ParamSpace.from_dict(raw["space"])
        return cls(**raw)

    @classmethod
    def load(cls, path: Optional[str] = None, **overrides) -> "ExperimentConfig":
        path = Path(path) if path else default_config_path()
        raw = yaml.safe_load(path.read_text()) or {}
        raw.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(raw)

    def to_dict(self) -> Dict[str, Any]:
        out = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        out["space"] = self.space.to_dict()
        return out

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)
