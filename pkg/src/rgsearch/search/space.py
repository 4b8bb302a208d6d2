"""Hyperparameter domains, the search space and local refinement windows."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np

UNBOUNDED = None


@dataclass(frozen=True)
class Categorical:
    values: Tuple[Any, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ValueError("categorical domain needs at least one value")
        if len(set(map(repr, self.values))) != len(self.values):
            raise ValueError("categorical values must be distinct")

    numeric = False

    def contains(self, value) -> bool:
        return any(value == v for v in self.values)

    def sample(self, rng: np.random.Generator):
        return self.values[int(rng.integers(len(self.values)))]

    def grid_values(self) -> List[Any]:
        return list(self.values)

    def to_dict(self) -> dict:
        return {"type": "categorical", "values": list(self.values)}


@dataclass(frozen=True)
class IntegerRange:
    """Integers ``low, low + step, ...`` not exceeding ``high``."""

    low: int
    high: int
    step: int = 1

    numeric = True

    def __post_init__(self):
        if self.low > self.high:
            raise ValueError("integer range needs low <= high")
        if self.step < 1:
            raise ValueError("integer range step must be >= 1")

    def lattice(self) -> List[int]:
        return list(range(self.low, self.high + 1, self.step))

    def positions(self) -> int:
        """Number of selectable points (lattice plus any extra element)."""
        return len(self.lattice())

    def contains(self, value) -> bool:
        return (isinstance(value, (int, np.integer)) and not isinstance(value, bool)
                and self.low <= value <= self.high and (value - self.low) % self.step == 0)

    def sample(self, rng: np.random.Generator):
        return self.at(int(rng.integers(self.positions())))

    def grid_values(self) -> List[Any]:
        return [self.at(p) for p in range(self.positions())]

    def at(self, pos: int):
        return self.low + pos * self.step

    def position(self, value) -> int:
        if not self.contains(value):
            raise ValueError(f"{value!r} is not in {self}")
        return (value - self.low) // self.step

    def neighborhood(self, center, delta: float, points: int) -> List[Any]:
        """``points`` evenly spaced values in ``[center - delta, center + delta]``,
        snapped to the lattice, restricted to the domain and de-duplicated."""
        c = self.position(center)
        half = delta / self.step
        pos = []
        for i in range(points):
            off = -half + 2.0 * half * i / (points - 1)
            p = c + math.floor(off + 0.5)
            if 0 <= p < self.positions() and p not in pos:
                pos.append(p)
        return [self.at(p) for p in sorted(pos)]

    def to_dict(self) -> dict:
        return {"type": "integer", "low": self.low, "high": self.high, "step": self.step}


@dataclass(frozen=True)
class OptionalInteger(IntegerRange):
    """An integer lattice plus ``None`` ("unbounded"), placed one step past ``high``."""

    def positions(self) -> int:
        return len(self.lattice()) + 1

    def contains(self, value) -> bool:
        return value is UNBOUNDED or super().contains(value)

    def at(self, pos: int):
        return UNBOUNDED if pos == len(self.lattice()) else self.low + pos * self.step

    def position(self, value) -> int:
        return len(self.lattice()) if value is UNBOUNDED else super().position(value)

    def to_dict(self) -> dict:
        return {**super().to_dict(), "type": "optional_integer"}


@dataclass(frozen=True)
class RealRange:
    """Continuous range; ``grid_points`` fixes its discretisation for full grids."""

    low: float
    high: float
    scale: str = "linear"
    grid_points: int = 5

    numeric = True

    def __post_init__(self):
        if self.low > self.high:
            raise ValueError("real range needs low <= high")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"unknown scale {self.scale!r}")
        if self.scale == "log" and self.low <= 0:
            raise ValueError("log-scale range needs low > 0")
        if self.grid_points < 1:
            raise ValueError("grid_points must be >= 1")

    def contains(self, value) -> bool:
        return isinstance(value, (float, int, np.floating)) and self.low <= value <= self.high

    def sample(self, rng: np.random.Generator) -> float:
        if self.scale == "log":
            return float(math.exp(rng.uniform(math.log(self.low), math.log(self.high))))
        return float(rng.uniform(self.low, self.high))

    def grid_values(self) -> List[float]:
        if self.grid_points == 1 or self.low == self.high:
            return [float(self.low)]
        if self.scale == "log":
            vals = np.geomspace(self.low, self.high, self.grid_points)
        else:
            vals = np.linspace(self.low, self.high, self.grid_points)
        vals[0], vals[-1] = self.low, self.high
        return [float(v) for v in vals]

    def neighborhood(self, center: float, delta: float, points: int) -> List[float]:
        """Evenly spaced values across ``center +/- delta`` (decades on a log
        scale), restricted to the domain; ``center`` itself is always kept exact."""
        mid = (points - 1) // 2
        out = []
        for i in range(points):
            if i == mid:
                v = float(center)
            else:
                off = delta * (2.0 * i / (points - 1) - 1.0)
                v = float(10 ** (math.log10(center) + off)) if self.scale == "log" else float(center + off)
            if self.low <= v <= self.high and v not in out:
                out.append(v)
        return sorted(out)

    def to_dict(self) -> dict:
        return {"type": "real", "low": self.low, "high": self.high, "scale": self.scale,
                "grid_points": self.grid_points}


Domain = Union[Categorical, IntegerRange, OptionalInteger, RealRange]


def domain_from_dict(spec: Mapping[str, Any]) -> Domain:
    kind = spec.get("type")
    if kind == "categorical":
        return Categorical(tuple(spec["values"]))
    if kind == "integer":
        return IntegerRange(int(spec["low"]), int(spec["high"]), int(spec.get("step", 1)))
    if kind == "optional_integer":
        return OptionalInteger(int(spec["low"]), int(spec["high"]), int(spec.get("step", 1)))
    if kind == "real":
        return RealRange(float(spec["low"]), float(spec["high"]), spec.get("scale", "linear"),
                         int(spec.get("grid_points", 5)))
    raise ValueError(f"unknown domain type {kind!r}")


ParamConfig = Dict[str, Any]


@dataclass(frozen=True)
class ParamSpace:
    """Ordered (name, domain) pairs; the order drives grid enumeration and ties."""

    dims: Tuple[Tuple[str, Domain], ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple((str(n), d) for n, d in self.dims))
        names = self.names
        if len(set(names)) != len(names):
            raise ValueError("parameter names must be unique")

    @property
    def names(self) -> List[str]:
        return [n for n, _ in self.dims]

    def domain(self, name: str) -> Domain:
        for n, d in self.dims:
            if n == name:
                return d
        raise KeyError(name)

    def validate(self, config: Mapping[str, Any]) -> None:
        if set(config) != set(self.names):
            raise ValueError(f"config keys {sorted(config)} do not match space {self.names}")
        for name, dom in self.dims:
            if not dom.contains(config[name]):
                raise ValueError(f"{name}={config[name]!r} lies outside its domain")

    def key(self, config: Mapping[str, Any]) -> Tuple:
        return tuple(config[n] for n in self.names)

    def product(self, value_lists: Sequence[Sequence[Any]]) -> List[ParamConfig]:
        """Cartesian product in canonical order (first dimension varies slowest)."""
        return [dict(zip(self.names, combo)) for combo in itertools.product(*value_lists)]

    def full_grid(self) -> List[ParamConfig]:
        return self.product([d.grid_values() for _, d in self.dims])

    def full_grid_size(self) -> int:
        return math.prod(len(d.grid_values()) for _, d in self.dims)

    @classmethod
    def from_dict(cls, spec: Mapping[str, Mapping[str, Any]]) -> "ParamSpace":
        return cls(tuple((name, domain_from_dict(d)) for name, d in spec.items()))

    def to_dict(self) -> Dict[str, dict]:
        return {n: d.to_dict() for n, d in self.dims}


@dataclass(frozen=True)
class DimRefinement:
    delta: float
    points: int = 5
    frozen: bool = False

    def __post_init__(self):
        if not self.frozen:
            if self.delta <= 0:
                raise ValueError("refinement delta must be > 0")
            if self.points < 3 or self.points % 2 == 0:
                raise ValueError("refinement points must be an odd integer >= 3")


@dataclass(frozen=True)
class RefinementSpec:
    """Per-dimension window half-width and resolution around the incumbent.

    Dimensions absent from ``dims`` are frozen, as are categorical ones.
    """

    dims: Mapping[str, DimRefinement] = field(default_factory=dict)

    @classmethod
    def default(cls, space: ParamSpace, *, integer_steps: int = 2, log_decades: float = 0.5,
                linear_fraction: float = 0.25, points: int = 5) -> "RefinementSpec":
        dims = {}
        for name, dom in space.dims:
            if isinstance(dom, IntegerRange):
                dims[name] = DimRefinement(integer_steps * dom.step, points)
            elif isinstance(dom, RealRange):
                if dom.low == dom.high:
                    continue
                delta = log_decades if dom.scale == "log" else linear_fraction * (dom.high - dom.low)
                dims[name] = DimRefinement(delta, points)
        return cls(dims)

    @classmethod
    def frozen_all(cls) -> "RefinementSpec":
        return cls({})

    def window(self, name: str, dom: Domain, center) -> List[Any]:
        ref = self.dims.get(name)
        if ref is None or ref.frozen or not dom.numeric:
            return [center]
        return dom.neighborhood(center, ref.delta, ref.points)

    def to_dict(self) -> dict:
        return {n: {"delta": r.delta, "points": r.points, "frozen": r.frozen} for n, r in self.dims.items()}
