"""Loading, cleaning and splitting the UCI heart-disease (Cleveland) table.

The raw file has 14 comma-separated fields per line, no header, and ``?`` for
missing values. Categorical columns keep their integer UCI codes; trees split
on them as ordinal values.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

log = logging.getLogger(__name__)

NUMERIC = "numeric"
CATEGORICAL = "categorical"


class DataError(ValueError):
    """Malformed input data (bad row, unknown category, unusable column)."""


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    kind: str
    # (low, high) for numeric columns, tuple of allowed codes for categorical
    valid_range: tuple
    missing_marker: str = "?"

    def __post_init__(self):
        if self.kind == NUMERIC:
            low, high = self.valid_range
            if low > high:
                raise ValueError(f"{self.name}: numeric range needs low <= high")
        elif self.kind == CATEGORICAL:
            if len(self.valid_range) == 0:
                raise ValueError(f"{self.name}: categorical column needs at least one category")
        else:
            raise ValueError(f"{self.name}: unknown column kind {self.kind!r}")


@dataclass(frozen=True)
class FeatureSchema:
    columns: Tuple[ColumnSpec, ...]
    target: str = "num"

    def __post_init__(self):
        if len(self.columns) != 13:
            raise ValueError(f"schema needs exactly 13 feature columns, got {len(self.columns)}")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names) or self.target in names:
            raise ValueError("column names must be unique")

    @property
    def names(self) -> List[str]:
        return [c.name for c in self.columns]

    def numeric_columns(self) -> List[int]:
        return [j for j, c in enumerate(self.columns) if c.kind == NUMERIC]

    def categorical_columns(self) -> List[int]:
        return [j for j, c in enumerate(self.columns) if c.kind == CATEGORICAL]


# Numeric ranges are the observed spans of each column; they document the data
# and are not enforced (only category membership is). Category codes are the ones used
# in processed.cleveland.data (e.g. chest pain 1..4, thal 3/6/7).
CLEVELAND_SCHEMA = FeatureSchema((
    ColumnSpec("age", NUMERIC, (29.0, 77.0)),
    ColumnSpec("sex", CATEGORICAL, (0, 1)),
    ColumnSpec("cp", CATEGORICAL, (1, 2, 3, 4)),
    ColumnSpec("trestbps", NUMERIC, (94.0, 200.0)),
    ColumnSpec("chol", NUMERIC, (126.0, 564.0)),
    ColumnSpec("fbs", CATEGORICAL, (0, 1)),
    ColumnSpec("restecg", CATEGORICAL, (0, 1, 2)),
    ColumnSpec("thalach", NUMERIC, (71.0, 202.0)),
    ColumnSpec("exang", CATEGORICAL, (0, 1)),
    ColumnSpec("oldpeak", NUMERIC, (0.0, 6.2)),
    ColumnSpec("slope", CATEGORICAL, (1, 2, 3)),
    ColumnSpec("ca", NUMERIC, (0.0, 3.0)),
    ColumnSpec("thal", CATEGORICAL, (3, 6, 7)),
))


@dataclass
class RawRecords:
    """Typed rows straight from the file; ``missing`` flags the ``?`` cells."""

    values: np.ndarray
    missing: np.ndarray
    raw_labels: np.ndarray
    row_numbers: np.ndarray
    schema: FeatureSchema
    imputed: Dict[str, Tuple[float, int]] = field(default_factory=dict)

    def __len__(self):
        return int(self.values.shape[0])


@dataclass(frozen=True, eq=False)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    schema: FeatureSchema
    row_ids: np.ndarray

    def __post_init__(self):
        if self.features.ndim != 2 or self.features.shape[1] != len(self.schema.columns):
            raise ValueError("feature matrix does not match the schema")
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("features and labels differ in length")
        if np.isnan(self.features).any():
            raise ValueError("dataset contains missing values")
        if self.labels.size and not np.isin(self.labels, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")

    def __len__(self):
        return int(self.labels.shape[0])

    def with_features(self, features: np.ndarray) -> "Dataset":
        return replace(self, features=features)


@dataclass(frozen=True)
class DataSplit:
    train_idx: np.ndarray
    validation_idx: np.ndarray
    test_idx: np.ndarray
    seed: int

    def __post_init__(self):
        parts = [self.train_idx, self.validation_idx, self.test_idx]
        joined = np.concatenate(parts)
        if np.unique(joined).size != joined.size:
            raise ValueError("split partitions overlap")

    def sizes(self) -> Tuple[int, int, int]:
        return len(self.train_idx), len(self.validation_idx), len(self.test_idx)


# -- loading -----------------------------------------------------------------


def load_csv(path: Union[str, Path], schema: FeatureSchema = CLEVELAND_SCHEMA) -> RawRecords:
    n_fields = len(schema.columns) + 1
    values, missing, labels, rows = [], [], [], []
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != n_fields:
            raise DataError(f"row {lineno}: expected {n_fields} fields, got {len(fields)}")
        row_vals, row_miss = [], []
        for col, raw in zip(schema.columns, fields[:-1]):
            if raw == col.missing_marker:
                row_vals.append(math.nan)
                row_miss.append(True)
                continue
            try:
                v = float(raw)
            except ValueError:
                raise DataError(f"row {lineno}: column {col.name!r} value {raw!r} is not numeric") from None
            if col.kind == CATEGORICAL and v not in col.valid_range:
                raise DataError(f"row {lineno}: unknown {col.name!r} category {raw!r}")
            row_vals.append(v)
            row_miss.append(False)
        try:
            label = float(fields[-1])
        except ValueError:
            raise DataError(f"row {lineno}: target value {fields[-1]!r} is not numeric") from None
        if label != int(label):
            raise DataError(f"row {lineno}: target value {fields[-1]!r} is not an integer")
        values.append(row_vals)
        missing.append(row_miss)
        labels.append(int(label))
        rows.append(lineno)

    d = len(schema.columns)
    log.info("loaded %d records from %s", len(values), path)
    return RawRecords(
        values=np.asarray(values, dtype=np.float64).reshape(-1, d),
        missing=np.asarray(missing, dtype=bool).reshape(-1, d),
        raw_labels=np.asarray(labels, dtype=np.int64),
        row_numbers=np.asarray(rows, dtype=np.int64),
        schema=schema,
    )


def _mode_smallest(values: np.ndarray) -> float:
    codes, counts = np.unique(values, return_counts=True)
    return float(codes[np.argmax(counts)])  # unique() sorts, argmax takes the first


def impute_missing(records: RawRecords) -> RawRecords:
    """Fill missing cells: median for numeric columns, mode (smallest on ties) for categorical."""
    values = records.values.copy()
    imputed = dict(records.imputed)
    for j, col in enumerate(records.schema.columns):
        miss = records.missing[:, j]
        if not miss.any():
            continue
        present = values[~miss, j]
        if present.size == 0:
            raise DataError(f"column {col.name!r} is entirely missing")
        fill = float(np.median(present)) if col.kind == NUMERIC else _mode_smallest(present)
        values[miss, j] = fill
        imputed[col.name] = (fill, int(miss.sum()))
        log.info("imputed %d missing %s values with %r", miss.sum(), col.name, fill)
    return replace(records, values=values, missing=np.zeros_like(records.missing), imputed=imputed)


def binarize_target(raw_labels) -> np.ndarray:
    raw = np.asarray(raw_labels, dtype=np.int64)
    if raw.size and raw.min() < 0:
        raise DataError("target labels must be non-negative")
    return (raw >= 1).astype(np.int64)


def to_dataset(records: RawRecords) -> Dataset:
    if records.missing.any():
        raise DataError("impute missing values before building a dataset")
    return Dataset(records.values.copy(), binarize_target(records.raw_labels),
                   records.schema, records.row_numbers.copy())


# -- preprocessing -----------------------------------------------------------


def iqr_bounds(column: np.ndarray) -> Tuple[float, float]:
    """Tukey fences ``[Q1 - 1.5 IQR, Q3 + 1.5 IQR]``.

    Quartiles use linear interpolation between order statistics
    (``numpy.percentile`` default), so ``[1, 2, 3, 4, 100]`` gives Q1 = 2,
    Q3 = 4 and fences (-1, 7).
    """
    q1, q3 = np.percentile(column, [25, 75])
    iqr = q3 - q1
    return float(q1 - 1.5 * iqr), float(q3 + 1.5 * iqr)


def clip_outliers(dataset: Dataset, enabled: bool = False, fit_rows=None) -> Dataset:
    """Clip numeric columns to their IQR fences; categorical columns are untouched.

    Fences come from ``fit_rows`` (default: all rows) so held-out rows can be
    clipped with training statistics.
    """
    if not enabled:
        return dataset
    X = dataset.features.copy()
    rows = slice(None) if fit_rows is None else np.asarray(fit_rows)
    for j in dataset.schema.numeric_columns():
        low, high = iqr_bounds(dataset.features[rows, j])
        X[:, j] = np.clip(X[:, j], low, high)
    return dataset.with_features(X)


def min_max_normalize(dataset: Dataset, fit_rows=None) -> Tuple[Dataset, Dict[str, Tuple[float, float]]]:
    """Map numeric columns to [0, 1] with (min, max) taken from ``fit_rows``.

    Constant columns map to 0. Returns the new dataset and the per-column
    ``(min, max)`` used, so other data can be scaled identically.
    """
    X = dataset.features.copy()
    rows = slice(None) if fit_rows is None else np.asarray(fit_rows)
    stats = {}
    for j in dataset.schema.numeric_columns():
        ref = dataset.features[rows, j]
        lo, hi = float(ref.min()), float(ref.max())
        stats[dataset.schema.columns[j].name] = (lo, hi)
        X[:, j] = (X[:, j] - lo) / (hi - lo) if hi > lo else 0.0
    return dataset.with_features(X), stats


def denormalize(dataset: Dataset, stats: Dict[str, Tuple[float, float]]) -> Dataset:
    X = dataset.features.copy()
    for j, col in enumerate(dataset.schema.columns):
        if col.name in stats:
            lo, hi = stats[col.name]
            X[:, j] = X[:, j] * (hi - lo) + lo
    return dataset.with_features(X)


# -- splitting ---------------------------------------------------------------


def _allocate(n: int, fractions: Sequence[float]) -> List[int]:
    """Largest-remainder apportionment of ``n`` items (ties to earlier parts)."""
    exact = [n * f for f in fractions]
    counts = [math.floor(e) for e in exact]
    rest = n - sum(counts)
    order = sorted(range(len(fractions)), key=lambda i: (-(exact[i] - counts[i]), i))
    for i in order[:rest]:
        counts[i] += 1
    return counts


def stratified_split(labels, fractions=(0.7, 0.0, 0.3), seed: int = 0) -> DataSplit:
    """Per-class shuffled split into train / validation / test index arrays."""
    if isinstance(labels, Dataset):
        labels = labels.labels
    labels = np.asarray(labels)
    fractions = tuple(float(f) for f in fractions)
    if len(fractions) != 3 or min(fractions) < 0 or abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must be three non-negative numbers summing to 1, got {fractions}")
    rng = np.random.default_rng(seed)
    parts: List[List[np.ndarray]] = [[], [], []]
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        rng.shuffle(members)
        counts = _allocate(members.size, fractions)
        for p, (f, k) in enumerate(zip(fractions, counts)):
            if f > 0 and k == 0:
                raise DataError(f"class {c} has too few samples ({members.size}) for a {f:g} partition")
        bounds = np.cumsum([0] + counts)
        for p in range(3):
            parts[p].append(members[bounds[p]:bounds[p + 1]])
    out = [np.sort(np.concatenate(p)) if p else np.empty(0, dtype=np.int64) for p in parts]
    return DataSplit(*(o.astype(np.int64) for o in out), seed=seed)


def stratified_kfold(indices, labels, k: int, seed: int = 0) -> List[Tuple[np.ndarray, np.ndarray]]:
    """``k`` (train, validation) pairs over ``indices``, class-balanced and seeded.

    ``labels`` is indexed by the entries of ``indices``. Each class is
    shuffled and dealt round-robin, continuing the deal across classes so fold
    sizes also stay within one of each other.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    indices = np.asarray(indices, dtype=np.int64)
    labels = np.asarray(labels)
    sub = labels[indices]
    rng = np.random.default_rng(seed)
    folds: List[List[int]] = [[] for _ in range(k)]
    offset = 0
    for c in np.unique(sub):
        members = indices[sub == c]
        if members.size < k:
            raise DataError(f"class {c} has {members.size} samples, fewer than k={k}")
        members = members.copy()
        rng.shuffle(members)
        for i, m in enumerate(members):
            folds[(offset + i) % k].append(int(m))
        offset = (offset + members.size) % k
    out = []
    for f in range(k):
        val = np.sort(np.asarray(folds[f], dtype=np.int64))
        train = np.sort(np.concatenate([np.asarray(folds[g], dtype=np.int64) for g in range(k) if g != f]))
        out.append((train, val))
    return out


def synthetic_dataset(n_rows: int, seed: int = 0, noise: float = 0.5,
                      schema: FeatureSchema = CLEVELAND_SCHEMA) -> Dataset:
    """Random rows shaped like ``schema``, for tests and smoke runs.

    Numeric columns are uniform over their documented range, categorical
    columns uniform over their codes. The label is a noisy threshold on a
    linear score of two numeric columns and one categorical column.
    """
    rng = np.random.default_rng(seed)
    X = np.empty((n_rows, len(schema.columns)))
    for j, col in enumerate(schema.columns):
        if col.kind == NUMERIC:
            X[:, j] = np.round(rng.uniform(*col.valid_range, size=n_rows), 1)
        else:
            X[:, j] = rng.choice(np.asarray(col.valid_range, dtype=float), size=n_rows)
    num = schema.numeric_columns()
    cat = schema.categorical_columns()

    def z(j):
        c = X[:, j]
        return (c - c.mean()) / (c.std() or 1.0)

    score = z(num[0]) - 0.8 * z(num[-1]) + 0.6 * z(cat[0]) + rng.normal(scale=noise, size=n_rows)
    labels = (score > np.median(score)).astype(np.int64)
    return Dataset(X, labels, schema, np.arange(n_rows))


# -- full pipeline -----------------------------------------------------------


@dataclass
class PreprocessReport:
    n_records: int
    imputed: Dict[str, Tuple[float, int]]
    clipped: Dict[str, int]
    scaling: Dict[str, Tuple[float, float]]
    split_sizes: Tuple[int, int, int]

    def to_text(self) -> str:
        lines = [f"records: {self.n_records}",
                 "split (train/validation/test): %d/%d/%d" % self.split_sizes]
        lines.append("imputation:" if self.imputed else "imputation: none")
        for name, (value, count) in self.imputed.items():
            lines.append(f"  {name}: {count} filled with {value:g}")
        lines.append("clipped cells:" if self.clipped else "clipping: off")
        for name, count in self.clipped.items():
            lines.append(f"  {name}: {count}")
        lines.append("min-max scaling:" if self.scaling else "min-max scaling: off")
        for name, (lo, hi) in self.scaling.items():
            lines.append(f"  {name}: min={lo:g} max={hi:g}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return {"n_records": self.n_records,
                "imputed": {k: list(v) for k, v in self.imputed.items()},
                "clipped": dict(self.clipped),
                "scaling": {k: list(v) for k, v in self.scaling.items()},
                "split_sizes": list(self.split_sizes)}


def prepare_data(path, *, fractions=(0.7, 0.0, 0.3), seed: int = 0, clip: bool = False,
                 normalize: bool = True, schema: FeatureSchema = CLEVELAND_SCHEMA):
    """Load, impute, split, then clip and scale with training-partition statistics.

    Returns ``(dataset, split, report)``.
    """
    records = impute_missing(load_csv(path, schema))
    data = to_dataset(records)
    split = stratified_split(data.labels, fractions, seed)
    fit_rows = split.train_idx

    clipped = {}
    if clip:
        before = data.features
        data = clip_outliers(data, True, fit_rows)
        for j in schema.numeric_columns():
            n = int(np.count_nonzero(before[:, j] != data.features[:, j]))
            if n:
                clipped[schema.columns[j].name] = n
    scaling = {}
    if normalize:
        data, scaling = min_max_normalize(data, fit_rows)
    report = PreprocessReport(len(records), records.imputed, clipped, scaling, split.sizes())
    return data, split, report
