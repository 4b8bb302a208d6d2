import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rgsearch.dataset import (CLEVELAND_SCHEMA, DataError, Dataset, binarize_target, clip_outliers,
                              denormalize, impute_missing, iqr_bounds, load_csv, min_max_normalize,
                              prepare_data, stratified_kfold, stratified_split, to_dataset)

ROW = "63.0,1.0,1.0,145.0,233.0,1.0,2.0,150.0,0.0,2.3,3.0,0.0,6.0,0"


def write_rows(tmp_path, rows, name="d.csv"):
    path = tmp_path / name
    path.write_text("\n".join(rows) + ("\n" if rows else ""))
    return path


def with_field(j, value, row=ROW):
    fields = row.split(",")
    fields[j] = value
    return ",".join(fields)


def test_cleveland_file(cleveland_path):
    rec = load_csv(cleveland_path)
    assert len(rec) == 303
    assert int(rec.missing.any(axis=1).sum()) == 6
    assert {n: int(rec.missing[:, j].sum()) for j, n in enumerate(CLEVELAND_SCHEMA.names)
            if rec.missing[:, j].any()} == {"ca": 4, "thal": 2}
    assert rec.values[0].tolist() == [float(v) for v in ROW.split(",")[:-1]]


def test_cleveland_pipeline(cleveland_path):
    data, split, report = prepare_data(cleveland_path, seed=11)
    assert len(data) == 303 and set(np.unique(data.labels)) == {0, 1}
    assert split.sizes() == (212, 0, 91)
    assert report.imputed == {"ca": (0.0, 4), "thal": (3.0, 2)}
    for j in CLEVELAND_SCHEMA.categorical_columns():
        allowed = CLEVELAND_SCHEMA.columns[j].valid_range
        assert np.isin(data.features[:, j], allowed).all()
    train = data.features[split.train_idx]
    for j in CLEVELAND_SCHEMA.numeric_columns():
        assert train[:, j].min() == 0.0 and train[:, j].max() == 1.0
    assert "records: 303" in report.to_text()


def test_empty_file(tmp_path):
    rec = load_csv(write_rows(tmp_path, []))
    assert len(rec) == 0 and rec.values.shape == (0, 13)


def test_malformed_rows_name_the_row(tmp_path):
    short = ",".join(ROW.split(",")[:13])
    with pytest.raises(DataError, match="row 2"):
        load_csv(write_rows(tmp_path, [ROW, short]))
    with pytest.raises(DataError, match="row 1.*chol"):
        load_csv(write_rows(tmp_path, [with_field(4, "abc")]))
    with pytest.raises(DataError, match="cp"):
        load_csv(write_rows(tmp_path, [ROW, ROW, with_field(2, "9")]))


def test_impute_categorical_mode_and_numeric_median(tmp_path):
    rows = [with_field(2, v, with_field(0, a)) for v, a in
            [("1", "1.0"), ("2", "3.0"), ("2", "?"), ("?", "50.0")]]
    rec = impute_missing(load_csv(write_rows(tmp_path, rows)))
    assert rec.values[3, 2] == 2.0
    assert rec.values[2, 0] == 3.0  # median of 1, 3, 50
    assert not rec.missing.any()
    assert rec.imputed == {"age": (3.0, 1), "cp": (2.0, 1)}


def test_impute_numeric_two_values(tmp_path):
    rows = [with_field(0, "1.0"), with_field(0, "3.0"), with_field(0, "?")]
    assert impute_missing(load_csv(write_rows(tmp_path, rows))).values[2, 0] == 2.0


def test_impute_mode_ties_take_smallest_code(tmp_path):
    rows = [with_field(12, "7"), with_field(12, "3"), with_field(12, "?")]
    assert impute_missing(load_csv(write_rows(tmp_path, rows))).values[2, 12] == 3.0


def test_impute_all_missing_column_fails(tmp_path):
    with pytest.raises(DataError, match="entirely missing"):
        impute_missing(load_csv(write_rows(tmp_path, [with_field(11, "?")] * 3)))


def test_impute_is_idempotent_on_complete_data(tmp_path):
    rec = load_csv(write_rows(tmp_path, [ROW, with_field(0, "40.0")]))
    out = impute_missing(rec)
    assert np.array_equal(out.values, rec.values) and out.imputed == {}


def test_binarize_target():
    assert binarize_target([0, 3, 1, 4, 2]).tolist() == [0, 1, 1, 1, 1]
    with pytest.raises(DataError):
        binarize_target([0, -1])


def make_dataset(features, labels=None):
    X = np.asarray(features, dtype=float)
    if labels is None:
        labels = np.arange(len(X)) % 2
    return Dataset(X, np.asarray(labels), CLEVELAND_SCHEMA, np.arange(len(X)))


def base_matrix(n):
    row = np.array([float(v) for v in ROW.split(",")[:-1]])
    return np.tile(row, (n, 1))


def test_iqr_fences_and_clipping():
    assert iqr_bounds(np.array([1.0, 2.0, 3.0, 4.0, 100.0])) == (-1.0, 7.0)
    X = base_matrix(5)
    X[:, 0] = [1, 2, 3, 4, 100]
    X[:, 2] = [1, 2, 3, 4, 4]  # categorical: never clipped
    ds = make_dataset(X)
    clipped = clip_outliers(ds, True)
    assert clipped.features[:, 0].tolist() == [1, 2, 3, 4, 7]
    assert np.array_equal(clipped.features[:, 2], X[:, 2])
    assert clip_outliers(ds, False) is ds
    const = clip_outliers(make_dataset(base_matrix(4)), True)
    assert np.array_equal(const.features, base_matrix(4))


def test_min_max_examples():
    X = base_matrix(3)
    X[:, 0] = [29, 77, 53]
    out, stats = min_max_normalize(make_dataset(X))
    assert out.features[:, 0].tolist() == [0.0, 1.0, 0.5]
    assert stats["age"] == (29.0, 77.0)
    assert (out.features[:, 3] == 0.0).all()  # constant column
    assert np.array_equal(out.features[:, 1], X[:, 1])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=30).filter(lambda v: max(v) > min(v)))
def test_normalization_round_trip(values):
    X = base_matrix(len(values))
    X[:, 4] = values
    ds = make_dataset(X)
    scaled, stats = min_max_normalize(ds)
    back = denormalize(scaled, stats)
    assert np.allclose(back.features[:, 4], X[:, 4], rtol=0, atol=1e-9)


def test_dataset_validation():
    with pytest.raises(ValueError):
        make_dataset(np.full((2, 13), np.nan))
    with pytest.raises(ValueError):
        make_dataset(base_matrix(2), [0, 2])


def test_split_examples():
    labels = np.array([0] * 164 + [1] * 139)
    s = stratified_split(labels, (0.7, 0.0, 0.3), seed=5)
    assert abs(len(s.test_idx) - 91) <= 1
    again = stratified_split(labels, (0.7, 0.0, 0.3), seed=5)
    assert all(np.array_equal(a, b) for a, b in zip(
        (s.train_idx, s.validation_idx, s.test_idx), (again.train_idx, again.validation_idx, again.test_idx)))
    everything = stratified_split(labels, (1.0, 0.0, 0.0), seed=1)
    assert everything.sizes() == (303, 0, 0)


def test_split_errors():
    with pytest.raises(ValueError):
        stratified_split([0, 1], (0.5, 0.5, 0.5))
    with pytest.raises(DataError):
        stratified_split([0, 0, 0, 1], (0.5, 0.25, 0.25))


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 60), st.integers(2, 60), st.integers(0, 2**32),
       st.sampled_from([(0.7, 0.0, 0.3), (0.6, 0.2, 0.2), (0.5, 0.25, 0.25), (0.8, 0.1, 0.1)]))
def test_split_soundness(n0, n1, seed, fractions):
    labels = np.array([0] * n0 + [1] * n1)
    try:
        s = stratified_split(labels, fractions, seed)
    except DataError:
        return
    parts = [s.train_idx, s.validation_idx, s.test_idx]
    joined = np.concatenate(parts)
    assert sorted(joined.tolist()) == list(range(n0 + n1))
    for c, n in ((0, n0), (1, n1)):
        for part, f in zip(parts, fractions):
            assert abs(int((labels[part] == c).sum()) - n * f) <= 1


def test_kfold_examples():
    labels = np.array([0, 1] * 5)
    folds = stratified_kfold(np.arange(10), labels, 5, seed=2)
    assert len(folds) == 5
    for train, val in folds:
        assert sorted(labels[val].tolist()) == [0, 1]
        assert len(set(train) & set(val)) == 0
    assert sorted(np.concatenate([v for _, v in folds]).tolist()) == list(range(10))
    again = stratified_kfold(np.arange(10), labels, 5, seed=2)
    assert all(np.array_equal(a[1], b[1]) for a, b in zip(folds, again))
    with pytest.raises(DataError):
        stratified_kfold(np.arange(6), np.array([0, 0, 0, 0, 1, 1]), 3)
    with pytest.raises(ValueError):
        stratified_kfold(np.arange(6), np.zeros(6, dtype=int), 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(5, 40), st.integers(5, 40), st.integers(2, 5), st.integers(0, 2**32))
def test_kfold_balance(n0, n1, k, seed):
    labels = np.array([0] * n0 + [1] * n1)
    idx = np.random.default_rng(seed).permutation(n0 + n1)[: (n0 + n1) * 3 // 4]
    sub = labels[idx]
    if min((sub == 0).sum(), (sub == 1).sum()) < k:
        return
    folds = stratified_kfold(idx, labels, k, seed)
    vals = [v for _, v in folds]
    assert sorted(np.concatenate(vals).tolist()) == sorted(idx.tolist())
    sizes = [len(v) for v in vals]
    assert max(sizes) - min(sizes) <= 1
    for c in (0, 1):
        per = [int((labels[v] == c).sum()) for v in vals]
        assert max(per) - min(per) <= 1
    for train, val in folds:
        assert sorted(np.concatenate([train, val]).tolist()) == sorted(idx.tolist())


def test_prepare_data_uses_training_statistics(cleveland_path):
    data, split, report = prepare_data(cleveland_path, seed=3, clip=True)
    raw = to_dataset(impute_missing(load_csv(cleveland_path)))
    age = raw.features[split.train_idx, 0]
    lo, hi = iqr_bounds(age)
    clipped_age = np.clip(age, lo, hi)
    assert report.scaling["age"] == (clipped_age.min(), clipped_age.max())
    test_vals = data.features[split.test_idx]
    assert test_vals.shape == (91, 13)
