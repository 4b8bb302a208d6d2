import json
import math

import pytest
import yaml

from rgsearch.harness import (ExperimentConfig, ReportError, RunRecord, StageError, StrategyOutcome,
                              default_config_path, emit_report, parse_table, render_table,
                              repeat_seeds, run_experiment)
from rgsearch.harness.cli import main
from rgsearch.metrics import ConfusionMatrix, accuracy, auc, f1, precision, read_roc_csv, recall

SMALL_SPACE = {
    "criterion": {"type": "categorical", "values": ["gini", "entropy"]},
    "max_depth": {"type": "optional_integer", "low": 2, "high": 6, "step": 2},
    "min_samples_leaf": {"type": "integer", "low": 1, "high": 7, "step": 3},
}


def small_config(tmp_path, data, **kw):
    raw = {"data": str(data), "out": str(tmp_path / "out"), "seed": 3, "budget": 4,
           "kfold": 3, "space": SMALL_SPACE, **kw}
    return ExperimentConfig.from_dict(raw)


def write_yaml(tmp_path, data, **kw):
    path = tmp_path / "cfg.yaml"
    path.write_text(yaml.safe_dump({"data": str(data), "seed": 3, "budget": 4, "kfold": 3,
                                    "space": SMALL_SPACE, **kw}))
    return path


def test_default_config_loads():
    cfg = ExperimentConfig.load()
    assert default_config_path().name == "default.yaml"
    assert cfg.strategy == "compare_all" and cfg.budget == 50 and cfg.normalize
    assert cfg.space.names == ["criterion", "splitter", "max_depth", "min_samples_split",
                               "min_samples_leaf", "max_features", "ccp_alpha"]
    assert cfg.space.full_grid_size() == 18_480
    assert ExperimentConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()


@pytest.mark.parametrize("change", [
    {"budget": 0}, {"strategy": "bayes"}, {"train_fraction": 0.9}, {"repeats": 0},
    {"protocol": "loo"}, {"loss": "mse"},
    {"space": {"depth": {"type": "integer", "low": 1, "high": 3}}},
    {"unknown_key": 1},
])
def test_config_validation(change, tmp_path):
    raw = {"space": SMALL_SPACE, **change}
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict(raw)


def test_repeat_seeds():
    cfg = ExperimentConfig.from_dict({"space": SMALL_SPACE, "seed": 9})
    assert [s.master_seed for s in repeat_seeds(cfg)] == [9]
    three = repeat_seeds(cfg.replace(repeats=3))
    assert [s.master_seed for s in three] == [s.master_seed for s in
                                              (repeat_seeds(cfg)[0].repeat(r) for r in range(3))]


def test_random_m1_holdout_fit_count(tmp_path, cleveland_path):
    cfg = small_config(tmp_path, cleveland_path, strategy="random", budget=1, protocol="holdout",
                       train_fraction=0.5, validation_fraction=0.2, test_fraction=0.3)
    rec = run_experiment(cfg)
    assert [o.fit_count for o in rec.outcomes] == [2]


def test_compare_all_outputs_and_consistency(tmp_path, cleveland_path):
    cfg = small_config(tmp_path, cleveland_path)
    rec = run_experiment(cfg)
    out = tmp_path / "out"
    assert rec.strategies() == ["random", "grid", "randomized_grid"]
    for s in rec.strategies():
        for name in (f"trials_{s}.csv", f"roc_{s}.csv", f"confusion_{s}.txt"):
            assert (out / name).exists()
    assert (out / "preprocessing.txt").read_text().startswith("records: 303")
    for o in rec.outcomes:
        cm = o.confusion_matrix()
        assert cm.total == 91
        assert o.accuracy == accuracy(cm) and o.precision == precision(cm)
        assert o.recall == recall(cm) and o.f1 == f1(cm)
        assert o.auc == pytest.approx(auc(read_roc_csv(out / o.roc_file)), abs=1e-12)
    grid = rec.of("grid")[0]
    assert grid.n_grid_trials == cfg.space.full_grid_size()
    assert grid.fit_count == 3 * grid.n_grid_trials + 1
    rgs = rec.of("randomized_grid")[0]
    assert rgs.grid_stage_loss <= rgs.random_stage_loss


def test_record_round_trip_and_report(tmp_path, cleveland_path):
    cfg = small_config(tmp_path, cleveland_path, strategy="randomized_grid")
    rec = run_experiment(cfg)
    paths = emit_report(rec, tmp_path / "out")
    assert [p.name for p in paths] == ["report.txt", "summary.csv", "run.json"]
    again = RunRecord.load(tmp_path / "out" / "run.json")
    assert again == rec
    assert again.medians() == rec.medians()


def test_compare_twice_is_byte_identical(tmp_path, cleveland_path):
    recs = []
    for name in ("a", "b"):
        cfg = small_config(tmp_path, cleveland_path, out=str(tmp_path / name))
        recs.append(run_experiment(cfg))
    for s in ("random", "grid", "randomized_grid"):
        a = (tmp_path / "a" / f"trials_{s}.csv").read_bytes()
        assert a == (tmp_path / "b" / f"trials_{s}.csv").read_bytes()
        assert (tmp_path / "a" / f"roc_{s}.csv").read_bytes() == (tmp_path / "b" / f"roc_{s}.csv").read_bytes()

    def strip(rec):
        d = json.loads(rec.to_json())
        d.pop("timestamp")
        d["config"].pop("out")
        for o in d["outcomes"]:
            o.pop("duration")
        return d

    assert strip(recs[0]) == strip(recs[1])


def test_repeats_write_suffixed_files(tmp_path, cleveland_path):
    cfg = small_config(tmp_path, cleveland_path, strategy="random", repeats=2)
    rec = run_experiment(cfg)
    assert [o.trials_file for o in rec.outcomes] == ["trials_random_r00.csv", "trials_random_r01.csv"]
    assert len({o.master_seed for o in rec.outcomes}) == 2


def reference_record():
    cm = ConfusionMatrix(42, 31, 10, 8)
    o = StrategyOutcome(
        strategy="randomized_grid", repeat=0, master_seed=1, accuracy=accuracy(cm),
        precision=precision(cm), recall=recall(cm), f1=f1(cm), auc=0.84, confusion=cm.as_dict(),
        fit_count=676, duration=2.51, best_config={"max_depth": None}, validation_loss=0.2,
        random_stage_loss=0.22, grid_stage_loss=0.2, n_random_trials=50, n_grid_trials=625,
        roc_file="roc.csv", trials_file="t.csv", confusion_file="c.txt")
    return RunRecord(config={}, outcomes=[o], timestamp="t")


def test_report_row_for_reference_matrix(tmp_path):
    text = render_table(reference_record())
    row = parse_table(text)["Randomized-Grid"]
    assert [row[k][0] for k in ("accuracy", "precision", "recall", "f1")] == ["0.80", "0.81", "0.84", "0.82"]
    assert float(row["accuracy"][1]) == 73 / 91
    header = next(l for l in text.splitlines() if l.startswith("Strategy"))
    cols = ["Accuracy", "Precision", "Recall", "F1 Score", "Time-Taken(Seconds)"]
    assert [header.index(c) for c in cols] == sorted(header.index(c) for c in cols)


def test_report_two_decimals_match_record(tmp_path, cleveland_path):
    rec = run_experiment(small_config(tmp_path, cleveland_path))
    parsed = parse_table(render_table(rec))
    labels = {"random": "Random Search", "grid": "Grid Search", "randomized_grid": "Randomized-Grid"}
    for s, med in rec.medians().items():
        for key in ("accuracy", "precision", "recall", "f1", "auc", "duration"):
            two, full = parsed[labels[s]][key]
            assert float(full) == med[key]
            assert two == f"{med[key]:.2f}"


def test_report_errors(tmp_path):
    with pytest.raises(ReportError):
        emit_report(RunRecord(config={}, outcomes=[]), tmp_path)
    with pytest.raises(ReportError):
        emit_report(reference_record(), tmp_path / "missing")
    with pytest.raises(ReportError):
        emit_report(reference_record(), tmp_path, ["pdf"])


def test_nan_auc_survives_json():
    rec = reference_record()
    rec.outcomes[0].auc = math.nan
    assert math.isnan(RunRecord.from_json(rec.to_json()).outcomes[0].auc)


def test_stage_error_names_stage(tmp_path):
    cfg = small_config(tmp_path, tmp_path / "nope.csv")
    with pytest.raises(StageError) as info:
        run_experiment(cfg)
    assert info.value.stage == "data"


def test_cli_tune_compare_report(tmp_path, cleveland_path, capsys):
    cfg = write_yaml(tmp_path, cleveland_path)
    out = tmp_path / "cli"
    assert main(["tune", "--config", str(cfg), "--strategy", "random", "--out", str(out),
                 "--budget", "3", "--seed", "5"]) == 0
    rec = RunRecord.load(out / "run.json")
    assert rec.strategies() == ["random"] and rec.config["budget"] == 3 and rec.config["seed"] == 5
    (out / "report.txt").unlink()
    assert main(["report", "--out", str(out)]) == 0
    assert (out / "report.txt").exists()
    assert main(["compare", "--config", str(cfg), "--out", str(tmp_path / "cmp"), "--repeats", "1",
                 "--data", str(cleveland_path)]) == 0
    assert RunRecord.load(tmp_path / "cmp" / "run.json").strategies() == ["random", "grid", "randomized_grid"]
    assert "Randomized-Grid" in capsys.readouterr().out


def test_cli_failures_exit_nonzero(tmp_path, capsys):
    cfg = write_yaml(tmp_path, tmp_path / "missing.csv")
    assert main(["compare", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 1
    assert "stage 'data'" in capsys.readouterr().err
    assert main(["report", "--out", str(tmp_path / "empty")]) == 1
    assert main(["tune", "--config", str(tmp_path / "nope.yaml")]) == 1
    with pytest.raises(SystemExit):
        main(["tune", "--strategy", "bayes"])
