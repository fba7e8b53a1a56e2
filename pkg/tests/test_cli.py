import csv
import io
import json

import pytest

from sentimen.cli import config as cli_config
from sentimen.cli.main import LoadedModel, run_command
from sentimen.exceptions import ConfigError

FIXTURE_MODEL = "fixture_model"

# small network so train-dl finishes in seconds
TINY_DL = ["--set", "neural.embed_dim=8", "--set", "neural.hidden=6", "--set", "neural.layers=1",
           "--set", "neural.batch_size=32"]


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_ingest_six_row_fixture(data_dir, tmp_path):
    out = tmp_path / "clean.csv"
    assert run_command(["ingest", "-i", str(data_dir / "six_rows.csv"), "-o", str(out)]) == 0
    rows = read_rows(out)
    assert len(rows) == 4
    manifest = json.loads((tmp_path / "clean.csv.manifest.json").read_text())
    for key in ("version", "tool_version", "command", "seed", "config", "inputs", "outputs", "created_at"):
        assert key in manifest
    assert manifest["seed"] == 42
    assert list(manifest["inputs"].values())[0] and len(list(manifest["inputs"].values())[0]) == 64


def test_missing_rating_column(data_dir, tmp_path, capsys):
    code = run_command(["ingest", "-i", str(data_dir / "no_rating.csv"), "-o", str(tmp_path / "x.csv")])
    assert code == 3
    assert "Rating" in capsys.readouterr().err


def test_bad_rating_row_names_row(data_dir, tmp_path, capsys):
    code = run_command(["ingest", "-i", str(data_dir / "bad_rating.csv"), "-o", str(tmp_path / "x.csv")])
    assert code == 3
    err = capsys.readouterr().err
    assert "lima" in err or "2" in err


def test_config_errors(tmp_path, data_dir, capsys):
    src = str(data_dir / "six_rows.csv")
    assert run_command(["ingest", "-i", src, "-o", str(tmp_path / "a.csv"), "--set", "nope=1"]) == 2
    assert "nope" in capsys.readouterr().err
    assert run_command(["ingest", "-i", str(tmp_path / "missing.csv"), "-o", str(tmp_path / "b.csv")]) in (2, 3)
    assert "missing.csv" in capsys.readouterr().err
    assert run_command(["ingest", "-i", src, "-o", str(tmp_path / "c.csv"), "-c", str(tmp_path / "no.yaml")]) == 2
    assert run_command(["crossval", "-i", src, "-o", str(tmp_path), "--folds", "1"]) == 2


def test_config_precedence(tmp_path):
    cfg_file = tmp_path / "cfg.yaml"
    cfg_file.write_text("seed: 7\nfolds: 3\nsvm:\n  C: 0.5\n", encoding="utf-8")
    cfg = cli_config.load_config(cfg_file, [cli_config.parse_override("folds=4")])
    assert cfg["seed"] == 7 and cfg["folds"] == 4 and cfg["svm"]["C"] == 0.5
    assert cfg["tfidf"]["max_features"] == 3000
    with pytest.raises(ConfigError, match="svm.gamma"):
        cli_config.load_config(None, [cli_config.parse_override("svm.gamma=1")])


def test_seed_flag_beats_config(tmp_path, data_dir):
    cfg_file = tmp_path / "cfg.yaml"
    cfg_file.write_text("seed: 7\n", encoding="utf-8")
    out = tmp_path / "clean.csv"
    assert run_command(["ingest", "-i", str(data_dir / "six_rows.csv"), "-o", str(out),
                        "-c", str(cfg_file), "--seed", "9"]) == 0
    assert json.loads((tmp_path / "clean.csv.manifest.json").read_text())["seed"] == 9


def test_preprocess_adds_tokens(data_dir, tmp_path):
    out = tmp_path / "tok.csv"
    assert run_command(["preprocess", "-i", str(data_dir / "six_rows.csv"), "-o", str(out)]) == 0
    rows = read_rows(out)
    assert "tokens" in rows[0]
    assert all(r["tokens"] for r in rows)


def test_predict_with_frozen_model(data_dir, tmp_path, monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("aplikasi bagus\n"))
    assert run_command(["predict", "-m", str(data_dir / FIXTURE_MODEL), "--manifest", str(tmp_path / "m.json")]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    fields = lines[0].split("\t")
    assert fields[0] == "Positif"
    probs = [float(v) for v in fields[1:]]
    assert len(probs) == 3 and abs(sum(probs) - 1) < 1e-5


def test_predict_file_output(data_dir, tmp_path):
    src = tmp_path / "lines.txt"
    src.write_text("aplikasi bagus\n\njelek sering error\n", encoding="utf-8")
    out = tmp_path / "pred.tsv"
    assert run_command(["predict", "-m", str(data_dir / FIXTURE_MODEL), "-i", str(src), "-o", str(out)]) == 0
    labels = [ln.split("\t")[0] for ln in out.read_text().splitlines()]
    assert labels == ["Positif", "Negatif"]


def test_not_a_model_dir(tmp_path, capsys):
    assert run_command(["predict", "-m", str(tmp_path), "-i", str(tmp_path / "x")]) == 2
    assert "model.json" in capsys.readouterr().err


def test_train_ml_is_reproducible_and_evaluates(synthetic_csv, tmp_path):
    for name in ("a", "b"):
        assert run_command(["train-ml", "-i", str(synthetic_csv), "-m", str(tmp_path / name), "--classifier", "tree"]) == 0
    for f in ("classifier.bin", "tfidf.json", "model.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    report = tmp_path / "eval.json"
    conf = tmp_path / "conf.csv"
    assert run_command(["evaluate", "-m", str(tmp_path / "a"), "-i", str(synthetic_csv), "-o", str(report),
                        "--confusion", str(conf)]) == 0
    rep = json.loads(report.read_text())
    assert rep["accuracy"] > 0.9  # training data
    assert conf.exists()


def test_svm_model_predicts_without_auc(synthetic_csv, tmp_path):
    assert run_command(["train-ml", "-i", str(synthetic_csv), "-m", str(tmp_path / "svm"), "--classifier", "svm"]) == 0
    report = tmp_path / "eval.json"
    assert run_command(["evaluate", "-m", str(tmp_path / "svm"), "-i", str(synthetic_csv), "-o", str(report)]) == 0
    assert json.loads(report.read_text())["auc"] is None


def test_crossval_outputs(synthetic_csv, tmp_path):
    out = tmp_path / "cv"
    assert run_command(["crossval", "-i", str(synthetic_csv), "-o", str(out), "--classifier", "mnb", "--folds", "3"]) == 0
    rows = read_rows(out / "cv_report.csv")
    assert {r["model"] for r in rows} == {"mnb"}
    assert (out / "confusion_mnb.csv").exists() and (out / "manifest.json").exists()
    assert json.loads((out / "cv_report.json").read_text())["version"] == 1


def test_tune_is_reproducible(synthetic_csv, tmp_path):
    outs = [tmp_path / "t1.json", tmp_path / "t2.json"]
    for out in outs:
        assert run_command(["tune", "-i", str(synthetic_csv), "-o", str(out), "--n-iter", "2", "--folds", "2"]) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()
    assert len(json.loads(outs[0].read_text())["candidates"]) == 2


def test_train_dl_and_predict(synthetic_csv, tmp_path, capsys):
    model = tmp_path / "dl"
    argv = ["train-dl", "-i", str(synthetic_csv), "-m", str(model), "--max-epochs", "2", "--set", "neural.patience=1", *TINY_DL]
    assert run_command(argv) == 0
    for f in ("vocab.json", "model.ckpt", "history.csv", "model.json", "test_report.json", "manifest.json"):
        assert (model / f).exists()
    assert LoadedModel(model).family == "dl"
    src = tmp_path / "lines.txt"
    src.write_text("aplikasi bagus\n", encoding="utf-8")
    capsys.readouterr()
    assert run_command(["predict", "-m", str(model), "-i", str(src)]) == 0
    fields = capsys.readouterr().out.strip().split("\t")
    assert fields[0] in ("Positif", "Netral", "Negatif") and len(fields) == 4
    # identical reruns give identical weights
    assert run_command([*argv[:3], "-m", str(tmp_path / "dl2"), *argv[5:]]) == 0
    assert (model / "model.ckpt").read_bytes() == (tmp_path / "dl2" / "model.ckpt").read_bytes()
