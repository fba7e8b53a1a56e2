"""``sentimen`` command line: ingest, preprocess, crossval, tune, train, evaluate, predict."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import platform
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .. import __version__
from ..balance import SMOTE
from ..classical import DecisionTree, LinearSVM, MultinomialNB, load_model, save_model, tune_decision_tree
from ..corpus import (
    LABEL_NAMES,
    SentimentLabel,
    clean_dataset,
    class_counts,
    read_reviews_csv,
    read_samples_csv,
    stratified_split,
    stratified_subsample,
    write_samples_csv,
)
from ..evaluation import (
    ConfusionMatrix,
    PipelineSpec,
    cross_validate,
    cv_to_dict,
    evaluate_predictions,
    write_confusion_csv,
    write_cv_csv,
    write_json,
)
from ..exceptions import ConfigError, DataError, SentimenError
from ..features import UNK, TfIdfModel, TfidfVectorizer, Vocabulary
from ..neural import TrainConfig, encode_docs, load_checkpoint, predict_bilstm, save_checkpoint, train_bilstm
from ..preprocess import TextPreprocessor
from ..rng import ALGORITHM
from .config import load_config, parse_override

log = logging.getLogger("sentimen")

MODEL_DESCRIPTOR = "model.json"
MANIFEST_VERSION = 1


# ---------------------------------------------------------------- helpers

def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(path, command, argv, cfg, inputs, outputs):
    manifest = {
        "version": MANIFEST_VERSION,
        "tool": "sentimen",
        "tool_version": __version__,
        "command": command,
        "argv": list(argv),
        "seed": cfg["seed"],
        "rng": ALGORITHM,
        "config": cfg,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": [str(p) for p in outputs],
        "python": platform.python_version(),
        "numpy": np.__version__,
        "created_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    write_json(path, manifest)


def _preprocessor(cfg):
    paths, pp = cfg["paths"], cfg["preprocess"]
    return TextPreprocessor(
        slang_path=paths["slang"], stopwords_path=paths["stopwords"], roots_path=paths["roots"],
        rules_path=paths["rules"], use_slang=pp["slang"], use_stopwords=pp["stopwords"],
        use_stemmer=pp["stemming"],
    ).fit()


def _input_path(args, cfg):
    path = args.input or cfg["paths"]["input"]
    if path is None:
        raise ConfigError("no input file given (use --input or paths.input)")
    return Path(path)


def _tokenized(path, cfg):
    """Samples with tokens; raw CSVs are cleaned and preprocessed on the fly."""
    samples = read_samples_csv(path)
    if all(not s.tokens for s in samples):
        samples = _add_tokens(clean_dataset(samples), _preprocessor(cfg))
    samples = [s for s in samples if s.tokens]
    if not samples:
        raise DataError(f"{path}: no samples with tokens")
    return samples


def _add_tokens(samples, pre):
    return [s.with_tokens(pre.process(s.text)) for s in samples]


def _classifier(name, cfg):
    if name == "mnb":
        return MultinomialNB(alpha=cfg["mnb"]["alpha"])
    if name == "svm":
        return LinearSVM(C=cfg["svm"]["C"])
    return DecisionTree(**cfg["tree"])


def _spec(name, cfg, classifier=None):
    smote = SMOTE(k_neighbors=cfg["smote"]["k"], random_state=cfg["seed"]) if cfg["smote"]["enabled"] else None
    return PipelineSpec(classifier or _classifier(name, cfg), TfidfVectorizer(cfg["tfidf"]["max_features"]), smote, name)


def _xy(samples):
    return [list(s.tokens) for s in samples], np.array([int(s.label) for s in samples], dtype=np.int64)


def _train_config(cfg):
    return TrainConfig(seed=cfg["seed"], **cfg["neural"])


# ---------------------------------------------------------------- commands

def cmd_ingest(args, cfg):
    src = _input_path(args, cfg)
    raw = read_reviews_csv(src)
    samples = clean_dataset(raw)
    out = Path(args.output)
    write_samples_csv(out, samples)
    log.info("ingest: %d rows -> %d samples %s", len(raw), len(samples), dict(zip(LABEL_NAMES, class_counts(samples))))
    return [src], [out]


def cmd_preprocess(args, cfg):
    src = _input_path(args, cfg)
    samples = clean_dataset(read_samples_csv(src))
    tokenized = _add_tokens(samples, _preprocessor(cfg))
    kept = [s for s in tokenized if s.tokens]
    log.info("preprocess: dropped %d reviews with no tokens left", len(tokenized) - len(kept))
    out = Path(args.output)
    write_samples_csv(out, kept, with_tokens=True)
    return [src], [out]


def cmd_crossval(args, cfg):
    src = _input_path(args, cfg)
    X, y = _xy(_tokenized(src, cfg))
    out_dir = Path(args.output_dir or cfg["paths"]["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    results = []
    outputs = [out_dir / "cv_report.csv", out_dir / "cv_report.json"]
    for name in cfg["classifiers"]:
        res = cross_validate(X, y, _spec(name, cfg), cfg["folds"], cfg["seed"], n_jobs=cfg["threads"])
        results.append(res)
        total = sum(f.report.confusion.counts for f in res.folds)
        path = out_dir / f"confusion_{name}.csv"
        write_confusion_csv(path, ConfusionMatrix(total))
        outputs.append(path)
        log.info("crossval %s: %s", name, {k: v for k, v in res.mean.items() if v is not None})
    write_cv_csv(outputs[0], results)
    write_json(outputs[1], cv_to_dict(results))
    return [src], outputs


def cmd_tune(args, cfg):
    src = _input_path(args, cfg)
    X, y = _xy(_tokenized(src, cfg))
    spec = _spec("tree", cfg)
    result = tune_decision_tree(
        X, y, cfg["tune"]["space"], cfg["tune"]["n_iter"], cfg["seed"], cfg["folds"],
        spec.vectorizer, spec.balancer, n_jobs=cfg["threads"],
    )
    out = Path(args.output)
    write_json(out, result.to_dict())
    log.info("tune: best %s macro F1 %.4f", result.best_params, result.best_score)
    return [src], [out]


def _write_descriptor(model_dir, family, cfg, extra=None):
    write_json(model_dir / MODEL_DESCRIPTOR, {
        "version": 1,
        "family": family,
        "preprocess": cfg["preprocess"],
        "paths": {k: cfg["paths"][k] for k in ("slang", "stopwords", "roots", "rules")},
        **(extra or {}),
    })


def cmd_train_ml(args, cfg):
    src = _input_path(args, cfg)
    X, y = _xy(_tokenized(src, cfg))
    name = args.classifier or cfg["classifiers"][0]
    spec = _spec(name, cfg)
    vec = spec.vectorizer.fit(X)
    Xt = vec.transform(X)
    if spec.balancer is not None:
        Xt, y = spec.balancer.fit_resample(Xt, y)
    clf = spec.classifier.fit(Xt, y)
    model_dir = Path(args.model_dir)
    model_dir.mkdir(parents=True, exist_ok=True)
    vec.model_.save(model_dir / "tfidf.json")
    save_model(model_dir / "classifier.bin", clf)
    _write_descriptor(model_dir, "ml", cfg, {"classifier": name})
    return [src], [model_dir / "tfidf.json", model_dir / "classifier.bin", model_dir / MODEL_DESCRIPTOR]


def cmd_train_dl(args, cfg):
    src = _input_path(args, cfg)
    samples = _tokenized(src, cfg)
    if cfg["subsample"] is not None:
        samples = stratified_subsample(samples, cfg["subsample"], cfg["seed"])
    split = stratified_split(samples, cfg["split"]["fractions"], cfg["seed"], cfg["split"]["min_per_class"])
    config = _train_config(cfg)
    params, history, vocab, max_len = train_bilstm(split, None, config)
    model_dir = Path(args.model_dir)
    model_dir.mkdir(parents=True, exist_ok=True)
    vocab.save(model_dir / "vocab.json")
    save_checkpoint(model_dir / "model.ckpt", params, max_len, config)
    history.write_csv(model_dir / "history.csv")
    _write_descriptor(model_dir, "dl", cfg, {"best_epoch": history.best_epoch, "stop_reason": history.stop_reason})
    outputs = [model_dir / n for n in ("vocab.json", "model.ckpt", "history.csv", MODEL_DESCRIPTOR)]
    if split.test:
        ids, lengths = encode_docs([s.tokens for s in split.test], vocab, max_len)
        labels, proba = predict_bilstm(params, ids, lengths)
        y_test = np.array([int(s.label) for s in split.test])
        rep = evaluate_predictions(y_test, labels, proba)
        write_json(model_dir / "test_report.json", rep.to_dict())
        write_confusion_csv(model_dir / "test_confusion.csv", rep.confusion)
        outputs += [model_dir / "test_report.json", model_dir / "test_confusion.csv"]
        log.info("train-dl: test accuracy %.4f weighted F1 %.4f macro F1 %.4f", rep.accuracy, rep.weighted_f1, rep.macro_f1)
    return [src], outputs


class LoadedModel:
    """Either model family behind one ``predict_proba(token lists)`` call."""

    def __init__(self, model_dir):
        model_dir = Path(model_dir)
        desc_path = model_dir / MODEL_DESCRIPTOR
        if not desc_path.exists():
            raise ConfigError(f"{model_dir}: not a model directory ({MODEL_DESCRIPTOR} missing)")
        self.descriptor = json.loads(desc_path.read_text(encoding="utf-8"))
        if self.descriptor.get("version") != 1:
            raise ConfigError(f"{desc_path}: unsupported version {self.descriptor.get('version')!r}")
        self.family = self.descriptor["family"]
        if self.family == "ml":
            self.vectorizer = TfidfVectorizer.from_model(TfIdfModel.load(model_dir / "tfidf.json"))
            self.classifier = load_model(model_dir / "classifier.bin")
        elif self.family == "dl":
            self.vocab = Vocabulary.load(model_dir / "vocab.json")
            self.params, header = load_checkpoint(model_dir / "model.ckpt")
            self.max_len = header["max_len"]
        else:
            raise ConfigError(f"{desc_path}: unknown model family {self.family!r}")
        self.files = sorted(p for p in model_dir.iterdir() if p.is_file())

    def predict_proba(self, docs):
        if self.family == "ml":
            X = self.vectorizer.transform(docs)
            P = np.zeros((X.shape[0], len(SentimentLabel)))
            if hasattr(self.classifier, "predict_proba"):
                P[:, self.classifier.classes_] = self.classifier.predict_proba(X)
            else:
                # decision values only: one-hot on the predicted class
                P[np.arange(X.shape[0]), self.classifier.predict(X)] = 1.0
            return P, hasattr(self.classifier, "predict_proba")
        # an empty review is read as a single unknown token
        docs = [list(d) or [UNK] for d in docs]
        ids, lengths = encode_docs(docs, self.vocab, self.max_len)
        return predict_bilstm(self.params, ids, lengths)[1], True


def _model_cfg(model, cfg):
    """The model's preprocessing settings win over the current config."""
    cfg = dict(cfg)
    cfg["preprocess"] = model.descriptor.get("preprocess", cfg["preprocess"])
    cfg["paths"] = {**cfg["paths"], **{k: v for k, v in model.descriptor.get("paths", {}).items() if v}}
    return cfg


def cmd_evaluate(args, cfg):
    model = LoadedModel(args.model_dir)
    src = _input_path(args, cfg)
    samples = _tokenized(src, _model_cfg(model, cfg))
    X, y = _xy(samples)
    proba, calibrated = model.predict_proba(X)
    pred = np.argmax(proba, axis=1)
    rep = evaluate_predictions(y, pred, proba if calibrated else None)
    out = Path(args.output)
    write_json(out, rep.to_dict())
    outputs = [out]
    if args.confusion:
        write_confusion_csv(args.confusion, rep.confusion)
        outputs.append(Path(args.confusion))
    log.info("evaluate: accuracy %.4f weighted F1 %.4f", rep.accuracy, rep.weighted_f1)
    return [src, *model.files], outputs


def cmd_predict(args, cfg):
    model = LoadedModel(args.model_dir)
    pre = _preprocessor(_model_cfg(model, cfg))
    if args.input:
        lines = Path(args.input).read_text(encoding="utf-8").splitlines()
        inputs = [Path(args.input)]
    else:
        lines = sys.stdin.read().splitlines()
        inputs = []
    lines = [ln for ln in lines if ln.strip()]
    proba, _ = model.predict_proba([pre.process(ln) for ln in lines])
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for row in proba:
            label = SentimentLabel(int(np.argmax(row))).display
            out.write(label + "\t" + "\t".join(f"{p:.6f}" for p in row) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return [*inputs, *model.files], ([Path(args.output)] if args.output else [])


COMMANDS = {
    "ingest": cmd_ingest,
    "preprocess": cmd_preprocess,
    "crossval": cmd_crossval,
    "tune": cmd_tune,
    "train-ml": cmd_train_ml,
    "train-dl": cmd_train_dl,
    "evaluate": cmd_evaluate,
    "predict": cmd_predict,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="sentimen", description=__doc__)
    parser.add_argument("--version", action="version", version=f"sentimen {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="YAML config file")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key, e.g. --set neural.max_epochs=3 (repeatable)")
    common.add_argument("--seed", type=int, help="master seed (default 42)")
    common.add_argument("--threads", type=int, help="worker threads for fold-level parallelism")
    common.add_argument("--manifest", help="manifest path (default: next to the primary output)")
    common.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="raw Ulasan/Rating CSV -> cleaned labelled CSV")
    p.add_argument("--input", "-i")
    p.add_argument("--output", "-o", required=True)

    p = sub.add_parser("preprocess", parents=[common], help="add a tokens column, drop empty reviews")
    p.add_argument("--input", "-i")
    p.add_argument("--output", "-o", required=True)

    p = sub.add_parser("crossval", parents=[common], help="stratified k-fold CV of the classical models")
    p.add_argument("--input", "-i")
    p.add_argument("--output-dir", "-o")
    p.add_argument("--classifier", nargs="+", choices=["tree", "svm", "mnb"])
    p.add_argument("--folds", type=int)

    p = sub.add_parser("tune", parents=[common], help="random search over tree hyperparameters")
    p.add_argument("--input", "-i")
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--n-iter", type=int)
    p.add_argument("--folds", type=int)

    p = sub.add_parser("train-ml", parents=[common], help="fit TF-IDF + SMOTE + a classifier on all data")
    p.add_argument("--input", "-i")
    p.add_argument("--model-dir", "-m", required=True)
    p.add_argument("--classifier", choices=["tree", "svm", "mnb"])

    p = sub.add_parser("train-dl", parents=[common], help="train the BiLSTM on a stratified split")
    p.add_argument("--input", "-i")
    p.add_argument("--model-dir", "-m", required=True)
    p.add_argument("--subsample", type=int)
    p.add_argument("--max-epochs", type=int)

    p = sub.add_parser("evaluate", parents=[common], help="report metrics of a saved model on a dataset")
    p.add_argument("--model-dir", "-m", required=True)
    p.add_argument("--input", "-i")
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--confusion", help="also write the confusion matrix CSV here")

    p = sub.add_parser("predict", parents=[common], help="label text lines from a file or stdin")
    p.add_argument("--model-dir", "-m", required=True)
    p.add_argument("--input", "-i", help="one review per line (default: stdin)")
    p.add_argument("--output", "-o", help="default: stdout")
    return parser


def _flag_overrides(args):
    out = []
    if args.seed is not None:
        out.append({"seed": args.seed})
    if args.threads is not None:
        out.append({"threads": args.threads})
    for attr, key in (("folds", ("folds",)), ("n_iter", ("tune", "n_iter")), ("subsample", ("subsample",)),
                      ("max_epochs", ("neural", "max_epochs"))):
        value = getattr(args, attr, None)
        if value is not None:
            node = value
            for k in reversed(key):
                node = {k: node}
            out.append(node)
    clf = getattr(args, "classifier", None)
    if isinstance(clf, list):
        out.append({"classifiers": clf})
    return out


def _manifest_path(args, outputs):
    if args.manifest:
        return Path(args.manifest)
    if args.command == "crossval":
        return Path(args.output_dir) / "manifest.json"
    if args.command in ("train-ml", "train-dl"):
        return Path(args.model_dir) / "manifest.json"
    if outputs:
        return outputs[0].with_name(outputs[0].name + ".manifest.json")
    return None


def run_command(argv):
    """Run one subcommand; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        overrides = [parse_override(s) for s in args.set] + _flag_overrides(args)
        cfg = load_config(args.config, overrides)
        if getattr(args, "output_dir", None) is None and args.command == "crossval":
            args.output_dir = cfg["paths"]["output_dir"]
        inputs, outputs = COMMANDS[args.command](args, cfg)
        manifest = _manifest_path(args, outputs)
        if manifest is not None:
            write_manifest(manifest, args.command, argv, cfg, inputs, outputs)
    except SentimenError as exc:
        print(f"sentimen {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))
