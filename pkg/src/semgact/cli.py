"""Command-line entry point: ``semgact {synth,extract,train,evaluate,sweep-pca,report}``.

Every command reads one TOML run file (``--config``) and writes under
``OUT/{data,features,models,reports}``. Outputs depend only on the config,
the seed and the input files, never on ``--threads``.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import re
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import classify
from .config import RunConfig, load_config
from .errors import ConfigError, SemgError
from .evaluate import (ConfusionMatrix, Dataset, compute_metrics, cross_validate, elm_protocol,
                       pca_accuracy_sweep, write_confusion_csv, write_json, write_summary_csv, _sub_seed)
from .features import FeatureTable, extract_matrix, parse_subset, read_feature_table, write_feature_table
from .ingest import default_synth_spec, generate_synthetic_dataset, load_dataset, write_dataset
from .pipeline import FeaturePipeline, PipelineConfig
from .preprocess import recording_frames

log = logging.getLogger("semgact")


def slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")


def _paths(cfg: RunConfig) -> dict:
    out = cfg.out_dir
    return {"data": out / "data", "features": out / "features" / "features.csv",
            "models": out / "models", "reports": out / "reports"}


def _threads(cfg: RunConfig) -> int:
    return cfg.threads or os.cpu_count() or 1


def _meta(cfg: RunConfig) -> dict:
    # threads and the output directory are left out so reports do not depend on them
    doc = cfg.to_dict()
    doc.pop("threads")
    doc.pop("out")
    return {"config": doc, "seeds": cfg.stage_seeds()}


def _load_dataset(cfg: RunConfig) -> Dataset:
    path = _paths(cfg)["features"]
    if not path.exists():
        raise ConfigError(f"feature matrix {path} not found; run `semgact extract` first")
    return Dataset.from_table(read_feature_table(path))


# ----------------------------------------------------------------- commands

def cmd_synth(cfg: RunConfig) -> Path:
    s = cfg.synth
    spec = replace(default_synth_spec(s.n_channels, s.min_samples), recordings_per_class=s.recordings_per_class,
                   sample_rate_hz=cfg.dataset.sample_rate_hz)
    recs = generate_synthetic_dataset(spec, cfg.stage_seed("synth"))
    out = _paths(cfg)["data"]
    write_dataset(recs, out, spec.label_set)
    counts = {lb: sum(r.action.name == lb for r in recs) for lb in spec.label_set}
    for lb, n in counts.items():
        print(f"{lb}: {n} recordings")
    print(f"wrote {len(recs)} recordings and manifest.json to {out}")
    return out / "manifest.json"


def cmd_extract(cfg: RunConfig) -> Path:
    manifest = cfg.dataset.manifest or _paths(cfg)["data"] / "manifest.json"
    if not Path(manifest).exists():
        raise ConfigError(f"manifest {manifest} not found; set dataset.manifest or run `semgact synth`")
    wcfg, fcfg = cfg.windowing_config(), cfg.feature_config()
    recs = load_dataset(manifest, cfg.dataset.channels, wcfg.window_length, cfg.dataset.sample_rate_hz)
    blocks, labels, rids, widx = [], [], [], []
    for rec in recs:
        frames = recording_frames(rec, wcfg)
        blocks.append(frames)
        labels += [rec.action.name] * len(frames)
        rids += [rec.id] * len(frames)
        widx += list(range(len(frames)))
    frames = np.concatenate(blocks)
    values, notes = extract_matrix(frames, fcfg, threads=_threads(cfg))
    for i, note in enumerate(notes):
        if note:
            log.warning("row %d (%s window %d): %s", i, rids[i], widx[i], "; ".join(note))
    label_set = sorted({r.action.name for r in recs}, key=lambda n: min(r.action.index for r in recs
                                                                        if r.action.name == n))
    table = FeatureTable(values, labels, rids, widx, fcfg.layout(cfg.dataset.channels), label_set, fcfg)
    path, _ = write_feature_table(table, _paths(cfg)["features"])
    print(f"wrote {values.shape[0]} rows x {values.shape[1]} features to {path}")
    return path


def cmd_train(cfg: RunConfig) -> list[Path]:
    """Fit pipeline and classifier on all rows, one model file per (classifier, subset)."""
    ds = _load_dataset(cfg)
    pipe_cfg = PipelineConfig(pca_components=cfg.evaluate.pca_components)
    out, written = _paths(cfg)["models"], []
    for c in cfg.evaluate.classifiers:
        clf = classify.parse_classifier(c)
        for s in cfg.evaluate.subsets:
            name = parse_subset(s).name
            X = ds.columns(s)
            pipe = FeaturePipeline(pipe_cfg).fit(X)
            model = classify.train(clf, pipe.transform(X), ds.y, ds.n_classes, cfg.stage_seed("train"))
            doc = {"classifier": clf.to_dict(), "subset": name, "labels": ds.label_set,
                   "pipeline": pipe.to_dict(), "model": classify.model_to_dict(model), **_meta(cfg)}
            written.append(write_json(doc, out / f"{slug(clf.name)}__{slug(name)}.json"))
            print(f"trained {clf.name} on {name}: {written[-1]}")
    return written


def _run_cv(ds: Dataset, subset, clf, pipe_cfg, cfg: RunConfig):
    ev, seed = cfg.evaluate, cfg.stage_seed("cv")
    seeds = [seed] + [_sub_seed(seed, 2, r) for r in range(1, ev.repeats)]
    runs = [cross_validate(ds, subset, clf, pipe_cfg, ev.cv_folds, s, _threads(cfg)) for s in seeds]
    pooled = ConfusionMatrix(sum(r.confusion.counts for r in runs), runs[0].confusion.labels)
    return pooled, [r.metrics.accuracy for r in runs], seeds


def cmd_evaluate(cfg: RunConfig) -> Path:
    ds = _load_dataset(cfg)
    ev = cfg.evaluate
    pipe_cfg = PipelineConfig(pca_components=ev.pca_components)
    out = _paths(cfg)["reports"]
    rows, results = [], []
    for s in ev.subsets:
        name = parse_subset(s).name
        for c in ev.classifiers:
            clf = classify.parse_classifier(c)
            cm, accs, seeds = _run_cv(ds, s, clf, pipe_cfg, cfg)
            m = compute_metrics(cm)
            write_confusion_csv(cm, out / f"confusion__{slug(clf.name)}__{slug(name)}.csv")
            rows.append((name, clf.name, m))
            results.append({"subset": name, "classifier": clf.name, "metrics": m.to_dict(),
                            "confusion": cm.counts.tolist(), "repeat_accuracy": accs, "cv_seeds": seeds})
            print(f"{name:<16} {clf.name:<8} accuracy={m.accuracy:.4f} kappa={m.cohens_kappa:.4f}")
    summary = write_summary_csv(rows, out / "summary.csv")
    elm_rows = []
    for a in ev.elm_activations:
        r = elm_protocol(ds, ev.elm_subset, a, ev.elm_tries, ev.elm_split, cfg.stage_seed("elm"),
                         ev.elm_hidden, pipe_cfg, _threads(cfg))
        elm_rows.append({"activation": a, "mean_train": r.mean_train, "mean_test": r.mean_test,
                         "train_accuracy": r.train_accuracy, "test_accuracy": r.test_accuracy})
        print(f"ELM-{a:<8} train={r.mean_train:.4f} test={r.mean_test:.4f}")
    if elm_rows:
        with open(out / "elm.csv", "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["activation", "mean_train", "mean_test"])
            for r in elm_rows:
                wr.writerow([r["activation"], repr(r["mean_train"]), repr(r["mean_test"])])
    write_json({"results": results, "elm": {"subset": parse_subset(ev.elm_subset).name, "rows": elm_rows},
                "labels": ds.label_set, "n_rows": int(ds.X.shape[0]), **_meta(cfg)}, out / "summary.json")
    return summary


def cmd_sweep_pca(cfg: RunConfig) -> Path:
    ds = _load_dataset(cfg)
    sw, ev, seed = cfg.sweep, cfg.evaluate, cfg.stage_seed("cv")
    name = parse_subset(sw.subset).name
    base = cross_validate(ds, sw.subset, sw.classifier, PipelineConfig(), ev.cv_folds, seed,
                          _threads(cfg)).metrics.accuracy
    rows = pca_accuracy_sweep(ds, sw.subset, sw.classifier, sw.k_values, ev.cv_folds, seed, _threads(cfg))
    within = [k for k, acc in rows if k != "full" and base - acc <= sw.max_drop]
    best = min(within) if within else None
    out = _paths(cfg)["reports"]
    out.mkdir(parents=True, exist_ok=True)
    path = out / "pca_sweep.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["k", "accuracy", "drop"])
        for k, acc in rows:
            wr.writerow([k, repr(acc), repr(base - acc)])
    write_json({"subset": name, "classifier": classify.parse_classifier(sw.classifier).name,
                "baseline_accuracy": base, "rows": [[k, a] for k, a in rows], "max_drop": sw.max_drop,
                "smallest_k_within_drop": best, "cv_seed": seed, **_meta(cfg)}, out / "pca_sweep.json")
    for k, acc in rows:
        print(f"k={k!s:>5} accuracy={acc:.4f} drop={base - acc:+.4f}")
    print(f"no-PCA accuracy {base:.4f}; smallest k within {sw.max_drop:.2f} drop: {best}")
    return path


def _fmt_table(header, rows) -> list[str]:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    line = lambda r: "| " + " | ".join(str(x).ljust(w) for x, w in zip(r, widths)) + " |"
    return [line(header), "|" + "|".join("-" * (w + 2) for w in widths) + "|", *map(line, rows)]


def cmd_report(cfg: RunConfig) -> Path:
    """Render the JSON reports as markdown tables in ``reports/report.md``."""
    out = _paths(cfg)["reports"]
    src = out / "summary.json"
    if not src.exists():
        raise ConfigError(f"{src} not found; run `semgact evaluate` first")
    doc = json.loads(src.read_text(encoding="utf-8"))
    lines = ["# Classification report", "", f"Rows: {doc['n_rows']}; classes: {', '.join(doc['labels'])}", "",
             "## Accuracy by feature subset", ""]
    lines += _fmt_table(["subset", "classifier", "accuracy", "balanced", "kappa"],
                        [(r["subset"], r["classifier"], f"{r['metrics']['accuracy']:.4f}",
                          f"{r['metrics']['balanced_accuracy']:.4f}", f"{r['metrics']['cohens_kappa']:.4f}")
                         for r in doc["results"]])
    for r in doc["results"]:
        m = r["metrics"]
        lines += ["", f"## {r['classifier']} / {r['subset']}", ""]
        lines += _fmt_table(["class", "sensitivity", "specificity", "precision", "f_measure", "misclass"],
                            [(lb, *(f"{m[k][i]:.4f}" for k in ("sensitivity", "specificity", "precision",
                                                              "f_measure", "misclassification_rate")))
                             for i, lb in enumerate(m["labels"])])
    if doc["elm"]["rows"]:
        lines += ["", f"## ELM activations on {doc['elm']['subset']}", ""]
        lines += _fmt_table(["activation", "mean train", "mean test"],
                            [(r["activation"], f"{r['mean_train']:.4f}", f"{r['mean_test']:.4f}")
                             for r in doc["elm"]["rows"]])
    sweep = out / "pca_sweep.json"
    if sweep.exists():
        sw = json.loads(sweep.read_text(encoding="utf-8"))
        lines += ["", f"## PCA sweep ({sw['classifier']} / {sw['subset']})", "",
                  f"No-PCA accuracy {sw['baseline_accuracy']:.4f}; smallest k within "
                  f"{sw['max_drop']:.2f} drop: {sw['smallest_k_within_drop']}", ""]
        lines += _fmt_table(["k", "accuracy"], [(k, f"{a:.4f}") for k, a in sw["rows"]])
    text = "\n".join(lines) + "\n"
    path = out / "report.md"
    path.write_text(text, encoding="utf-8")
    print(text, end="")
    return path


COMMANDS = {"synth": cmd_synth, "extract": cmd_extract, "train": cmd_train, "evaluate": cmd_evaluate,
            "sweep-pca": cmd_sweep_pca, "report": cmd_report}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semgact", description="sEMG action classification pipeline")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", type=Path, help="TOML run file")
    p.add_argument("--seed", type=int, help="master seed (overrides the run file)")
    p.add_argument("--threads", type=int, help="worker threads (default: available cores)")
    p.add_argument("--out", help="output directory (overrides the run file)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, seed=args.seed, out=args.out, threads=args.threads)
        COMMANDS[args.command](cfg)
    except (SemgError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
