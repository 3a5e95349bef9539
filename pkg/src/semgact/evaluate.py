"""Cross-validation, the ELM shuffle-split protocol, metrics and report files."""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import classify
from .classify import ClassifierConfig, parse_classifier
from .errors import ConfigError, DimError, EmptyMatrixError, StratificationError
from .features.layout import FeatureLayout, build_layout, parse_subset
from .pipeline import FeaturePipeline, PipelineConfig

log = logging.getLogger(__name__)


# ------------------------------------------------------------------ metrics

@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Rows are true classes, columns predicted classes."""

    counts: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise DimError(f"confusion matrix must be square, got {c.shape}")
        if np.any(c < 0):
            raise ValueError("confusion matrix counts must be non-negative")
        object.__setattr__(self, "counts", c.astype(np.int64))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(c.shape[0])))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_predictions(cls, y_true, y_pred, n_classes: int, labels=()):
        counts = np.zeros((n_classes, n_classes), dtype=np.int64)
        np.add.at(counts, (np.asarray(y_true, int), np.asarray(y_pred, int)), 1)
        return cls(counts, tuple(labels))


@dataclass
class MetricsReport:
    accuracy: float
    balanced_accuracy: float
    cohens_kappa: float
    sensitivity: list
    specificity: list
    precision: list
    f_measure: list
    misclassification_rate: list
    labels: list
    zero_division: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _ratio(num, den, flags, what):
    out = np.zeros_like(num, dtype=float)
    ok = den > 0
    out[ok] = num[ok] / den[ok]
    for c in np.flatnonzero(~ok):
        flags.append(f"{what}[{c}]")
    return out


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Per-class one-vs-rest rates plus accuracy, balanced accuracy and Cohen's kappa.

    Any ratio with a zero denominator is reported as 0 and listed in
    ``zero_division``.
    """
    if not isinstance(cm, ConfusionMatrix):
        cm = ConfusionMatrix(np.asarray(cm))
    C = cm.counts.astype(float)
    total = C.sum()
    if total == 0:
        raise EmptyMatrixError("confusion matrix has no samples")
    flags = []
    tp = np.diag(C)
    row = C.sum(axis=1)
    col = C.sum(axis=0)
    fp = col - tp
    fn = row - tp
    tn = total - tp - fp - fn
    sens = _ratio(tp, row, flags, "sensitivity")
    spec = _ratio(tn, tn + fp, flags, "specificity")
    prec = _ratio(tp, col, flags, "precision")
    f = _ratio(2 * prec * sens, prec + sens, flags, "f_measure")
    p_o = tp.sum() / total
    p_e = float(np.sum(row * col)) / total ** 2
    if p_e < 1:
        kappa = (p_o - p_e) / (1 - p_e)
    else:
        kappa = 0.0
        flags.append("cohens_kappa")
    return MetricsReport(
        accuracy=float(p_o), balanced_accuracy=float(np.mean(sens)), cohens_kappa=float(kappa),
        sensitivity=sens.tolist(), specificity=spec.tolist(), precision=prec.tolist(),
        f_measure=f.tolist(), misclassification_rate=(1 - sens).tolist(),
        labels=list(cm.labels), zero_division=flags)


# -------------------------------------------------------------------- folds

def stratified_kfold(labels, k: int = 10, seed: int = 0) -> list[np.ndarray]:
    """Partition indices into ``k`` folds, dealing each class round-robin after a seeded shuffle."""
    y = np.asarray(labels)
    if k < 2:
        raise ConfigError("cross-validation needs k >= 2")
    classes, counts = np.unique(y, return_counts=True)
    if np.any(counts < k):
        small = classes[counts < k].tolist()
        raise StratificationError(f"classes {small} have fewer than k={k} members")
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    offset = 0
    for c in classes:
        idx = rng.permutation(np.flatnonzero(y == c))
        for pos, i in enumerate(idx):
            folds[(pos + offset) % k].append(int(i))
        # rotate the starting fold so remainders spread across folds
        offset = (offset + len(idx)) % k
    return [np.sort(np.asarray(f, dtype=int)) for f in folds]


def stratified_shuffle_split(labels, train_fraction: float = 0.8, seed: int = 0):
    """Per-class seeded split; each class keeps ``round(n_c * train_fraction)`` training rows."""
    y = np.asarray(labels)
    rng = np.random.default_rng(seed)
    train, test = [], []
    for c in np.unique(y):
        idx = rng.permutation(np.flatnonzero(y == c))
        n_tr = min(max(int(round(len(idx) * train_fraction)), 1), len(idx))
        train.extend(idx[:n_tr].tolist())
        test.extend(idx[n_tr:].tolist())
    return np.sort(np.array(train, dtype=int)), np.sort(np.array(test, dtype=int))


def canonical_order(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row order that depends only on row contents, so results ignore input order."""
    keys = [X[:, j] for j in range(X.shape[1] - 1, -1, -1)] + [y]
    return np.lexsort(keys)


# -------------------------------------------------------------- experiments

@dataclass
class Dataset:
    """Feature matrix with integer labels and the layout describing its columns."""

    X: np.ndarray
    y: np.ndarray
    label_set: list
    layout: FeatureLayout = field(default_factory=build_layout)

    @classmethod
    def from_table(cls, table) -> "Dataset":
        return cls(np.asarray(table.values, float), table.y, list(table.label_set), table.layout)

    @property
    def n_classes(self) -> int:
        return len(self.label_set)

    def columns(self, subset) -> np.ndarray:
        spec = parse_subset(subset)
        return self.X[:, self.layout.indices(spec.families)]


@dataclass
class CVResult:
    confusion: ConfusionMatrix
    metrics: MetricsReport
    predictions: np.ndarray
    folds: list


def _fold_run(X, y, train_idx, test_idx, clf: ClassifierConfig, pipe_cfg: PipelineConfig,
              n_classes: int, seed: int):
    pipe = FeaturePipeline(pipe_cfg).fit(X[train_idx])
    model = classify.train(clf, pipe.transform(X[train_idx]), y[train_idx], n_classes, seed)
    return classify.predict(model, pipe.transform(X[test_idx]))


def _map(fn, items, threads):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(it) for it in items]


def _sub_seed(seed: int, *path: int) -> int:
    return int(np.random.SeedSequence([seed, *path]).generate_state(1)[0])


def cross_validate(dataset: Dataset, subset_spec="All", classifier_cfg="1-NN",
                   pipeline_cfg: PipelineConfig = PipelineConfig(), k: int = 10, seed: int = 0,
                   threads: int = 1) -> CVResult:
    """Stratified k-fold CV with the feature pipeline fitted inside each training split.

    Metrics come from the confusion matrix pooled over all folds.
    """
    if k < 2:
        raise ConfigError("cross-validation needs k >= 2")
    clf = parse_classifier(classifier_cfg)
    X = dataset.columns(subset_spec)
    y = np.asarray(dataset.y, dtype=int)
    order = canonical_order(X, y)
    Xc, yc = X[order], y[order]
    folds = stratified_kfold(yc, k, seed)
    all_idx = np.arange(len(yc))

    def run(f):
        test = folds[f]
        train = np.setdiff1d(all_idx, test, assume_unique=True)
        return _fold_run(Xc, yc, train, test, clf, pipeline_cfg, dataset.n_classes, _sub_seed(seed, 1, f))

    preds_by_fold = _map(run, list(range(k)), threads)
    pred_c = np.empty_like(yc)
    for f, p in zip(folds, preds_by_fold):
        pred_c[f] = p
    pred = np.empty_like(y)
    pred[order] = pred_c
    cm = ConfusionMatrix.from_predictions(y, pred, dataset.n_classes, dataset.label_set)
    metrics = compute_metrics(cm)
    metrics.provenance = {"protocol": f"{k}-fold", "seed": seed, "classifier": clf.name,
                          "subset": parse_subset(subset_spec).name,
                          "pca_components": pipeline_cfg.pca_components}
    return CVResult(cm, metrics, pred, [order[f] for f in folds])


def repeated_cross_validate(dataset: Dataset, subset_spec="All", classifier_cfg="1-NN",
                            pipeline_cfg: PipelineConfig = PipelineConfig(), k: int = 10,
                            repeats: int = 10, seed: int = 0, threads: int = 1):
    """``repeats`` runs of k-fold CV with derived seeds; returns the runs and their mean accuracy."""
    runs = [cross_validate(dataset, subset_spec, classifier_cfg, pipeline_cfg, k, _sub_seed(seed, 2, r), threads)
            for r in range(repeats)]
    return runs, float(np.mean([r.metrics.accuracy for r in runs]))


@dataclass
class ElmProtocolResult:
    activation: str
    train_accuracy: list
    test_accuracy: list

    @property
    def mean_train(self) -> float:
        return float(np.mean(self.train_accuracy))

    @property
    def mean_test(self) -> float:
        return float(np.mean(self.test_accuracy))


def elm_protocol(dataset: Dataset, subset_spec="All", activation: str = "sig", n_tries: int = 20,
                 split: float = 0.8, seed: int = 0, n_hidden: int = 200,
                 pipeline_cfg: PipelineConfig = PipelineConfig(), threads: int = 1) -> ElmProtocolResult:
    """Repeated stratified shuffle splits; train and test accuracy per try."""
    clf = ClassifierConfig("elm", n_hidden=n_hidden, activation=activation)
    X = dataset.columns(subset_spec)
    y = np.asarray(dataset.y, dtype=int)
    order = canonical_order(X, y)
    X, y = X[order], y[order]

    def run(t):
        tr, te = stratified_shuffle_split(y, split, _sub_seed(seed, 3, t))
        pipe = FeaturePipeline(pipeline_cfg).fit(X[tr])
        model = classify.train(clf, pipe.transform(X[tr]), y[tr], dataset.n_classes, _sub_seed(seed, 4, t))
        acc_tr = float(np.mean(classify.predict(model, pipe.transform(X[tr])) == y[tr]))
        acc_te = float(np.mean(classify.predict(model, pipe.transform(X[te])) == y[te])) if te.size else float("nan")
        return acc_tr, acc_te

    res = _map(run, list(range(n_tries)), threads)
    return ElmProtocolResult(activation, [r[0] for r in res], [r[1] for r in res])


def pca_accuracy_sweep(dataset: Dataset, subset_spec="All", classifier_cfg="1-NN", k_values=(26,),
                       k: int = 10, seed: int = 0, threads: int = 1) -> list[tuple]:
    """One cross-validation per PCA size; ``"full"`` keeps every training-span direction.

    Returns ``(k, accuracy)`` rows with ``"full"`` first and the rest by
    decreasing ``k``. The no-PCA baseline is left to the caller.
    """
    rows = []
    for kv in k_values:
        cfg = PipelineConfig(pca_components=kv if kv == "full" else int(kv))
        res = cross_validate(dataset, subset_spec, classifier_cfg, cfg, k, seed, threads)
        rows.append((kv, res.metrics.accuracy))
    return sorted(rows, key=lambda r: (r[0] != "full", -(r[0] if r[0] != "full" else 0)))


# ------------------------------------------------------------------- output

def _fmt(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def write_confusion_csv(cm: ConfusionMatrix, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["true\\pred"] + list(cm.labels))
        for lb, row in zip(cm.labels, cm.counts):
            wr.writerow([lb] + [int(v) for v in row])
    return path


def write_json(obj, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


SUMMARY_COLUMNS = ("subset", "classifier", "accuracy", "balanced_accuracy", "cohens_kappa")


def write_summary_csv(rows: list[tuple[str, str, MetricsReport]], path) -> Path:
    """Flat table: one row per (subset, classifier) with aggregate and per-class metrics."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    labels = rows[0][2].labels if rows else []
    per_class = [f"{m}_{lb}" for m in ("sensitivity", "specificity", "precision", "f_measure",
                                        "misclassification_rate") for lb in labels]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(list(SUMMARY_COLUMNS) + per_class)
        for subset, clf, m in rows:
            vals = [subset, clf, m.accuracy, m.balanced_accuracy, m.cohens_kappa]
            for key in ("sensitivity", "specificity", "precision", "f_measure", "misclassification_rate"):
                vals += getattr(m, key)
            wr.writerow([_fmt(v) for v in vals])
    return path
