"""k-NN, SVM and ELM classifiers behind a small common interface."""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass

import numpy as np

from ..errors import ConfigError
from .elm import ACTIVATIONS, ElmConfig, ElmModel, elm_predict, elm_predict_batch, elm_train
from .knn import KnnModel, knn_fit, knn_predict, knn_predict_batch
from .svm import BinarySvm, SvmModel, SvmParams, svm_predict, svm_predict_batch, svm_train

__all__ = [
    "ACTIVATIONS", "ClassifierConfig", "ElmConfig", "ElmModel", "KnnModel", "SvmModel", "SvmParams",
    "elm_predict", "elm_train", "knn_fit", "knn_predict", "model_from_dict", "model_to_dict",
    "parse_classifier", "predict", "svm_predict", "svm_train", "train",
]


@dataclass(frozen=True)
class ClassifierConfig:
    kind: str = "knn"
    k: int = 1
    C: float = 1.0
    gamma: float | None = None
    kernel: str = "rbf"
    strategy: str = "ovo"
    n_hidden: int = 200
    activation: str = "sig"

    def __post_init__(self):
        if self.kind not in ("knn", "svm", "elm"):
            raise ConfigError(f"unknown classifier kind {self.kind!r}")
        if self.kind == "knn" and not 1 <= self.k <= 10:
            raise ConfigError(f"k must be in [1, 10], got {self.k}")
        if self.kind == "elm" and self.activation not in ACTIVATIONS:
            raise ConfigError(f"unknown activation {self.activation!r}")

    @property
    def name(self) -> str:
        if self.kind == "knn":
            return f"{self.k}-NN"
        if self.kind == "svm":
            return "SVM"
        return f"ELM-{self.activation}"

    def to_dict(self):
        return asdict(self)


def parse_classifier(text) -> ClassifierConfig:
    """Accepts ``"1-NN"``, ``"knn:k=3"``, ``"svm"``, ``"svm:C=10,gamma=0.1"``, ``"elm:relu"`` or a dict."""
    if isinstance(text, ClassifierConfig):
        return text
    if isinstance(text, dict):
        return ClassifierConfig(**text)
    s = str(text).strip()
    m = re.fullmatch(r"(\d+)-?nn", s, flags=re.I)
    if m:
        return ClassifierConfig("knn", k=int(m.group(1)))
    kind, _, rest = s.partition(":")
    kind = kind.strip().lower()
    kw = {}
    for part in filter(None, (p.strip() for p in rest.split(","))):
        if "=" in part:
            key, val = (t.strip() for t in part.split("=", 1))
            field_type = ClassifierConfig.__dataclass_fields__.get(key)
            if field_type is None:
                raise ConfigError(f"unknown classifier option {key!r}")
            kw[key] = val if key in ("kernel", "strategy", "activation") else (
                int(val) if key in ("k", "n_hidden") else float(val))
        elif kind == "elm":
            kw["activation"] = part
        else:
            raise ConfigError(f"cannot parse classifier option {part!r}")
    return ClassifierConfig(kind, **kw)


def train(cfg: ClassifierConfig, X, y, n_classes: int, seed: int = 0):
    if cfg.kind == "knn":
        return knn_fit(X, y, cfg.k, n_classes)
    if cfg.kind == "svm":
        return svm_train(X, y, SvmParams(C=cfg.C, gamma=cfg.gamma, kernel=cfg.kernel,
                                         strategy=cfg.strategy), n_classes)
    return elm_train(X, y, ElmConfig(cfg.n_hidden, cfg.activation, seed), n_classes)


def predict(model, X) -> np.ndarray:
    if isinstance(model, KnnModel):
        return knn_predict_batch(model, X)
    if isinstance(model, SvmModel):
        return svm_predict_batch(model, X)
    if isinstance(model, ElmModel):
        return elm_predict_batch(model, X)
    raise TypeError(f"not a trained model: {type(model).__name__}")


def model_to_dict(model) -> dict:
    """JSON-ready representation tagged with ``kind``."""
    if isinstance(model, KnnModel):
        return {"kind": "knn", "k": model.k, "n_classes": model.n_classes,
                "points": model.points.tolist(), "labels": model.labels.tolist()}
    if isinstance(model, SvmModel):
        return {"kind": "svm", "n_classes": model.n_classes, "n_features": model.n_features,
                "params": asdict(model.params),
                "machines": [{"pos": m.pos, "neg": m.neg, "rho": m.rho,
                              "support_vectors": m.support_vectors.tolist(),
                              "dual_coef": m.dual_coef.tolist(), "alpha": m.alpha.tolist(),
                              "y": m.y.tolist(), "kkt_gap": m.kkt_gap, "n_iter": m.n_iter}
                             for m in model.machines]}
    if isinstance(model, ElmModel):
        return {"kind": "elm", "activation": model.activation, "seed": model.seed,
                "input_weights": model.input_weights.tolist(), "biases": model.biases.tolist(),
                "output_weights": model.output_weights.tolist()}
    raise TypeError(f"not a trained model: {type(model).__name__}")


def model_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "knn":
        pts = np.asarray(d["points"], dtype=float)
        return KnnModel(pts.reshape(len(d["labels"]), -1), np.asarray(d["labels"], int), d["k"], d["n_classes"])
    if kind == "svm":
        machines = tuple(
            BinarySvm(m["pos"], m["neg"], np.asarray(m["support_vectors"], float).reshape(len(m["dual_coef"]), -1),
                      np.asarray(m["dual_coef"], float), m["rho"], np.asarray(m["alpha"], float),
                      np.asarray(m["y"], float), m["kkt_gap"], m["n_iter"])
            for m in d["machines"])
        return SvmModel(machines, d["n_classes"], d["n_features"], SvmParams(**d["params"]))
    if kind == "elm":
        return ElmModel(np.asarray(d["input_weights"], float), np.asarray(d["biases"], float),
                        np.asarray(d["output_weights"], float), d["activation"], d["seed"])
    raise ConfigError(f"unknown model kind {kind!r}")
