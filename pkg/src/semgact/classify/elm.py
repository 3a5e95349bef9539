"""Extreme learning machine: frozen random hidden layer, least-squares readout."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from ..errors import ConfigError, DimError


def _softmax(z):
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


LRELU_SLOPE = 0.01

ACTIVATIONS = {
    "sig": expit,
    "sin": np.sin,
    "hardlim": lambda z: (z >= 0).astype(float),
    "tribas": lambda z: np.maximum(1.0 - np.abs(z), 0.0),
    "radbas": lambda z: np.exp(-z * z),
    "relu": lambda z: np.maximum(z, 0.0),
    "lrelu": lambda z: np.where(z >= 0, z, LRELU_SLOPE * z),
    "smax": _softmax,  # across the hidden units of each row
}


@dataclass(frozen=True)
class ElmConfig:
    n_hidden: int = 200
    activation: str = "sig"
    seed: int = 0
    rcond: float = 1e-10

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ConfigError(f"unknown activation {self.activation!r}; choose from {sorted(ACTIVATIONS)}")
        if self.n_hidden < 1:
            raise ConfigError("n_hidden must be positive")


@dataclass(frozen=True, eq=False)
class ElmModel:
    input_weights: np.ndarray   # (n_hidden, d)
    biases: np.ndarray          # (n_hidden,)
    output_weights: np.ndarray  # (n_hidden, n_classes)
    activation: str
    seed: int

    @property
    def n_hidden(self) -> int:
        return self.biases.shape[0]

    def hidden(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.input_weights.shape[1]:
            raise DimError(f"query has {X.shape[1]} features, model has {self.input_weights.shape[1]}")
        return ACTIVATIONS[self.activation](X @ self.input_weights.T + self.biases)


def one_hot(y, n_classes: int) -> np.ndarray:
    Y = np.zeros((len(y), n_classes))
    Y[np.arange(len(y)), y] = 1.0
    return Y


def elm_train(X, y, cfg: ElmConfig = ElmConfig(), n_classes: int | None = None) -> ElmModel:
    """Draw hidden weights and biases from U[-1, 1] and solve ``H beta = Y``.

    The readout is the minimum-norm least-squares solution, with singular
    values below ``rcond`` times the largest treated as zero.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] < 1:
        raise DimError("X must be (n, d) with n >= 1 and one label per row")
    n_classes = n_classes or int(y.max()) + 1
    rng = np.random.default_rng(cfg.seed)
    W = rng.uniform(-1.0, 1.0, size=(cfg.n_hidden, X.shape[1]))
    b = rng.uniform(-1.0, 1.0, size=cfg.n_hidden)
    H = ACTIVATIONS[cfg.activation](X @ W.T + b)
    beta = np.linalg.lstsq(H, one_hot(y, n_classes), rcond=cfg.rcond)[0]
    return ElmModel(W, b, beta, cfg.activation, cfg.seed)


def elm_scores(model: ElmModel, X) -> np.ndarray:
    return model.hidden(X) @ model.output_weights


def elm_predict_batch(model: ElmModel, X) -> np.ndarray:
    return np.argmax(elm_scores(model, X), axis=1)


def elm_predict(model: ElmModel, x) -> int:
    return int(elm_predict_batch(model, np.asarray(x, dtype=float)[None, :])[0])
