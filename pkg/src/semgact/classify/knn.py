"""Euclidean k-nearest-neighbor classifier."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DimError, EmptyModelError


@dataclass(frozen=True, eq=False)
class KnnModel:
    points: np.ndarray
    labels: np.ndarray
    k: int = 1
    n_classes: int | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        lab = np.asarray(self.labels, dtype=int)
        if pts.ndim != 2 or pts.shape[0] != lab.shape[0]:
            raise DimError("points must be (n, d) with one label per row")
        if not 1 <= self.k <= 10:
            raise ConfigError(f"k must be in [1, 10], got {self.k}")
        if lab.size and self.k > lab.size:
            raise ConfigError(f"k={self.k} exceeds the {lab.size} training rows")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", lab)
        if self.n_classes is None and lab.size:
            object.__setattr__(self, "n_classes", int(lab.max()) + 1)


def knn_fit(X, y, k: int = 1, n_classes: int | None = None) -> KnnModel:
    return KnnModel(X, y, k, n_classes)


def _vote(order_labels: np.ndarray, n_classes: int) -> int:
    votes = np.bincount(order_labels, minlength=n_classes)
    tied = np.flatnonzero(votes == votes.max())
    if tied.size == 1:
        return int(tied[0])
    # nearest neighbour among the tied classes wins
    for lab in order_labels:
        if lab in tied:
            return int(lab)
    return int(tied[0])  # unreachable


def knn_predict_batch(model: KnnModel, X) -> np.ndarray:
    """Labels for each row of ``X``.

    Ties in the vote go to the class of the nearest tied neighbour; equal
    distances are ordered by training-row index.
    """
    if model.points.shape[0] == 0:
        raise EmptyModelError("k-NN model has no training points")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.points.shape[1]:
        raise DimError(f"query has {X.shape[1]} features, model has {model.points.shape[1]}")
    k = model.k
    # bound the (chunk, n_train, d) difference tensor to ~4M floats
    chunk = max(1, 4_000_000 // max(model.points.size, 1))
    out = np.empty(X.shape[0], dtype=int)
    for s in range(0, X.shape[0], chunk):
        diff = X[s:s + chunk, None, :] - model.points[None, :, :]
        dist = np.sum(diff * diff, axis=-1)
        order = np.argsort(dist, axis=1, kind="stable")[:, :k]
        for r, idx in enumerate(order):
            out[s + r] = _vote(model.labels[idx], model.n_classes)
    return out


def knn_predict(model: KnnModel, x) -> int:
    return int(knn_predict_batch(model, np.asarray(x, dtype=float)[None, :])[0])
