"""Training-only fitted transforms: uninformative-feature removal, z-score, PCA."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimError, EmptySelectionError, InsufficientDataError

log = logging.getLogger(__name__)

CONSTANT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ZScoreParams:
    mu: np.ndarray
    sigma: np.ndarray
    constant_mask: np.ndarray

    def to_dict(self):
        return {"mu": self.mu.tolist(), "sigma": self.sigma.tolist(),
                "constant_mask": self.constant_mask.astype(int).tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(np.asarray(d["mu"], float), np.asarray(d["sigma"], float),
                   np.asarray(d["constant_mask"], bool))


def _matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimError(f"expected a 2-D feature matrix, got shape {X.shape}")
    return X


def zscore_fit(X) -> ZScoreParams:
    """Column means and sample standard deviations (``ddof=1``)."""
    X = _matrix(X)
    if X.shape[0] < 2:
        raise InsufficientDataError("z-score needs at least 2 rows")
    mu = X.mean(axis=0)
    sigma = X.std(axis=0, ddof=1)
    return ZScoreParams(mu, sigma, sigma < CONSTANT_TOL)


def zscore_apply(X, params: ZScoreParams) -> np.ndarray:
    """``(x - mu) / sigma``; constant columns map to 0."""
    X = _matrix(X)
    if X.shape[1] != params.mu.shape[0]:
        raise DimError(f"matrix has {X.shape[1]} columns, params expect {params.mu.shape[0]}")
    safe = np.where(params.constant_mask, 1.0, params.sigma)
    Z = (X - params.mu) / safe
    Z[:, params.constant_mask] = 0.0
    return Z


def zscore_inverse(Z, params: ZScoreParams) -> np.ndarray:
    return _matrix(Z) * params.sigma + params.mu


@dataclass(frozen=True, eq=False)
class SelectionMask:
    kept_indices: np.ndarray
    n_input: int

    def apply(self, X) -> np.ndarray:
        X = _matrix(X)
        if X.shape[1] != self.n_input:
            raise DimError(f"matrix has {X.shape[1]} columns, mask expects {self.n_input}")
        return X[:, self.kept_indices]

    def __len__(self):
        return len(self.kept_indices)


def drop_uninformative(X) -> SelectionMask:
    """Keep columns that are all-finite with sample variance above 1e-12."""
    X = _matrix(X)
    if X.shape[0] < 2:
        raise InsufficientDataError("feature selection needs at least 2 rows")
    finite = np.all(np.isfinite(X), axis=0)
    with np.errstate(invalid="ignore"):
        var = np.where(finite, np.var(np.where(finite, X, 0.0), axis=0, ddof=1), 0.0)
    keep = np.flatnonzero(finite & (var > CONSTANT_TOL))
    if keep.size == 0:
        raise EmptySelectionError("every feature column is constant or non-finite")
    log.info("feature selection kept %d of %d columns", keep.size, X.shape[1])
    return SelectionMask(keep, X.shape[1])


@dataclass(frozen=True, eq=False)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # (k, d), orthonormal rows
    explained_variance: np.ndarray

    @property
    def k(self) -> int:
        return self.components.shape[0]


def pca_fit(X, k: int) -> PcaModel:
    """Top-``k`` eigenvectors of the sample covariance.

    Each component is signed so its largest-magnitude entry is positive.
    """
    X = _matrix(X)
    n, d = X.shape
    if not 1 <= k <= min(n - 1, d):
        raise DimError(f"k={k} outside [1, min(rows - 1, cols)] = [1, {min(n - 1, d)}]")
    mean = X.mean(axis=0)
    Xc = X - mean
    cov = (Xc.T @ Xc) / (n - 1)
    cov = (cov + cov.T) / 2
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals, kind="stable")[::-1][:k]
    comps = evecs[:, order].T
    pivot = np.argmax(np.abs(comps), axis=1)
    signs = np.sign(comps[np.arange(k), pivot])
    comps = comps * np.where(signs == 0, 1.0, signs)[:, None]
    return PcaModel(mean, comps, np.maximum(evals[order], 0.0))


def pca_project(X, model: PcaModel) -> np.ndarray:
    X = _matrix(X)
    if X.shape[1] != model.mean.shape[0]:
        raise DimError(f"matrix has {X.shape[1]} columns, PCA expects {model.mean.shape[0]}")
    return (X - model.mean) @ model.components.T


def pca_backproject(P, model: PcaModel) -> np.ndarray:
    return _matrix(P) @ model.components + model.mean


@dataclass(frozen=True)
class PipelineConfig:
    """``pca_components`` is ``None`` (no PCA), an int, or ``"full"``.

    ``"full"`` means ``min(rows - 1, cols)`` of the training split.
    """

    select: bool = True
    zscore: bool = True
    pca_components: int | str | None = None


class FeaturePipeline:
    """Selection, z-score and optional PCA, fitted on training rows only."""

    def __init__(self, config: PipelineConfig = PipelineConfig()):
        self.config = config
        self.selection: SelectionMask | None = None
        self.zscore: ZScoreParams | None = None
        self.pca: PcaModel | None = None
        self.n_input: int | None = None

    def fit(self, X) -> "FeaturePipeline":
        X = _matrix(X)
        self.n_input = X.shape[1]
        if self.config.select:
            self.selection = drop_uninformative(X)
            X = self.selection.apply(X)
        if self.config.zscore:
            self.zscore = zscore_fit(X)
            X = zscore_apply(X, self.zscore)
        k = self.config.pca_components
        if k is not None:
            if k == "full":
                k = min(X.shape[0] - 1, X.shape[1])
            self.pca = pca_fit(X, int(k))
        return self

    def transform(self, X) -> np.ndarray:
        if self.n_input is None:
            raise RuntimeError("pipeline is not fitted")
        X = _matrix(X)
        if X.shape[1] != self.n_input:
            raise DimError(f"matrix has {X.shape[1]} columns, pipeline expects {self.n_input}")
        if self.selection is not None:
            X = self.selection.apply(X)
        if self.zscore is not None:
            X = zscore_apply(X, self.zscore)
        if self.pca is not None:
            X = pca_project(X, self.pca)
        return X

    def fit_transform(self, X) -> np.ndarray:
        return self.fit(X).transform(X)

    @property
    def output_dim(self) -> int:
        if self.pca is not None:
            return self.pca.k
        if self.selection is not None:
            return len(self.selection)
        return self.n_input

    def to_dict(self) -> dict:
        return {
            "config": {"select": self.config.select, "zscore": self.config.zscore,
                       "pca_components": self.config.pca_components},
            "n_input": self.n_input,
            "kept_indices": None if self.selection is None else self.selection.kept_indices.tolist(),
            "zscore": None if self.zscore is None else self.zscore.to_dict(),
            "pca": None if self.pca is None else {
                "mean": self.pca.mean.tolist(), "components": self.pca.components.tolist(),
                "explained_variance": self.pca.explained_variance.tolist()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeaturePipeline":
        p = cls(PipelineConfig(**d["config"]))
        p.n_input = d["n_input"]
        if d["kept_indices"] is not None:
            p.selection = SelectionMask(np.asarray(d["kept_indices"], dtype=int), p.n_input)
        if d["zscore"] is not None:
            p.zscore = ZScoreParams.from_dict(d["zscore"])
        if d["pca"] is not None:
            p.pca = PcaModel(np.asarray(d["pca"]["mean"], float), np.asarray(d["pca"]["components"], float),
                             np.asarray(d["pca"]["explained_variance"], float))
        return p
