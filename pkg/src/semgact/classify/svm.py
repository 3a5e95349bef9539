"""Kernel SVM trained with SMO, combined one-vs-one (or one-vs-rest) for multiclass.

The binary solver works on the dual

    min_a  1/2 a^T Q a - e^T a    s.t.  y^T a = 0,  0 <= a_i <= C,

with ``Q_ij = y_i y_j K(x_i, x_j)``. Each step picks the maximal violating
pair using second-order information and solves the two-variable
subproblem analytically.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from ..errors import ConfigError, ConvergenceError, DegenerateLabelsError, DimError

TAU = 1e-12


@dataclass(frozen=True)
class SvmParams:
    C: float = 1.0
    gamma: float | None = None  # None -> 1 / n_features
    kernel: str = "rbf"
    tol: float = 1e-3
    max_iter: int = 100_000
    strategy: str = "ovo"

    def __post_init__(self):
        if self.kernel not in ("rbf", "linear"):
            raise ConfigError(f"unknown kernel {self.kernel!r}")
        if self.strategy not in ("ovo", "ovr"):
            raise ConfigError(f"unknown multiclass strategy {self.strategy!r}")
        if self.C <= 0:
            raise ConfigError("C must be positive")


def kernel_matrix(A, B, kernel: str, gamma: float) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if kernel == "linear":
        return A @ B.T
    sq = (np.sum(A * A, axis=1)[:, None] + np.sum(B * B, axis=1)[None, :] - 2.0 * (A @ B.T))
    return np.exp(-gamma * np.maximum(sq, 0.0))


def _violation(alpha, y, G, C):
    yG = -y * G
    up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
    low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
    return yG, up, low


def kkt_gap(alpha, y, G, C) -> float:
    """``max_{I_up} -y G - min_{I_low} -y G``; zero at an exact optimum."""
    yG, up, low = _violation(alpha, y, G, C)
    if not up.any() or not low.any():
        return 0.0
    return float(yG[up].max() - yG[low].min())


def smo_solve(K: np.ndarray, y: np.ndarray, C: float, tol: float = 1e-3, max_iter: int = 100_000):
    """Solve the binary dual for a precomputed kernel matrix.

    Returns ``(alpha, rho, gradient, n_iter)``.
    """
    n = y.shape[0]
    alpha = np.zeros(n)
    G = -np.ones(n)
    diag = np.diag(K).copy()
    for it in range(max_iter):
        yG, up, low = _violation(alpha, y, G, C)
        if not up.any() or not low.any():
            break
        i = int(np.argmax(np.where(up, yG, -np.inf)))
        gmax = yG[i]
        if gmax - np.min(np.where(low, yG, np.inf)) < tol:
            break
        b = gmax - yG
        cand = low & (b > 0)
        a = diag[i] + diag - 2.0 * K[i]
        a = np.where(a > 0, a, TAU)
        j = int(np.argmin(np.where(cand, -(b * b) / a, np.inf)))

        ai_old, aj_old = alpha[i], alpha[j]
        qii, qjj, qij = K[i, i], K[j, j], y[i] * y[j] * K[i, j]
        if y[i] != y[j]:
            quad = qii + qjj + 2.0 * qij
            quad = quad if quad > 0 else TAU
            delta = (-G[i] - G[j]) / quad
            diff = alpha[i] - alpha[j]
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0:
                if alpha[j] < 0:
                    alpha[j], alpha[i] = 0.0, diff
            elif alpha[i] < 0:
                alpha[i], alpha[j] = 0.0, -diff
            if diff > 0:
                if alpha[i] > C:
                    alpha[i], alpha[j] = C, C - diff
            elif alpha[j] > C:
                alpha[j], alpha[i] = C, C + diff
        else:
            quad = qii + qjj - 2.0 * qij
            quad = quad if quad > 0 else TAU
            delta = (G[i] - G[j]) / quad
            total = alpha[i] + alpha[j]
            alpha[i] -= delta
            alpha[j] += delta
            if total > C:
                if alpha[i] > C:
                    alpha[i], alpha[j] = C, total - C
            elif alpha[j] < 0:
                alpha[j], alpha[i] = 0.0, total
            if total > C:
                if alpha[j] > C:
                    alpha[j], alpha[i] = C, total - C
            elif alpha[i] < 0:
                alpha[i], alpha[j] = 0.0, total
        d_i, d_j = alpha[i] - ai_old, alpha[j] - aj_old
        G += y * (y[i] * d_i * K[:, i] + y[j] * d_j * K[:, j])
    else:
        raise ConvergenceError(
            f"SMO did not converge in {max_iter} iterations",
            {"iterations": max_iter, "kkt_gap": kkt_gap(alpha, y, G, C)})
    return alpha, _rho(alpha, y, G, C), G, it


def _rho(alpha, y, G, C) -> float:
    yG = y * G
    at_ub = alpha >= C
    at_lb = alpha <= 0
    free = ~(at_ub | at_lb)
    if free.any():
        return float(yG[free].mean())
    ub, lb = np.inf, -np.inf
    ub_mask = (at_ub & (y < 0)) | (at_lb & (y > 0))
    lb_mask = (at_ub & (y > 0)) | (at_lb & (y < 0))
    if ub_mask.any():
        ub = yG[ub_mask].min()
    if lb_mask.any():
        lb = yG[lb_mask].max()
    return float((ub + lb) / 2)


@dataclass(frozen=True, eq=False)
class BinarySvm:
    """Decision ``f(x) = sum_i y_i a_i K(x_i, x) - rho``; positive means ``pos``."""

    pos: int
    neg: int
    support_vectors: np.ndarray
    dual_coef: np.ndarray
    rho: float
    alpha: np.ndarray
    y: np.ndarray
    kkt_gap: float = 0.0
    n_iter: int = 0

    def decision(self, X, kernel: str, gamma: float) -> np.ndarray:
        if self.support_vectors.shape[0] == 0:
            return np.full(np.atleast_2d(X).shape[0], -self.rho)
        return kernel_matrix(X, self.support_vectors, kernel, gamma) @ self.dual_coef - self.rho


def train_binary(X, y_pm, params: SvmParams, gamma: float, pos: int = 1, neg: int = 0) -> BinarySvm:
    y_pm = np.asarray(y_pm, dtype=float)
    K = kernel_matrix(X, X, params.kernel, gamma)
    alpha, rho, G, n_iter = smo_solve(K, y_pm, params.C, params.tol, params.max_iter)
    sv = alpha > 0
    return BinarySvm(pos, neg, np.asarray(X)[sv], (alpha * y_pm)[sv], rho, alpha, y_pm,
                     kkt_gap(alpha, y_pm, G, params.C), n_iter)


@dataclass(frozen=True, eq=False)
class SvmModel:
    machines: tuple
    n_classes: int
    n_features: int
    params: SvmParams


def svm_train(X, y, params: SvmParams = SvmParams(), n_classes: int | None = None) -> SvmModel:
    """One binary machine per class pair (``ovo``) or per class (``ovr``)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise DimError("X must be (n, d) with one label per row")
    present = np.unique(y)
    if present.size < 2:
        raise DegenerateLabelsError("SVM needs at least two classes in the training data")
    n_classes = n_classes or int(y.max()) + 1
    gamma = params.gamma if params.gamma is not None else 1.0 / X.shape[1]
    params = replace(params, gamma=gamma)
    machines = []
    if params.strategy == "ovo":
        for a, b in combinations(present.tolist(), 2):
            rows = (y == a) | (y == b)
            yy = np.where(y[rows] == a, 1.0, -1.0)
            machines.append(train_binary(X[rows], yy, params, gamma, pos=a, neg=b))
    else:
        for c in present.tolist():
            yy = np.where(y == c, 1.0, -1.0)
            machines.append(train_binary(X, yy, params, gamma, pos=c, neg=-1))
    return SvmModel(tuple(machines), n_classes, X.shape[1], params)


def svm_decision(model: SvmModel, X) -> np.ndarray:
    """Decision values, one column per machine."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.n_features:
        raise DimError(f"query has {X.shape[1]} features, model has {model.n_features}")
    p = model.params
    return np.stack([m.decision(X, p.kernel, p.gamma) for m in model.machines], axis=1)


def svm_predict_batch(model: SvmModel, X) -> np.ndarray:
    """Vote over machines; ties go to the larger summed |decision|, then the lower class."""
    F = svm_decision(model, X)
    n = F.shape[0]
    if model.params.strategy == "ovr":
        scores = np.full((n, model.n_classes), -np.inf)
        for col, m in enumerate(model.machines):
            scores[:, m.pos] = F[:, col]
        return np.argmax(scores, axis=1)
    votes = np.zeros((n, model.n_classes), dtype=int)
    strength = np.zeros((n, model.n_classes))
    rows = np.arange(n)
    for col, m in enumerate(model.machines):
        winner = np.where(F[:, col] >= 0, m.pos, m.neg)
        votes[rows, winner] += 1
        strength[rows, winner] += np.abs(F[:, col])
    out = np.empty(n, dtype=int)
    for r in range(n):
        tied = np.flatnonzero(votes[r] == votes[r].max())
        out[r] = tied[np.argmax(strength[r, tied])]
    return out


def svm_predict(model: SvmModel, x) -> int:
    return int(svm_predict_batch(model, np.asarray(x, dtype=float)[None, :])[0])
