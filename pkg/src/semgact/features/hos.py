"""Higher-order statistics: per-channel variance cumulant and 4-channel cross-cumulant."""

from __future__ import annotations

import numpy as np


def second_order_cumulant(x) -> float:
    """``E[x^2] - E[x]^2`` with population normalization."""
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    return float(cumulant2_batch(x))


def fourth_order_cross_cumulant(group) -> float:
    """Joint fourth-order cumulant of four equal-length sequences.

    Each sequence is centered first, then
    ``E[wxyz] - E[wx]E[yz] - E[wy]E[xz] - E[wz]E[xy]``.
    """
    g = np.asarray(group, dtype=float)
    if g.ndim != 2 or g.shape[0] != 4:
        raise ValueError(f"expected 4 equal-length sequences, got shape {g.shape}")
    return float(cumulant4_batch(g))


def cumulant2_batch(x: np.ndarray) -> np.ndarray:
    xc = x - x.mean(axis=-1, keepdims=True)
    return np.mean(xc * xc, axis=-1)


def cumulant4_batch(group: np.ndarray) -> np.ndarray:
    """``group`` is ``(..., 4, W)``; returns the cross-cumulant over the last axis."""
    c = group - group.mean(axis=-1, keepdims=True)
    w, x, y, z = (c[..., i, :] for i in range(4))
    e = lambda *s: np.mean(np.prod(s, axis=0), axis=-1)  # noqa: E731
    return e(w, x, y, z) - e(w, x) * e(y, z) - e(w, y) * e(x, z) - e(w, z) * e(x, y)
