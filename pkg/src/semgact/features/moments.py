"""Log moments of the magnitude spectrum (17 features per channel)."""

from __future__ import annotations

import numpy as np

from ..errors import NonFiniteError, ZeroEnergyError
from .layout import MOMENT_PAIRS

LOG_FLOOR = 1e-12


def _safe_log(v):
    return np.log(np.maximum(np.abs(v), LOG_FLOOR))


def spectral_moments(x: np.ndarray, max_power: int = 6) -> np.ndarray:
    """``g(i) = sqrt(sum_k k^i |X(k)|)`` for ``i = 0..max_power`` along the last axis.

    ``X`` is the one-sided DFT; ``k`` runs from 1 (DC excluded) to ``W // 2``.
    """
    x = np.asarray(x, dtype=float)
    mag = np.abs(np.fft.rfft(x, axis=-1))[..., 1:x.shape[-1] // 2 + 1]
    k = np.arange(1, mag.shape[-1] + 1, dtype=float)
    weights = k[None, :] ** np.arange(max_power + 1)[:, None]
    return np.sqrt(mag @ weights.T)


def moments_to_features(g: np.ndarray) -> np.ndarray:
    g = [g[..., i] for i in range(g.shape[-1])]
    ln = _safe_log
    feats = [
        ln(g[0]),
        ln(g[2]),
        ln(g[4]),
        ln(g[0]) - 0.5 * ln(g[0] - g[2]) - 0.5 * ln(g[0] - g[4]),
        ln(g[2]) - 0.5 * ln(g[0] * g[4]),
        ln(g[0]) - 0.5 * ln(g[1] * g[3]),
        ln(g[0]) - 0.5 * ln(g[2] * g[6]),
    ]
    feats += [0.5 * ln(g[i] * g[j]) for i, j in MOMENT_PAIRS]
    return np.stack(feats, axis=-1)


def log_moment_batch(x: np.ndarray) -> np.ndarray:
    """17 log-moment features along the last axis; NaN where the spectrum is empty."""
    g = spectral_moments(x)
    out = moments_to_features(g)
    empty = g[..., 0] == 0
    if np.any(empty):
        out[empty] = np.nan
    return out


def log_moment_features(x) -> np.ndarray:
    """Compute the 17 log-moment features of one segment.

    Every log takes ``ln(max(|arg|, 1e-12))``; differences such as
    ``g(0) - g(2)`` are usually negative.

    Raises
    ------
    ZeroEnergyError
        The segment has no energy outside DC.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("log_moment_features expects a 1-D segment")
    if not np.all(np.isfinite(x)):
        raise NonFiniteError("non-finite input")
    out = log_moment_batch(x)
    if np.isnan(out[0]):
        raise ZeroEnergyError("log moments undefined for a segment with no spectral energy")
    return out
