"""Inter-channel statistics: maximum normalized cross-correlation and covariance."""

from __future__ import annotations

import numpy as np

from ..errors import NonFiniteError, ZeroEnergyError


def _pair_inputs(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or a.shape != b.shape:
        raise ValueError(f"expected two equal-length 1-D sequences, got {a.shape} and {b.shape}")
    if a.size < 2:
        raise ValueError("sequences need at least 2 samples")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise NonFiniteError("non-finite input")
    return a, b


def max_similarity_index(a, b) -> float:
    """Largest normalized linear cross-correlation over all lags in (-W, W).

    The correlation at each lag is divided by ``sqrt(E_a * E_b)`` so the
    result lies in [-1, 1] regardless of amplitude.
    """
    a, b = _pair_inputs(a, b)
    ea, eb = float(a @ a), float(b @ b)
    if ea == 0.0 or eb == 0.0:
        raise ZeroEnergyError("max similarity index undefined for an all-zero segment")
    r = np.correlate(a, b, mode="full")
    return float(np.clip(r.max() / np.sqrt(ea * eb), -1.0, 1.0))


def covariance_index(a, b) -> float:
    """Sample covariance at lag 0 (divides by ``W - 1``)."""
    a, b = _pair_inputs(a, b)
    return float(np.dot(a - a.mean(), b - b.mean()) / (a.size - 1))


def _next_pow2(n):
    return 1 << max(int(n) - 1, 0).bit_length()


def max_similarity_batch(frames: np.ndarray, pairs) -> np.ndarray:
    """Max similarity for every frame and 1-based channel pair.

    ``frames`` is ``(N, C, W)``; returns ``(N, len(pairs))`` with NaN where a
    channel has zero energy.
    """
    n, c, w = frames.shape
    nfft = _next_pow2(2 * w - 1)
    spec = np.fft.rfft(frames, nfft, axis=-1)
    energy = np.einsum("ncw,ncw->nc", frames, frames)
    ii = np.array([p[0] - 1 for p in pairs])
    jj = np.array([p[1] - 1 for p in pairs])
    # r_ab(l) = sum_n a[n+l] b[n]; circular indices 0..W-1 hold l >= 0, the top W-1 hold l < 0
    corr = np.fft.irfft(spec[:, ii, :] * np.conj(spec[:, jj, :]), nfft, axis=-1)
    valid = np.concatenate([corr[..., :w], corr[..., nfft - w + 1:]], axis=-1)
    peak = valid.max(axis=-1)
    denom = np.sqrt(energy[:, ii] * energy[:, jj])
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(denom > 0, peak / denom, np.nan)
    return np.clip(out, -1.0, 1.0)


def covariance_batch(frames: np.ndarray, pairs) -> np.ndarray:
    centered = frames - frames.mean(axis=-1, keepdims=True)
    cov = np.einsum("ncw,ndw->ncd", centered, centered) / (frames.shape[-1] - 1)
    ii = [p[0] - 1 for p in pairs]
    jj = [p[1] - 1 for p in pairs]
    return cov[:, ii, jj]
