"""Burg autoregressive spectral estimation and band powers."""

from __future__ import annotations

import numpy as np

from ..errors import ConstantSignalError, NonFiniteError, OrderError


def burg_batch(x: np.ndarray, order: int):
    """Burg recursion applied independently along the last axis.

    Returns ``(a, sigma2, k)``: AR coefficients ``a[..., :order]`` of the
    prediction polynomial ``1 + a1 z^-1 + ... + ap z^-p``, the final
    prediction-error variance, and the reflection coefficients. Rows whose
    de-meaned values are all zero come back as NaN.
    """
    x = np.asarray(x, dtype=float)
    lead = x.shape[:-1]
    n = x.shape[-1]
    if order < 0:
        raise OrderError("order must be non-negative")
    if order >= n:
        raise OrderError(f"order {order} needs more than {order} samples, got {n}")
    xc = x - x.mean(axis=-1, keepdims=True)
    sigma2 = np.mean(xc * xc, axis=-1)
    # a constant input leaves only round-off after de-meaning
    scale = np.max(np.abs(x), axis=-1)
    const = sigma2 <= (1e-12 * scale) ** 2
    a = np.zeros(lead + (order,))
    ks = np.zeros(lead + (order,))
    f = xc[..., 1:]
    b = xc[..., :-1]
    for m in range(order):
        num = -2.0 * np.sum(f * b, axis=-1)
        den = np.sum(f * f, axis=-1) + np.sum(b * b, axis=-1)
        with np.errstate(invalid="ignore", divide="ignore"):
            k = np.where(den > 0, num / den, 0.0)
        k = np.clip(k, -1.0, 1.0)
        ks[..., m] = k
        prev = a[..., :m].copy()
        a[..., :m] = prev + k[..., None] * prev[..., ::-1]
        a[..., m] = k
        sigma2 = sigma2 * (1.0 - k * k)
        kk = k[..., None]
        f, b = (f + kk * b)[..., 1:], (b + kk * f)[..., :-1]
    if np.any(const):
        a[const] = np.nan
        ks[const] = np.nan
        sigma2 = np.where(const, np.nan, sigma2)
    return a, sigma2, ks


def burg_ar(x, order: int):
    """Fit an AR(order) model with Burg's method.

    Parameters
    ----------
    x : array_like
        1-D real signal. The mean is removed before fitting.
    order : int
        Model order; 0 returns no coefficients and the signal variance.

    Returns
    -------
    coefficients : ndarray
        ``a1..ap`` with the convention ``x[n] + a1 x[n-1] + ... = e[n]``, so an
        AR(1) process ``x[n] = 0.9 x[n-1] + e[n]`` gives ``a1 = -0.9``.
    sigma2 : float
        Prediction-error variance.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("burg_ar expects a 1-D signal")
    if not np.all(np.isfinite(x)):
        raise NonFiniteError("non-finite input")
    a, s2, _ = burg_batch(x, order)
    if np.isnan(s2):
        raise ConstantSignalError("Burg AR model undefined for a constant signal")
    return a, float(s2)


def reflection_coefficients(x, order: int) -> np.ndarray:
    return burg_batch(np.asarray(x, dtype=float), order)[2]


def frequency_grid(n_freq: int) -> np.ndarray:
    """``n_freq`` radian frequencies evenly spaced on [0, pi], ends included."""
    return np.linspace(0.0, np.pi, n_freq)


def ar_psd(a: np.ndarray, sigma2, n_freq: int) -> np.ndarray:
    """``sigma2 / |A(e^{iw})|^2`` on the grid, broadcasting over leading axes."""
    order = a.shape[-1]
    w = frequency_grid(n_freq)
    basis = np.exp(-1j * np.outer(np.arange(1, order + 1), w))  # (order, n_freq)
    resp = 1.0 + a @ basis
    return np.asarray(sigma2)[..., None] / (resp.real ** 2 + resp.imag ** 2)


def burg_psd(x, order: int = 4, n_freq: int = 256) -> np.ndarray:
    """Burg power spectral density on ``n_freq`` points spanning [0, pi]."""
    if n_freq < 2:
        raise ValueError("n_freq must be at least 2")
    a, s2 = burg_ar(x, order)
    return ar_psd(a, s2, n_freq)


def band_edges(n_points: int, n_bands: int) -> np.ndarray:
    """Start index of each contiguous band; the remainder goes to the leading bands."""
    if not 1 <= n_bands <= n_points:
        raise ValueError(f"cannot split {n_points} points into {n_bands} bands")
    base, extra = divmod(n_points, n_bands)
    sizes = np.full(n_bands, base)
    sizes[:extra] += 1
    return np.concatenate([[0], np.cumsum(sizes)[:-1]])


def band_powers(psd, n_bands: int = 10) -> np.ndarray:
    """Sum the spectrum over ``n_bands`` contiguous, near-equal index ranges."""
    psd = np.asarray(psd, dtype=float)
    return np.add.reduceat(psd, band_edges(psd.shape[-1], n_bands), axis=-1)


def psd_features(frame, order: int = 4, n_bands: int = 10, n_freq: int = 256) -> np.ndarray:
    """Band powers for each channel of a ``(C, W)`` frame, channel-major.

    Channels where the Burg model is undefined (constant input) are
    zero-filled.
    """
    frame = np.asarray(getattr(frame, "data", frame), dtype=float)
    out = psd_batch(frame[None], order, n_bands, n_freq)[0]
    return np.nan_to_num(out, nan=0.0)


def psd_batch(frames: np.ndarray, order: int, n_bands: int, n_freq: int) -> np.ndarray:
    """``(N, C, W)`` -> ``(N, C * n_bands)``; NaN marks undefined channels."""
    a, s2, _ = burg_batch(frames, order)
    psd = ar_psd(a, s2, n_freq)
    bands = band_powers(psd, n_bands)
    return bands.reshape(frames.shape[0], -1)
