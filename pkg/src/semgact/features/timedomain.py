"""The 21 classic EMG time-domain features.

Definitions follow the usual EMG feature-extraction toolboxes. Sample
indices ``i`` below are 1-based and ``N`` is the segment length.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import FeatureWarning, NonFiniteError
from .layout import TD_NAMES

__all__ = ["TDConfig", "TD_NAMES", "time_domain_features", "td_batch"]


@dataclass(frozen=True)
class TDConfig:
    """Threshold for ZC, SSC, WAMP and MYOP.

    ``threshold`` is absolute when given; otherwise it is
    ``threshold_scale`` times the segment's standard deviation.
    """

    threshold: float | None = None
    threshold_scale: float = 0.05

    def resolve(self, x: np.ndarray) -> np.ndarray:
        if self.threshold is not None:
            return np.full(x.shape[:-1], float(self.threshold))
        return self.threshold_scale * x.std(axis=-1)


@lru_cache(maxsize=8)
def _weights(n: int):
    i = np.arange(1, n + 1, dtype=float)
    mid_e = (i >= 0.2 * n) & (i <= 0.8 * n)
    p_emav = np.where(mid_e, 0.75, 0.5)
    # EWL exponent is indexed by the later sample of each difference (i = 2..N)
    p_ewl = p_emav[1:]
    mid_m = (i >= 0.25 * n) & (i <= 0.75 * n)
    w_mmav = np.where(mid_m, 1.0, 0.5)
    w_mmav2 = np.where(mid_m, 1.0, np.where(i < 0.25 * n, 4 * i / n, 4 * (n - i) / n))
    return p_emav, p_ewl, w_mmav, w_mmav2


def td_batch(x: np.ndarray, thr: np.ndarray):
    """Features along the last axis of ``x``; ``thr`` broadcasts over the leading axes.

    Returns ``(features, constant)`` where ``constant`` flags rows whose
    kurtosis and skewness were undefined and set to 0.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    t = np.asarray(thr, dtype=float)[..., None]
    ax = np.abs(x)
    d = np.diff(x, axis=-1)
    ad = np.abs(d)
    sq = x * x
    ssi = sq.sum(axis=-1)
    wl = ad.sum(axis=-1)
    p_emav, p_ewl, w_mmav, w_mmav2 = _weights(n)

    zc = np.sum((x[..., :-1] * x[..., 1:] < 0) & (ad >= t), axis=-1)
    left, right = x[..., 1:-1] - x[..., :-2], x[..., 1:-1] - x[..., 2:]
    peak = ((left > 0) & (right > 0)) | ((left < 0) & (right < 0))
    ssc = np.sum(peak & ((np.abs(right) >= t) | (np.abs(left) >= t)), axis=-1)
    wamp = np.sum(ad > t, axis=-1)
    myop = np.sum(ax > t, axis=-1) / n

    with np.errstate(divide="ignore"):
        log_det = np.where(np.all(ax > 0, axis=-1), np.exp(np.mean(np.log(ax), axis=-1)), 0.0)
    curve = np.sqrt(np.sum(d * d, axis=-1))
    with np.errstate(divide="ignore"):
        mfl = np.where(curve > 0, np.log10(curve), 0.0)

    xc = x - x.mean(axis=-1, keepdims=True)
    m2 = np.mean(xc ** 2, axis=-1)
    m3 = np.mean(xc ** 3, axis=-1)
    m4 = np.mean(xc ** 4, axis=-1)
    constant = m2 <= (1e-12 * ax.max(axis=-1)) ** 2
    safe = np.where(constant, 1.0, m2)
    kurt = np.where(constant, 0.0, m4 / safe ** 2)
    skew = np.where(constant, 0.0, m3 / safe ** 1.5)

    feats = [
        ax.max(axis=-1),                       # AMP
        np.sqrt(ssi / n),                      # RMS
        ssi / (n - 1),                         # VAR
        wl,                                    # WL
        ax.mean(axis=-1),                      # MAV
        ssi,                                   # SSI
        zc,                                    # ZC
        ssc,                                   # SSC
        wamp,                                  # WAMP
        ax.sum(axis=-1),                       # IEMG
        log_det,                               # LOG
        myop,                                  # MYOP
        np.sqrt(np.sum(d * d, axis=-1) / (n - 1)),  # DASDV
        np.mean(ax ** p_emav, axis=-1),        # EMAV
        np.sum(ad ** p_ewl, axis=-1),          # EWL
        np.mean(w_mmav * ax, axis=-1),         # MMAV
        np.mean(w_mmav2 * ax, axis=-1),        # MMAV2
        mfl,                                   # MFL
        wl / n,                                # AAC
        kurt,                                  # KURT
        skew,                                  # SKEW
    ]
    return np.stack([np.asarray(f, dtype=float) for f in feats], axis=-1), constant


def time_domain_features(x, cfg: TDConfig = TDConfig()) -> np.ndarray:
    """21 time-domain features of a 1-D segment, ordered as ``TD_NAMES``.

    VAR is ``sum(x^2) / (N - 1)`` (zero-mean EMG convention). LOG, MFL,
    kurtosis and skewness fall back to 0 where they are undefined.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 4:
        raise ValueError("time_domain_features expects a 1-D segment of at least 4 samples")
    if not np.all(np.isfinite(x)):
        raise NonFiniteError("non-finite input")
    feats, constant = td_batch(x, cfg.resolve(x))
    if constant:
        warnings.warn("constant segment: kurtosis and skewness set to 0", FeatureWarning, stacklevel=2)
    return feats
