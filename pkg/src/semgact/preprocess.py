"""Envelope extraction and overlapping segmentation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import signal as sps

from .errors import ConfigError, NonFiniteError, TooShortError
from .ingest import ActionLabel, Recording


@dataclass(frozen=True)
class WindowingConfig:
    window_length: int = 1000
    overlap: float = 0.25

    def __post_init__(self):
        if int(self.window_length) != self.window_length or self.window_length < 1:
            raise ConfigError(f"window_length must be a positive integer, got {self.window_length}")
        if not 0 <= self.overlap < 1:
            raise ConfigError(f"overlap must lie in [0, 1), got {self.overlap}")
        if self.stride < 1:
            raise ConfigError("window stride rounds to zero")

    @property
    def stride(self) -> int:
        return int(round(self.window_length * (1 - self.overlap)))


@dataclass(frozen=True, eq=False)
class SegmentFrame:
    data: np.ndarray  # (C, W) envelope values
    recording_id: str
    window_index: int
    action: ActionLabel


def _next_pow2(n: int) -> int:
    return 1 << max(int(n) - 1, 0).bit_length()


def analytic_signal(x: np.ndarray) -> np.ndarray:
    """DFT analytic signal along the last axis.

    The input is zero-padded to the next power of two, negative frequencies
    are zeroed and positive ones doubled (DC and Nyquist kept), then the
    result is truncated back to the input length.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    return sps.hilbert(x, _next_pow2(n), axis=-1)[..., :n]


def upper_envelope(signal) -> np.ndarray:
    """Magnitude of the analytic signal, computed along the last axis."""
    x = np.asarray(signal, dtype=float)
    if x.shape[-1] < 2:
        raise TooShortError("envelope needs at least 2 samples")
    if not np.all(np.isfinite(x)):
        raise NonFiniteError("envelope input contains NaN or Inf")
    env = np.abs(analytic_signal(x))
    # |a| >= |x| holds exactly in real arithmetic; restore it after round-off
    return np.maximum(env, np.abs(x))


def window_count(length: int, cfg: WindowingConfig) -> int:
    if length < cfg.window_length:
        return 0
    return (length - cfg.window_length) // cfg.stride + 1


def segment(signal, cfg: WindowingConfig = WindowingConfig()) -> list[np.ndarray]:
    """Split a 1-D sequence into windows ``[k*stride, k*stride + W)``.

    A trailing remainder shorter than ``W`` is dropped.
    """
    x = np.asarray(signal, dtype=float)
    return list(segment_array(x, cfg))


def segment_array(x: np.ndarray, cfg: WindowingConfig) -> np.ndarray:
    """Windows along the last axis; result shape ``(n_windows, ..., W)``."""
    length = x.shape[-1]
    if length < cfg.window_length:
        raise TooShortError(f"signal length {length} shorter than window {cfg.window_length}")
    n = window_count(length, cfg)
    view = sliding_window_view(x, cfg.window_length, axis=-1)[..., ::cfg.stride, :][..., :n, :]
    return np.moveaxis(view, -2, 0).copy()


def recording_frames(recording: Recording, cfg: WindowingConfig = WindowingConfig()) -> np.ndarray:
    """Envelope the whole recording per channel, then window it: ``(n, C, W)``."""
    env = upper_envelope(recording.channels)
    return segment_array(env, cfg)


def preprocess_recording(recording: Recording,
                         cfg: WindowingConfig = WindowingConfig()) -> list[SegmentFrame]:
    frames = recording_frames(recording, cfg)
    return [SegmentFrame(f, recording.id, k, recording.action) for k, f in enumerate(frames)]
