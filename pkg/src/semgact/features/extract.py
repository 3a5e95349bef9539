"""Assembly of the full per-frame feature vector and feature-matrix I/O."""

from __future__ import annotations

import csv
import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ConfigError, FeatureWarning, FormatError
from ..ingest import ActionLabel
from .hos import cumulant2_batch, cumulant4_batch
from .ics import covariance_batch, max_similarity_batch
from .layout import FAMILIES, FeatureLayout, FeatureSubsetSpec, build_layout, channel_pairs, parse_subset
from .moments import log_moment_batch
from .spectral import psd_batch
from .timedomain import TDConfig, td_batch


@dataclass(frozen=True)
class FeatureConfig:
    burg_order: int = 4
    n_bands: int = 10
    n_freq: int = 256
    td: TDConfig = field(default_factory=TDConfig)
    hosa_groups: tuple = ((1, 2, 3, 4), (5, 6, 7, 8))
    td_per_channel: bool = False

    def __post_init__(self):
        object.__setattr__(self, "hosa_groups", tuple(tuple(int(c) for c in g) for g in self.hosa_groups))
        if self.burg_order < 1:
            raise ConfigError("burg_order must be positive")
        if not 1 <= self.n_bands <= self.n_freq:
            raise ConfigError("need 1 <= n_bands <= n_freq")
        if any(len(g) != 4 for g in self.hosa_groups):
            raise ConfigError("each HOSA group must name exactly 4 channels")

    def layout(self, n_channels: int = 8) -> FeatureLayout:
        if any(not 1 <= c <= n_channels for g in self.hosa_groups for c in g):
            raise ConfigError(f"HOSA groups reference channels outside 1..{n_channels}")
        return build_layout(n_channels, self.n_bands, self.hosa_groups, self.td_per_channel)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hosa_groups"] = [list(g) for g in self.hosa_groups]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureConfig":
        d = dict(d)
        td = d.pop("td", None) or {}
        return cls(td=TDConfig(**td), **d)


@dataclass(frozen=True, eq=False)
class FeatureVector:
    values: np.ndarray
    layout: FeatureLayout
    label: ActionLabel | None = None
    provenance: tuple = ("", 0)
    warnings: tuple = ()

    def family(self, name: str) -> np.ndarray:
        a, b = self.layout.slices[name]
        return self.values[a:b]


def _guard(block: np.ndarray, family: str, notes: list) -> np.ndarray:
    bad = ~np.isfinite(block)
    if np.any(bad):
        for row in np.flatnonzero(bad.any(axis=1)):
            notes[row].append(f"{family}: {int(bad[row].sum())} undefined value(s) set to 0")
        block = np.where(bad, 0.0, block)
    return block


def extract_batch(frames: np.ndarray, cfg: FeatureConfig = FeatureConfig()):
    """Feature matrix for a stack of ``(N, C, W)`` envelope frames.

    Returns ``(values, notes)`` where ``notes[i]`` lists the zero-fill
    events for frame ``i``.
    """
    frames = np.asarray(frames, dtype=float)
    if frames.ndim != 3:
        raise ValueError(f"frames must be (N, C, W), got {frames.shape}")
    n, c, w = frames.shape
    if c < 2 or w < 4:
        raise ValueError("frames need at least 2 channels and 4 samples")
    layout = cfg.layout(c)
    notes = [[] for _ in range(n)]
    pairs = channel_pairs(c)

    ics = np.concatenate([max_similarity_batch(frames, pairs), covariance_batch(frames, pairs)], axis=1)
    psd = psd_batch(frames, cfg.burg_order, cfg.n_bands, cfg.n_freq)
    lmfs = log_moment_batch(frames).reshape(n, -1)
    td_in = frames if cfg.td_per_channel else frames.mean(axis=1)
    td, constant = td_batch(td_in, cfg.td.resolve(td_in))
    td = td.reshape(n, -1)
    for row in np.flatnonzero(np.reshape(constant, (n, -1)).any(axis=1)):
        notes[row].append("TDS: constant segment, kurtosis/skewness set to 0")
    hosa = [cumulant2_batch(frames)]
    hosa += [cumulant4_batch(frames[:, [ch - 1 for ch in g], :])[:, None] for g in cfg.hosa_groups]
    hosa = np.concatenate(hosa, axis=1)

    blocks = [ics, psd, lmfs, td, hosa]
    out = np.concatenate([_guard(b, f, notes) for b, f in zip(blocks, FAMILIES)], axis=1)
    assert out.shape[1] == layout.size
    return out, notes


def extract_features(frame, cfg: FeatureConfig = FeatureConfig()) -> FeatureVector:
    """Feature vector of one ``SegmentFrame`` (or a bare ``(C, W)`` array)."""
    data = np.asarray(getattr(frame, "data", frame), dtype=float)
    values, notes = extract_batch(data[None], cfg)
    for msg in notes[0]:
        warnings.warn(msg, FeatureWarning, stacklevel=2)
    return FeatureVector(values[0], cfg.layout(data.shape[0]), getattr(frame, "action", None),
                         (getattr(frame, "recording_id", ""), getattr(frame, "window_index", 0)),
                         tuple(notes[0]))


def extract_matrix(frames: np.ndarray, cfg: FeatureConfig = FeatureConfig(), threads: int = 1,
                   chunk_size: int = 128):
    """Chunked, optionally threaded :func:`extract_batch`.

    Chunks are reassembled by index, so the result does not depend on
    ``threads``.
    """
    frames = np.asarray(frames, dtype=float)
    starts = range(0, len(frames), chunk_size)
    work = lambda s: extract_batch(frames[s:s + chunk_size], cfg)  # noqa: E731
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(s) for s in starts]
    if not parts:
        return np.empty((0, cfg.layout(frames.shape[1]).size)), []
    values = np.concatenate([p[0] for p in parts], axis=0)
    notes = [note for p in parts for note in p[1]]
    n_bad = sum(1 for nt in notes if nt)
    if n_bad:
        warnings.warn(f"{n_bad} frame(s) had undefined features set to 0", FeatureWarning, stacklevel=2)
    return values, notes


def select_subset(v, spec, layout: FeatureLayout | None = None) -> np.ndarray:
    """Keep the requested families, in layout order.

    ``v`` may be a :class:`FeatureVector` or an array whose last axis follows
    ``layout`` (default: the 303-feature layout).
    """
    spec = parse_subset(spec) if not isinstance(spec, FeatureSubsetSpec) else spec
    if isinstance(v, FeatureVector):
        layout, values = v.layout, v.values
    else:
        layout, values = layout or build_layout(), np.asarray(v)
    return values[..., layout.indices(spec.families)]


# ------------------------------------------------------------------ file I/O

META_COLUMNS = ("label", "recording_id", "window_index")


@dataclass
class FeatureTable:
    """Feature matrix with per-row label and provenance."""

    values: np.ndarray
    labels: list
    recording_ids: list
    window_indices: list
    layout: FeatureLayout
    label_set: list
    config: FeatureConfig = field(default_factory=FeatureConfig)

    @property
    def y(self) -> np.ndarray:
        return np.array([self.label_set.index(lb) for lb in self.labels], dtype=int)


def write_feature_table(table: FeatureTable, path) -> tuple[Path, Path]:
    """CSV with feature columns then ``label, recording_id, window_index``, plus a sidecar JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(list(table.layout.names) + list(META_COLUMNS))
        for row, lb, rid, wi in zip(table.values, table.labels, table.recording_ids, table.window_indices):
            wr.writerow([repr(float(v)) for v in row] + [lb, rid, int(wi)])
    side = path.with_suffix(".layout.json")
    doc = {"layout": table.layout.to_dict()["slices"], "labels": list(table.label_set),
           "feature_config": table.config.to_dict(), "n_features": table.layout.size}
    side.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path, side


def read_feature_table(path) -> FeatureTable:
    path = Path(path)
    side = path.with_suffix(".layout.json")
    try:
        meta = json.loads(side.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"missing or unreadable layout sidecar {side}: {exc}") from exc
    cfg = FeatureConfig.from_dict(meta["feature_config"])
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    n_feat = meta["n_features"]
    if len(header) != n_feat + len(META_COLUMNS) or tuple(header[n_feat:]) != META_COLUMNS:
        raise FormatError(f"{path}: unexpected header")
    slices = {k: tuple(v) for k, v in meta["layout"].items()}
    layout = FeatureLayout(slices, tuple(header[:n_feat]))
    values = np.array([[float(c) for c in r[:n_feat]] for r in body], dtype=float).reshape(len(body), n_feat)
    return FeatureTable(values, [r[n_feat] for r in body], [r[n_feat + 1] for r in body],
                        [int(r[n_feat + 2]) for r in body], layout, list(meta["labels"]), cfg)
