"""Loading labeled multi-channel recordings and generating synthetic ones.

Recordings are stored as CSV, one column per channel and one row per
sample, with an optional ``ch1,...,chC`` header. A JSON manifest binds
recording files to action labels and subjects.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import signal as sps

from .errors import DegenerateSpecError, FormatError, IoError, ParseError, TooShortError

DEFAULT_WINDOW = 1000


@dataclass(frozen=True)
class ActionLabel:
    name: str
    index: int


@dataclass(frozen=True, eq=False)
class Recording:
    """One labeled C-channel time series.

    ``channels`` has shape ``(channel_count, sample_count)``.
    """

    id: str
    action: ActionLabel
    channels: np.ndarray
    sample_rate_hz: float = 1000.0
    subject: str = ""

    def __post_init__(self):
        ch = np.asarray(self.channels, dtype=float)
        if ch.ndim != 2:
            raise FormatError(f"recording {self.id!r}: channels must be 2-D, got shape {ch.shape}")
        if ch.shape[0] < 2:
            raise FormatError(f"recording {self.id!r}: need at least 2 channels, got {ch.shape[0]}")
        if not np.all(np.isfinite(ch)):
            raise ParseError(f"recording {self.id!r}: non-finite sample values")
        object.__setattr__(self, "channels", ch)

    @property
    def channel_count(self) -> int:
        return self.channels.shape[0]

    @property
    def sample_count(self) -> int:
        return self.channels.shape[1]


@dataclass
class ManifestEntry:
    path: str
    action: str
    subject: str = ""


@dataclass
class DatasetManifest:
    entries: list[ManifestEntry]
    label_set: list[str]
    root: Path = field(default_factory=Path)

    def __post_init__(self):
        unknown = sorted({e.action for e in self.entries} - set(self.label_set))
        if unknown:
            raise FormatError(f"manifest actions not in label set: {unknown}")
        paths = [e.path for e in self.entries]
        if len(set(paths)) != len(paths):
            raise FormatError("manifest paths must be unique")
        if len(set(self.label_set)) != len(self.label_set):
            raise FormatError("manifest label set has duplicates")

    def label(self, name: str) -> ActionLabel:
        return ActionLabel(name, self.label_set.index(name))

    def resolve(self, entry: ManifestEntry) -> Path:
        p = Path(entry.path)
        return p if p.is_absolute() else self.root / p


# --------------------------------------------------------------------- CSV

def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_recording(path, expected_channels: int = 8, window_length: int = DEFAULT_WINDOW,
                   action: ActionLabel | None = None, recording_id: str | None = None,
                   sample_rate_hz: float = 1000.0, subject: str = "") -> Recording:
    """Parse a recording CSV.

    Raises
    ------
    FormatError
        A row does not have ``expected_channels`` cells.
    ParseError
        A cell is not a finite decimal number.
    TooShortError
        Fewer than ``window_length`` samples.
    """
    path = Path(path)
    if action is None:
        action = ActionLabel("unknown", 0)
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        first = True
        for line_no, cells in enumerate(reader, start=1):
            if not cells or all(not c.strip() for c in cells):
                continue
            cells = [c.strip() for c in cells]
            if first:
                first = False
                if not any(_is_number(c) for c in cells):
                    if len(cells) != expected_channels:
                        raise FormatError(
                            f"{path}: header has {len(cells)} columns, expected {expected_channels}")
                    continue
            row_no = len(rows) + 1
            if len(cells) != expected_channels:
                raise FormatError(
                    f"{path}: row {row_no} (line {line_no}) has {len(cells)} cells, "
                    f"expected {expected_channels}")
            try:
                vals = [float(c) for c in cells]
            except ValueError as exc:
                raise ParseError(f"{path}: row {row_no} (line {line_no}): {exc}") from None
            if not all(math.isfinite(v) for v in vals):
                raise ParseError(f"{path}: row {row_no} (line {line_no}) has a non-finite value")
            rows.append(vals)
    if len(rows) < window_length:
        raise TooShortError(f"{path}: {len(rows)} samples, need at least {window_length}")
    data = np.asarray(rows, dtype=float).T
    return Recording(recording_id or path.stem, action, data, sample_rate_hz, subject)


def write_recording(recording: Recording, path) -> Path:
    """Write ``recording`` as CSV with a header; values round-trip exactly."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        header = ",".join(f"ch{i + 1}" for i in range(recording.channel_count))
        np.savetxt(path, recording.channels.T, delimiter=",", fmt="%.17g",
                   header=header, comments="")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def load_manifest(path) -> DatasetManifest:
    """Read a manifest JSON.

    Accepts either ``{"labels": [...], "entries": [...]}`` or a bare array of
    entries, in which case labels are taken in order of first appearance.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read manifest {path}: {exc}") from exc
    if isinstance(doc, list):
        raw_entries, labels = doc, None
    elif isinstance(doc, dict):
        raw_entries, labels = doc.get("entries", []), doc.get("labels")
    else:
        raise FormatError(f"{path}: manifest must be an object or an array")
    try:
        entries = [ManifestEntry(str(e["path"]), str(e["action"]), str(e.get("subject", "")))
                   for e in raw_entries]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: malformed manifest entry: {exc}") from exc
    if labels is None:
        labels = list(dict.fromkeys(e.action for e in entries))
    return DatasetManifest(entries, [str(x) for x in labels], path.parent)


def write_manifest(manifest: DatasetManifest, path) -> Path:
    path = Path(path)
    doc = {"labels": list(manifest.label_set),
           "entries": [asdict(e) for e in manifest.entries]}
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path


def load_dataset(manifest: DatasetManifest | str | Path, expected_channels: int = 8,
                 window_length: int = DEFAULT_WINDOW, sample_rate_hz: float = 1000.0) -> list[Recording]:
    if not isinstance(manifest, DatasetManifest):
        manifest = load_manifest(manifest)
    out = []
    for e in manifest.entries:
        out.append(load_recording(manifest.resolve(e), expected_channels, window_length,
                                  action=manifest.label(e.action), sample_rate_hz=sample_rate_hz,
                                  subject=e.subject))
    return out


# --------------------------------------------------------------- synthetic

@dataclass(frozen=True)
class ClassSpec:
    """Generative parameters for one synthetic action.

    Each channel is band-limited noise scaled by ``channel_gains`` and by a
    muscle activation profile (``baseline`` plus Hann-shaped bursts arriving
    at ``burst_rate`` per second), amplitude-modulated at the carrier
    frequencies, plus an additive sinusoid at each carrier.
    """

    name: str
    channel_gains: tuple[float, ...]
    noise_band: tuple[float, float] = (20.0, 200.0)
    baseline: float = 0.3
    burst_rate: float = 1.0
    burst_amplitude: float = 1.0
    burst_width_s: float = 0.3
    carriers: tuple[float, ...] = (10.0,)
    carrier_amplitude: float = 0.2
    modulation_depth: float = 0.3
    channel_coupling: float = 0.3

    def generative_params(self):
        d = asdict(self)
        d.pop("name")
        return d


@dataclass(frozen=True)
class SynthSpec:
    classes: tuple[ClassSpec, ...]
    n_channels: int = 8
    min_samples: int = 10000
    length_jitter: int = 0
    sample_rate_hz: float = 1000.0
    recordings_per_class: int = 4
    gain_jitter: float = 0.35
    carrier_jitter: float = 0.1

    @property
    def label_set(self) -> list[str]:
        return [c.name for c in self.classes]


def _ramp(n, lo, hi):
    return tuple(float(v) for v in np.linspace(lo, hi, n))


def default_synth_spec(n_channels: int = 8, min_samples: int = 10000,
                       recordings_per_class: int = 4) -> SynthSpec:
    """Four classes (Typing, Rest, Lifting, Pushups), spectrally and temporally distinct."""
    c = n_channels
    classes = (
        ClassSpec("Typing", _ramp(c, 1.2, 0.4), noise_band=(30.0, 200.0), baseline=0.3,
                  burst_rate=4.0, burst_amplitude=0.8, burst_width_s=0.08, carriers=(12.0,),
                  carrier_amplitude=0.05, modulation_depth=0.3, channel_coupling=0.2),
        ClassSpec("Rest", _ramp(c, 0.3, 0.3), noise_band=(20.0, 120.0), baseline=0.1,
                  burst_rate=0.2, burst_amplitude=0.2, burst_width_s=0.5, carriers=(6.0,),
                  carrier_amplitude=0.02, modulation_depth=0.1, channel_coupling=0.7),
        ClassSpec("Lifting", _ramp(c, 0.7, 1.3), noise_band=(50.0, 280.0), baseline=0.7,
                  burst_rate=0.8, burst_amplitude=1.0, burst_width_s=1.0, carriers=(20.0,),
                  carrier_amplitude=0.1, modulation_depth=0.4, channel_coupling=0.55),
        ClassSpec("Pushups", _ramp(c, 1.0, 1.0), noise_band=(55.0, 300.0), baseline=0.6,
                  burst_rate=1.0, burst_amplitude=1.5, burst_width_s=0.6, carriers=(18.0, 40.0),
                  carrier_amplitude=0.1, modulation_depth=0.5, channel_coupling=0.6),
    )
    return SynthSpec(classes, n_channels=c, min_samples=min_samples,
                     recordings_per_class=recordings_per_class)


def _validate_synth_spec(spec: SynthSpec):
    if len(spec.classes) < 2:
        raise DegenerateSpecError("need at least two classes")
    names = [c.name for c in spec.classes]
    if len(set(names)) != len(names):
        raise DegenerateSpecError("class names must be unique")
    seen = {}
    for cls in spec.classes:
        if len(cls.channel_gains) != spec.n_channels:
            raise DegenerateSpecError(
                f"class {cls.name!r}: {len(cls.channel_gains)} gains for {spec.n_channels} channels")
        if not 1 <= len(cls.carriers) <= 2:
            raise DegenerateSpecError(f"class {cls.name!r}: need 1 or 2 carrier frequencies")
        nyq = spec.sample_rate_hz / 2
        lo, hi = cls.noise_band
        if not 0 < lo < hi < nyq:
            raise DegenerateSpecError(f"class {cls.name!r}: noise band must lie in (0, {nyq})")
        key = repr(sorted(cls.generative_params().items()))
        if key in seen:
            raise DegenerateSpecError(
                f"classes {seen[key]!r} and {cls.name!r} have identical generative parameters")
        seen[key] = cls.name
    if spec.min_samples < 2:
        raise DegenerateSpecError("min_samples must be at least 2")


def _band_noise(rng, n, band, fs):
    sos = sps.butter(4, band, btype="bandpass", fs=fs, output="sos")
    w = rng.standard_normal(n)
    y = sps.sosfiltfilt(sos, w)
    return y / y.std()


def _activation(rng, n, fs, cls: ClassSpec):
    act = np.full(n, cls.baseline)
    width = max(int(round(cls.burst_width_s * fs)), 3)
    n_bursts = rng.poisson(cls.burst_rate * n / fs)
    bump = np.hanning(width)
    for start in np.sort(rng.integers(-width // 2, n, size=n_bursts)):
        amp = cls.burst_amplitude * rng.uniform(0.7, 1.3)
        lo, hi = max(start, 0), min(start + width, n)
        act[lo:hi] += amp * bump[lo - start:hi - start]
    return act


def _synth_recording(spec: SynthSpec, cls: ClassSpec, rng) -> np.ndarray:
    fs = spec.sample_rate_hz
    n = spec.min_samples + (int(rng.integers(0, spec.length_jitter + 1)) if spec.length_jitter else 0)
    t = np.arange(n) / fs
    shared = _band_noise(rng, n, cls.noise_band, fs)
    act = _activation(rng, n, fs, cls)
    phases = rng.uniform(0, 2 * np.pi, size=(2, len(cls.carriers)))
    carriers = [f * (1 + spec.carrier_jitter * rng.uniform(-1, 1)) for f in cls.carriers]
    mod = 1 + cls.modulation_depth * np.mean(
        [np.sin(2 * np.pi * f * t + ph) for f, ph in zip(carriers, phases[0])], axis=0)
    tone = np.sum([np.sin(2 * np.pi * f * t + ph) for f, ph in zip(carriers, phases[1])], axis=0)
    rho = cls.channel_coupling
    out = np.empty((spec.n_channels, n))
    for ch in range(spec.n_channels):
        own = _band_noise(rng, n, cls.noise_band, fs)
        noise = math.sqrt(rho) * shared + math.sqrt(1 - rho) * own
        gain = cls.channel_gains[ch] * (1 + spec.gain_jitter * rng.uniform(-1, 1))
        out[ch] = gain * act * mod * noise + cls.carrier_amplitude * gain * tone
    return out


def generate_synthetic_dataset(spec: SynthSpec | None = None, seed: int = 7) -> list[Recording]:
    """Generate labeled synthetic recordings, a pure function of ``(spec, seed)``.

    Every recording draws from its own child stream of ``SeedSequence(seed)``
    so adding classes or recordings does not perturb existing ones.
    """
    spec = spec or default_synth_spec()
    _validate_synth_spec(spec)
    out = []
    for ci, cls in enumerate(spec.classes):
        label = ActionLabel(cls.name, ci)
        for ri in range(spec.recordings_per_class):
            rng = np.random.default_rng(np.random.SeedSequence([seed, ci, ri]))
            data = _synth_recording(spec, cls, rng)
            out.append(Recording(f"{cls.name.lower()}_{ri:02d}", label, data,
                                 spec.sample_rate_hz, subject="synthetic"))
    return out


def write_dataset(recordings: Sequence[Recording], out_dir, label_set: Sequence[str]) -> DatasetManifest:
    """Write recordings as CSVs plus ``manifest.json`` under ``out_dir``."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out_dir}: {exc}") from exc
    entries = []
    for rec in recordings:
        name = f"{rec.id}.csv"
        write_recording(rec, out_dir / name)
        entries.append(ManifestEntry(name, rec.action.name, rec.subject))
    manifest = DatasetManifest(entries, list(label_set), out_dir)
    write_manifest(manifest, out_dir / "manifest.json")
    return manifest
