"""Run configuration: a TOML file of sections with strict key checking."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .classify import ClassifierConfig, parse_classifier
from .errors import ConfigError
from .features import FeatureConfig, TDConfig, parse_subset
from .preprocess import WindowingConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class DatasetSection:
    manifest: str | None = None
    channels: int = 8
    sample_rate_hz: float = 1000.0


@dataclass(frozen=True)
class SynthSection:
    recordings_per_class: int = 4
    min_samples: int = 10000
    n_channels: int = 8


@dataclass(frozen=True)
class WindowingSection:
    window_length: int = 1000
    overlap: float = 0.25


@dataclass(frozen=True)
class FeaturesSection:
    burg_order: int = 4
    n_bands: int = 10
    n_freq: int = 256
    td_threshold: float | None = None
    td_threshold_scale: float = 0.05
    hosa_groups: tuple = ((1, 2, 3, 4), (5, 6, 7, 8))
    td_per_channel: bool = False


@dataclass(frozen=True)
class EvaluateSection:
    classifiers: tuple = ("1-NN", "svm")
    subsets: tuple = ("All", "ICS + Freq")
    cv_folds: int = 10
    repeats: int = 1
    pca_components: int | None = None
    elm_activations: tuple = ()
    elm_subset: str = "ICS + Freq"
    elm_tries: int = 20
    elm_split: float = 0.8
    elm_hidden: int = 200


@dataclass(frozen=True)
class SweepSection:
    subset: str = "ICS + Freq"
    classifier: str = "svm"
    k_values: tuple = (2, 5, 10, 26, 50, "full")
    max_drop: float = 0.05


@dataclass(frozen=True)
class RunConfig:
    seed: int = 7
    out: str = "out"
    threads: int | None = None
    dataset: DatasetSection = field(default_factory=DatasetSection)
    synth: SynthSection = field(default_factory=SynthSection)
    windowing: WindowingSection = field(default_factory=WindowingSection)
    features: FeaturesSection = field(default_factory=FeaturesSection)
    evaluate: EvaluateSection = field(default_factory=EvaluateSection)
    sweep: SweepSection = field(default_factory=SweepSection)

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    def windowing_config(self) -> WindowingConfig:
        return WindowingConfig(self.windowing.window_length, self.windowing.overlap)

    def feature_config(self) -> FeatureConfig:
        f = self.features
        return FeatureConfig(f.burg_order, f.n_bands, f.n_freq,
                             TDConfig(f.td_threshold, f.td_threshold_scale), f.hosa_groups, f.td_per_channel)

    def stage_seed(self, stage: str) -> int:
        """Per-stage seed derived from the master seed."""
        stages = ("synth", "cv", "elm", "train")
        if stage == "synth":
            return self.seed
        return int(np.random.SeedSequence([self.seed, stages.index(stage)]).generate_state(1)[0])

    def stage_seeds(self) -> dict:
        return {s: self.stage_seed(s) for s in ("synth", "cv", "elm", "train")}

    def to_dict(self) -> dict:
        def conv(v):
            if hasattr(v, "__dataclass_fields__"):
                return {f.name: conv(getattr(v, f.name)) for f in fields(v)}
            if isinstance(v, tuple):
                return [conv(x) for x in v]
            return v
        return conv(self)


_SECTIONS = {"dataset": DatasetSection, "synth": SynthSection, "windowing": WindowingSection,
             "features": FeaturesSection, "evaluate": EvaluateSection, "sweep": SweepSection}


def _tuplify(v):
    if isinstance(v, list):
        return tuple(_tuplify(x) for x in v)
    return v


def _build(cls, data: dict, where: str):
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    return cls(**{k: _tuplify(v) for k, v in data.items()})


def config_from_dict(doc: dict) -> RunConfig:
    top = {k: v for k, v in doc.items() if k not in _SECTIONS}
    for k, v in doc.items():
        if k in _SECTIONS and not isinstance(v, dict):
            raise ConfigError(f"[{k}] must be a table")
    sections = {k: _build(cls, doc.get(k, {}), f"[{k}]") for k, cls in _SECTIONS.items()}
    unknown = sorted(set(top) - {"seed", "out", "threads"})
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {', '.join(unknown)}")
    if "seed" not in top:
        raise ConfigError("seed is required")
    if isinstance(top["seed"], bool) or not isinstance(top["seed"], int) or top["seed"] < 0:
        raise ConfigError("seed must be a non-negative integer")
    cfg = RunConfig(**top, **sections)
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    """Construct every derived object once so bad values fail before any work starts."""
    cfg.windowing_config()
    cfg.feature_config()
    ev, sw = cfg.evaluate, cfg.sweep
    for s in (*ev.subsets, ev.elm_subset, sw.subset):
        parse_subset(s)
    for c in (*ev.classifiers, sw.classifier):
        parse_classifier(c)
    for a in ev.elm_activations:
        ClassifierConfig("elm", activation=a)
    if ev.cv_folds < 2 or ev.repeats < 1 or ev.elm_tries < 1 or not 0 < ev.elm_split < 1:
        raise ConfigError("evaluate: need cv_folds >= 2, repeats >= 1, elm_tries >= 1, 0 < elm_split < 1")
    if not sw.k_values or any(k != "full" and (not isinstance(k, int) or k < 1) for k in sw.k_values):
        raise ConfigError("sweep.k_values must be positive integers or \"full\"")
    if cfg.threads is not None and cfg.threads < 1:
        raise ConfigError("threads must be >= 1")
    if cfg.dataset.manifest is not None and not Path(cfg.dataset.manifest).exists():
        raise ConfigError(f"manifest not found: {cfg.dataset.manifest}")


def load_config(path=None, **overrides) -> RunConfig:
    """Read a TOML run file; non-None ``overrides`` replace top-level keys.

    Without a file the built-in defaults apply, seed 7 included. With a
    file the seed must come from the file or from ``overrides``.
    """
    doc = {"seed": RunConfig.seed} if path is None else {}
    if path is not None:
        path = Path(path)
        try:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    doc.update({k: v for k, v in overrides.items() if v is not None})
    man = doc.get("dataset", {}).get("manifest") if isinstance(doc.get("dataset"), dict) else None
    if path is not None and isinstance(man, str) and not Path(man).is_absolute():
        doc["dataset"] = {**doc["dataset"], "manifest": str(path.parent / man)}
    return config_from_dict(doc)
