"""Feature-vector layout: family slices, column names and subset selection."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..errors import ConfigError

FAMILIES = ("ICS", "PSD", "LMFS", "TDS", "HOSA")

TD_NAMES = ("AMP", "RMS", "VAR", "WL", "MAV", "SSI", "ZC", "SSC", "WAMP", "IEMG", "LOG",
            "MYOP", "DASDV", "EMAV", "EWL", "MMAV", "MMAV2", "MFL", "AAC", "KURT", "SKEW")

# (i, j) pairs for the pairwise log-moment features, 1 <= i < j <= 5
MOMENT_PAIRS = tuple(combinations(range(1, 6), 2))

# composite names accepted in subset specs, matched case-insensitively
_ALIASES = {
    "all": FAMILIES,
    "ics": ("ICS",),
    "psd": ("PSD",),
    "lmf": ("LMFS",),
    "lmfs": ("LMFS",),
    "hosa": ("HOSA",),
    "tds": ("TDS",),
    "td": ("TDS",),
    "time": ("TDS",),
    "timebased": ("TDS",),
    "freq": ("PSD", "LMFS"),
    "freqbased": ("PSD", "LMFS"),
}

# row labels of the feature-subset comparison table
TABLE_SUBSETS = ("All", "Time Based", "ICS", "PSD", "LMF", "HOSA", "Freq Based", "ICS + Freq",
                 "ICS + Freq + HOSA", "Freq + HOSA", "ICS + HOSA", "Time + ICS + HOSA",
                 "ICS + PSD", "ICS + LMF", "ICS + PSD + HOSA", "ICS + LMF + HOSA")


def channel_pairs(n_channels: int = 8) -> tuple[tuple[int, int], ...]:
    """1-based channel pairs in row-major order: (1,2), (1,3), ..., (7,8) for 8 channels."""
    return tuple(combinations(range(1, n_channels + 1), 2))


CHANNEL_PAIRS = channel_pairs(8)


@dataclass(frozen=True)
class FeatureLayout:
    slices: dict
    names: tuple

    @property
    def size(self) -> int:
        return len(self.names)

    def counts(self) -> dict:
        return {k: b - a for k, (a, b) in self.slices.items()}

    def indices(self, families) -> np.ndarray:
        fams = set(families)
        return np.concatenate([np.arange(*self.slices[f]) for f in FAMILIES if f in fams])

    def to_dict(self):
        return {"slices": {k: list(v) for k, v in self.slices.items()}, "names": list(self.names)}


def build_layout(n_channels: int = 8, n_bands: int = 10,
                 hosa_groups=((1, 2, 3, 4), (5, 6, 7, 8)), td_per_channel: bool = False) -> FeatureLayout:
    pairs = channel_pairs(n_channels)
    names = [f"ics_maxsim_{i}_{j}" for i, j in pairs]
    names += [f"ics_cov_{i}_{j}" for i, j in pairs]
    names += [f"psd_ch{c}_b{b}" for c in range(1, n_channels + 1) for b in range(1, n_bands + 1)]
    lm = [f"f{n}" for n in range(1, 18)]
    names += [f"lmfs_ch{c}_{f}" for c in range(1, n_channels + 1) for f in lm]
    if td_per_channel:
        names += [f"tds_ch{c}_{t.lower()}" for c in range(1, n_channels + 1) for t in TD_NAMES]
    else:
        names += [f"tds_{t.lower()}" for t in TD_NAMES]
    names += [f"hosa_c2_ch{c}" for c in range(1, n_channels + 1)]
    names += [f"hosa_c4_g{g + 1}" for g in range(len(hosa_groups))]
    counts = [2 * len(pairs), n_channels * n_bands, 17 * n_channels,
              len(TD_NAMES) * (n_channels if td_per_channel else 1), n_channels + len(hosa_groups)]
    slices, start = {}, 0
    for fam, n in zip(FAMILIES, counts):
        slices[fam] = (start, start + n)
        start += n
    return FeatureLayout(slices, tuple(names))


@dataclass(frozen=True)
class FeatureSubsetSpec:
    families: frozenset
    name: str = ""

    def __post_init__(self):
        if not self.families:
            raise ConfigError("feature subset must name at least one family")
        bad = set(self.families) - set(FAMILIES)
        if bad:
            raise ConfigError(f"unknown feature families: {sorted(bad)}")


def parse_subset(spec) -> FeatureSubsetSpec:
    """Parse ``'ICS + Freq'``-style names (or an iterable of names) into a subset spec."""
    if isinstance(spec, FeatureSubsetSpec):
        return spec
    if isinstance(spec, str):
        tokens, name = spec.split("+"), spec.strip()
    else:
        tokens = list(spec)
        name = " + ".join(str(t) for t in tokens)
    fams = set()
    for tok in tokens:
        key = re.sub(r"[\s_\-']", "", str(tok)).lower()
        if key.upper() in FAMILIES:
            fams.add(key.upper())
        elif key in _ALIASES:
            fams.update(_ALIASES[key])
        else:
            raise ConfigError(f"unknown feature family {tok!r}")
    return FeatureSubsetSpec(frozenset(fams), name)
