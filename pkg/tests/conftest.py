import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from semgact.evaluate import Dataset  # noqa: E402
from semgact.features import FeatureConfig, FeatureTable, extract_matrix  # noqa: E402
from semgact.ingest import generate_synthetic_dataset  # noqa: E402
from semgact.preprocess import recording_frames  # noqa: E402


@pytest.fixture(scope="session")
def synth_recordings():
    return generate_synthetic_dataset(seed=7)


@pytest.fixture(scope="session")
def synth_table(synth_recordings):
    frames, labels, rids, widx = [], [], [], []
    for rec in synth_recordings:
        fr = recording_frames(rec)
        frames.append(fr)
        labels += [rec.action.name] * len(fr)
        rids += [rec.id] * len(fr)
        widx += list(range(len(fr)))
    values, _ = extract_matrix(np.concatenate(frames))
    cfg = FeatureConfig()
    label_set = ["Typing", "Rest", "Lifting", "Pushups"]
    return FeatureTable(values, labels, rids, widx, cfg.layout(), label_set, cfg)


@pytest.fixture(scope="session")
def synth_dataset(synth_table):
    return Dataset.from_table(synth_table)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
