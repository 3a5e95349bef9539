import json
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from semgact.errors import DegenerateSpecError, FormatError, IoError, ParseError, TooShortError
from semgact.features import burg_psd
from semgact.ingest import (ActionLabel, ClassSpec, DatasetManifest, ManifestEntry, Recording, SynthSpec,
                            default_synth_spec, generate_synthetic_dataset, load_dataset, load_manifest,
                            load_recording, write_dataset, write_recording)


def _write_csv(path, rows, header=True):
    lines = []
    if header:
        lines.append(",".join(f"ch{i + 1}" for i in range(8)))
    lines += [",".join(str(v) for v in r) for r in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def test_load_8_channel_10000_rows(tmp_path, rng):
    data = rng.standard_normal((10000, 8))
    rec = load_recording(_write_csv(tmp_path / "a.csv", data.tolist()), 8)
    assert rec.channel_count == 8
    assert rec.sample_count == 10000
    np.testing.assert_array_equal(rec.channels, data.T)


def test_load_without_header(tmp_path, rng):
    data = rng.standard_normal((1000, 8))
    rec = load_recording(_write_csv(tmp_path / "a.csv", data.tolist(), header=False), 8)
    assert rec.sample_count == 1000


def test_ragged_row_names_row_5(tmp_path):
    rows = [[0.1] * 8 for _ in range(1200)]
    rows[4] = [0.1] * 7
    with pytest.raises(FormatError, match=r"row 5\b"):
        load_recording(_write_csv(tmp_path / "a.csv", rows), 8)


def test_non_numeric_cell(tmp_path):
    rows = [[0.1] * 8 for _ in range(1200)]
    rows[10][3] = "abc"
    with pytest.raises(ParseError, match="row 11"):
        load_recording(_write_csv(tmp_path / "a.csv", rows), 8)


def test_non_finite_cell(tmp_path):
    rows = [[0.1] * 8 for _ in range(1200)]
    rows[2][0] = "nan"
    with pytest.raises(ParseError):
        load_recording(_write_csv(tmp_path / "a.csv", rows), 8)


def test_too_short(tmp_path):
    rows = [[0.1] * 8 for _ in range(500)]
    with pytest.raises(TooShortError):
        load_recording(_write_csv(tmp_path / "a.csv", rows), 8, window_length=1000)


def test_recording_invariants():
    with pytest.raises(ValueError):
        Recording("r", ActionLabel("A", 0), np.zeros((1, 2000)))
    with pytest.raises(ValueError):
        Recording("r", ActionLabel("A", 0), np.zeros(2000))


@settings(max_examples=25, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(2, 5), st.integers(4, 40)),
              elements=st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)))
def test_write_load_round_trip(tmp_path_factory, data):
    path = tmp_path_factory.mktemp("rt") / "r.csv"
    rec = Recording("r", ActionLabel("A", 0), data)
    back = load_recording(write_recording(rec, path), data.shape[0], window_length=data.shape[1])
    np.testing.assert_array_equal(back.channels, rec.channels)


def test_write_recording_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    rec = Recording("r", ActionLabel("A", 0), np.zeros((2, 10)))
    with pytest.raises(IoError):
        write_recording(rec, blocker / "sub" / "r.csv")


def test_manifest_object_and_array_forms(tmp_path):
    entries = [{"path": "a.csv", "action": "Rest", "subject": "s1"},
               {"path": "b.csv", "action": "Typing", "subject": "s1"}]
    (tmp_path / "m1.json").write_text(json.dumps({"labels": ["Typing", "Rest"], "entries": entries}))
    (tmp_path / "m2.json").write_text(json.dumps(entries))
    m1, m2 = load_manifest(tmp_path / "m1.json"), load_manifest(tmp_path / "m2.json")
    assert m1.label_set == ["Typing", "Rest"]
    assert m1.label("Rest").index == 1
    assert m2.label_set == ["Rest", "Typing"]
    assert m1.resolve(m1.entries[0]) == tmp_path / "a.csv"


def test_manifest_invariants():
    with pytest.raises(FormatError):
        DatasetManifest([ManifestEntry("a.csv", "Jump")], ["Rest"])
    with pytest.raises(FormatError):
        DatasetManifest([ManifestEntry("a.csv", "Rest"), ManifestEntry("a.csv", "Rest")], ["Rest"])


def test_dataset_round_trip(tmp_path):
    spec = replace(default_synth_spec(min_samples=1500), recordings_per_class=1)
    recs = generate_synthetic_dataset(spec, seed=1)
    man = write_dataset(recs, tmp_path / "d", spec.label_set)
    back = load_dataset(tmp_path / "d" / "manifest.json")
    assert [r.action for r in back] == [r.action for r in recs]
    for a, b in zip(recs, back):
        np.testing.assert_array_equal(a.channels, b.channels)
    assert len(man.entries) == 4


def test_synthetic_default_shape():
    recs = generate_synthetic_dataset(seed=7)
    assert len(recs) == 16
    assert {r.action.name for r in recs} == {"Typing", "Rest", "Lifting", "Pushups"}
    assert all(r.channels.shape == (8, 10000) for r in recs)
    assert all(np.all(np.isfinite(r.channels)) for r in recs)


def test_synthetic_deterministic_and_seed_sensitive():
    spec = replace(default_synth_spec(), recordings_per_class=1)
    a = generate_synthetic_dataset(spec, seed=7)
    b = generate_synthetic_dataset(spec, seed=7)
    c = generate_synthetic_dataset(spec, seed=8)
    for x, y in zip(a, b):
        assert x.channels.tobytes() == y.channels.tobytes()
    assert any(x.channels.tobytes() != z.channels.tobytes() for x, z in zip(a, c))


def test_length_jitter_respects_minimum():
    spec = replace(default_synth_spec(min_samples=2000), recordings_per_class=2, length_jitter=300)
    assert all(2000 <= r.sample_count <= 2300 for r in generate_synthetic_dataset(spec, seed=2))


def test_degenerate_spec():
    cls = ClassSpec("A", (1.0,) * 8)
    with pytest.raises(DegenerateSpecError):
        generate_synthetic_dataset(SynthSpec((cls, replace(cls, name="B"))))
    with pytest.raises(DegenerateSpecError):
        generate_synthetic_dataset(SynthSpec((cls,)))
    with pytest.raises(DegenerateSpecError):
        generate_synthetic_dataset(SynthSpec((cls, replace(cls, name="B", carriers=(1.0, 2.0, 3.0)))))


def test_carrier_20_vs_80_hz_burg_peaks_differ():
    # tone-dominated classes: the raw-signal Burg peak sits at the carrier
    g = (1.0,) * 8
    common = dict(noise_band=(100.0, 300.0), baseline=1.0, burst_rate=0.0,
                  carrier_amplitude=3.0, modulation_depth=0.0)
    spec = SynthSpec((ClassSpec("A", g, carriers=(20.0,), **common),
                      ClassSpec("B", g, carriers=(80.0,), **common)),
                     min_samples=4000, recordings_per_class=2, carrier_jitter=0.0)
    peaks = {}
    for r in generate_synthetic_dataset(spec, seed=3):
        peaks.setdefault(r.action.name, []).append(np.mean([burg_psd(ch, 8) for ch in r.channels], axis=0))
    arg = {k: int(np.argmax(np.mean(v, axis=0))) for k, v in peaks.items()}
    hz = {k: v * 500.0 / 255 for k, v in arg.items()}
    assert arg["A"] != arg["B"]
    assert abs(hz["A"] - 20) < 4 and abs(hz["B"] - 80) < 4
