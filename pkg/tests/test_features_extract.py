import warnings

import numpy as np
import pytest

from semgact.errors import ConfigError, FeatureWarning, FormatError
from semgact.features import (FAMILIES, TABLE_SUBSETS, FeatureConfig, FeatureTable, build_layout, extract_batch,
                              extract_features, extract_matrix, parse_subset, read_feature_table, select_subset,
                              write_feature_table)


@pytest.fixture
def frames(rng):
    return np.abs(rng.standard_normal((6, 8, 1000))) + 0.1


def test_vector_length_and_family_sizes(frames):
    v = extract_features(frames[0])
    assert v.values.shape == (303,)
    assert v.layout.counts() == {"ICS": 56, "PSD": 80, "LMFS": 136, "TDS": 21, "HOSA": 10}
    assert [v.family(f).size for f in FAMILIES] == [56, 80, 136, 21, 10]
    assert np.all(np.isfinite(v.values))


def test_identical_channels_give_unit_similarity(rng):
    ch = np.abs(rng.standard_normal(1000)) + 0.1
    v = extract_features(np.tile(ch, (8, 1)))
    np.testing.assert_allclose(v.family("ICS")[:28], 1.0, atol=1e-12)
    np.testing.assert_allclose(v.family("ICS")[28:], np.var(ch, ddof=1), rtol=1e-10)


def test_extraction_deterministic(frames):
    a = extract_features(frames[2]).values
    b = extract_features(frames[2].copy()).values
    assert a.tobytes() == b.tobytes()


def test_batch_matches_single(frames):
    values, notes = extract_batch(frames)
    for i in range(len(frames)):
        np.testing.assert_allclose(values[i], extract_features(frames[i]).values, rtol=1e-12, atol=1e-14)
    assert notes == [[] for _ in frames]


def test_matrix_independent_of_threads_and_chunks(frames):
    base, _ = extract_matrix(frames)
    for threads, chunk in ((4, 2), (2, 1), (1, 5)):
        got, _ = extract_matrix(frames, threads=threads, chunk_size=chunk)
        assert got.tobytes() == base.tobytes()


def test_select_subset_sizes(frames):
    v = extract_features(frames[0])
    assert select_subset(v, "ICS + Freq").size == 56 + 80 + 136
    assert select_subset(v, "HOSA").size == 10
    np.testing.assert_array_equal(select_subset(v, "All"), v.values)
    np.testing.assert_array_equal(select_subset(v.values[None], "HOSA")[0], v.family("HOSA"))
    with pytest.raises(ConfigError):
        select_subset(v, "Wavelet")


def test_table_subsets_all_parse():
    sizes = {}
    lay = build_layout()
    for name in TABLE_SUBSETS:
        sizes[name] = lay.indices(parse_subset(name).families).size
    assert sizes["All"] == 303
    assert sizes["Time Based"] == 21
    assert sizes["Freq Based"] == 216
    assert sizes["ICS + Freq + HOSA"] == 282
    assert sizes["Time + ICS + HOSA"] == 87


def test_layout_names_unique_and_ordered():
    lay = build_layout()
    assert len(set(lay.names)) == 303
    assert lay.names[0] == "ics_maxsim_1_2" and lay.names[28] == "ics_cov_1_2"
    assert lay.names[56] == "psd_ch1_b1" and lay.names[-1] == "hosa_c4_g2"
    assert build_layout(td_per_channel=True).counts()["TDS"] == 168


def test_zero_frame_guarded(rng):
    frame = np.abs(rng.standard_normal((8, 1000))) + 0.1
    frame[4] = 0.0
    with pytest.warns(FeatureWarning):
        v = extract_features(frame)
    assert np.all(np.isfinite(v.values))
    assert v.warnings


def test_feature_config_validation():
    with pytest.raises(ConfigError):
        FeatureConfig(burg_order=0)
    with pytest.raises(ConfigError):
        FeatureConfig(n_bands=300)
    with pytest.raises(ConfigError):
        FeatureConfig(hosa_groups=((1, 2, 3),))
    with pytest.raises(ConfigError):
        FeatureConfig(hosa_groups=((1, 2, 3, 9),)).layout(8)
    cfg = FeatureConfig(burg_order=6)
    assert FeatureConfig.from_dict(cfg.to_dict()) == cfg


def test_feature_table_round_trip(tmp_path, frames):
    values, _ = extract_matrix(frames)
    cfg = FeatureConfig()
    table = FeatureTable(values, ["A", "B"] * 3, [f"r{i // 2}" for i in range(6)], [0, 1] * 3,
                         cfg.layout(), ["A", "B"], cfg)
    csv_path, side = write_feature_table(table, tmp_path / "f" / "features.csv")
    header = csv_path.read_text().splitlines()[0].split(",")
    assert len(header) == 306
    back = read_feature_table(csv_path)
    assert back.values.tobytes() == values.tobytes()
    assert back.labels == table.labels and back.recording_ids == table.recording_ids
    assert back.window_indices == table.window_indices
    assert back.layout == table.layout and back.config == cfg
    np.testing.assert_array_equal(back.y, [0, 1] * 3)
    side.unlink()
    with pytest.raises(FormatError):
        read_feature_table(csv_path)


def test_synthetic_table_is_finite(synth_table):
    assert synth_table.values.shape == (16 * 13, 303)
    assert np.all(np.isfinite(synth_table.values))


def test_no_warnings_on_synthetic_frames(synth_recordings):
    from semgact.preprocess import recording_frames
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        extract_matrix(recording_frames(synth_recordings[0]))
