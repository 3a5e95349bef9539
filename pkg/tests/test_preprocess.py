import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from semgact.errors import ConfigError, NonFiniteError, TooShortError
from semgact.ingest import ActionLabel, Recording
from semgact.preprocess import (WindowingConfig, analytic_signal, preprocess_recording, recording_frames,
                                segment, segment_array, upper_envelope, window_count)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def test_zero_input_gives_zero_envelope():
    np.testing.assert_array_equal(upper_envelope(np.zeros(64)), np.zeros(64))


def test_tone_envelope_matches_amplitude():
    n = np.arange(256)
    env = upper_envelope(2 * np.cos(2 * np.pi * 8 * n / 256))
    interior = env[16:-16]
    assert np.all(np.abs(interior - 2.0) <= 0.02 * 2.0)


@pytest.mark.parametrize("n", [5, 37, 64, 100])
def test_envelope_matches_direct_dft_oracle(n, rng):
    x = rng.standard_normal(n)
    np.testing.assert_allclose(upper_envelope(x), oracles.dft_envelope(list(x)), rtol=1e-9, atol=1e-12)


def test_analytic_real_part_is_signal_for_power_of_two(rng):
    x = rng.standard_normal(128)
    np.testing.assert_allclose(analytic_signal(x).real, x, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.integers(2, 300), elements=finite))
def test_envelope_dominates_signal(x):
    assert np.all(upper_envelope(x) >= np.abs(x))


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.integers(2, 200), elements=finite), st.floats(0.01, 100.0))
def test_envelope_is_homogeneous(x, c):
    np.testing.assert_allclose(upper_envelope(c * x), c * upper_envelope(x), rtol=1e-9, atol=1e-9)


def test_envelope_rejects_non_finite():
    with pytest.raises(NonFiniteError):
        upper_envelope(np.array([0.0, np.nan, 1.0]))
    with pytest.raises(TooShortError):
        upper_envelope(np.array([1.0]))


def test_windowing_config():
    assert WindowingConfig().stride == 750
    with pytest.raises(ConfigError):
        WindowingConfig(1000, 1.0)
    with pytest.raises(ConfigError):
        WindowingConfig(0)


def test_segment_count_default():
    assert len(segment(np.arange(10000.0))) == 13
    assert window_count(10000, WindowingConfig()) == 13


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 60), st.floats(0.0, 0.95), st.integers(0, 400))
def test_segment_count_formula_and_ranges(w, o, extra):
    assume(round(w * (1 - o)) >= 1)
    cfg = WindowingConfig(w, o)
    x = np.arange(float(w + extra))
    wins = segment(x, cfg)
    assert len(wins) == (len(x) - w) // cfg.stride + 1
    for k, win in enumerate(wins):
        np.testing.assert_array_equal(win, x[k * cfg.stride:k * cfg.stride + w])


def test_segment_length_equal_to_window():
    x = np.arange(1000.0)
    wins = segment(x)
    assert len(wins) == 1
    np.testing.assert_array_equal(wins[0], x)


def test_segment_too_short():
    with pytest.raises(TooShortError):
        segment(np.zeros(999))


def test_segments_reconstruct_prefix(rng):
    cfg = WindowingConfig(100, 0.0)
    x = rng.standard_normal(1050)
    np.testing.assert_array_equal(np.concatenate(segment(x, cfg)), x[:1000])


def test_preprocess_recording_frames(rng):
    rec = Recording("r1", ActionLabel("Rest", 1), rng.standard_normal((8, 10000)))
    frames = preprocess_recording(rec)
    assert len(frames) == 13
    assert all(f.data.shape == (8, 1000) for f in frames)
    assert [f.window_index for f in frames] == list(range(13))
    assert all(f.recording_id == "r1" and f.action.name == "Rest" for f in frames)
    assert all(np.all(f.data >= 0) for f in frames)
    # envelope runs over the whole recording before windowing
    env = upper_envelope(rec.channels)
    np.testing.assert_array_equal(frames[5].data, env[:, 3750:4750])
    again = recording_frames(rec)
    np.testing.assert_array_equal(np.stack([f.data for f in frames]), again)


def test_preprocess_length_equal_to_window(rng):
    rec = Recording("r", ActionLabel("A", 0), rng.standard_normal((8, 1000)))
    assert len(preprocess_recording(rec)) == 1


def test_segment_array_multichannel(rng):
    x = rng.standard_normal((3, 2500))
    out = segment_array(x, WindowingConfig())
    assert out.shape == (3, 3, 1000)
    np.testing.assert_array_equal(out[2, 1], x[1, 1500:2500])
