import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from semgact.errors import FeatureWarning, ZeroEnergyError
from semgact.features import TD_NAMES, TDConfig, log_moment_features, time_domain_features
from semgact.features.layout import MOMENT_PAIRS
from semgact.features.moments import moments_to_features, spectral_moments

IDX = {n: i for i, n in enumerate(TD_NAMES)}


def test_td_names_order():
    assert TD_NAMES == ("AMP", "RMS", "VAR", "WL", "MAV", "SSI", "ZC", "SSC", "WAMP", "IEMG", "LOG",
                        "MYOP", "DASDV", "EMAV", "EWL", "MMAV", "MMAV2", "MFL", "AAC", "KURT", "SKEW")


def test_td_all_zero_input():
    with pytest.warns(FeatureWarning):
        f = time_domain_features(np.zeros(100))
    np.testing.assert_array_equal(f, np.zeros(21))


def test_td_alternating_sequence():
    x = np.tile([1.0, -1.0], 500)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        f = time_domain_features(x, TDConfig(threshold=0.0))
    assert f[IDX["ZC"]] == 999
    assert f[IDX["WL"]] == 1998
    assert f[IDX["RMS"]] == pytest.approx(1.0, rel=1e-15)
    assert f[IDX["MAV"]] == 1.0


def test_td_tiled_ramp_matches_oracle():
    x = np.tile([0, 1, 2, 1, 0, -1, -2, -1], 125).astype(float)
    thr = 0.05 * x.std()
    got = time_domain_features(x)
    want = oracles.td_features(list(x), thr)
    np.testing.assert_allclose(got, want, rtol=1e-9, atol=0)


def test_td_random_segments_match_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        n = int(rng.integers(4, 400))
        x = rng.standard_normal(n) * rng.uniform(0.01, 100)
        want = oracles.td_features(list(x), 0.05 * x.std())
        np.testing.assert_allclose(time_domain_features(x), want, rtol=1e-9, atol=1e-300)


def test_td_absolute_threshold():
    x = np.array([0.0, 0.5, -0.5, 2.0, -2.0, 0.1])
    f = time_domain_features(x, TDConfig(threshold=1.0))
    np.testing.assert_allclose(f, oracles.td_features(list(x), 1.0), rtol=1e-12)


def test_td_constant_signal_guarded():
    with pytest.warns(FeatureWarning):
        f = time_domain_features(np.full(50, 3.0))
    assert f[IDX["KURT"]] == 0 and f[IDX["SKEW"]] == 0
    assert f[IDX["LOG"]] == pytest.approx(3.0)


def test_td_too_short():
    with pytest.raises(ValueError):
        time_domain_features(np.ones(3))


def test_log_moments_match_oracle(rng):
    for n in (16, 33, 100):
        x = np.abs(rng.standard_normal(n))
        np.testing.assert_allclose(log_moment_features(x), oracles.log_moments(list(x)), rtol=1e-9, atol=1e-9)


def test_log_moments_count_and_pairs(rng):
    assert len(MOMENT_PAIRS) == 10
    assert all(1 <= i < j <= 5 for i, j in MOMENT_PAIRS)
    assert log_moment_features(rng.standard_normal(1000)).shape == (17,)


def test_log_moments_single_bin_closed_form():
    g = np.array([math.sqrt(7 ** i * 2.5) for i in range(7)])
    f = moments_to_features(g)
    assert f[4] == pytest.approx(0.0, abs=1e-12)
    assert f[0] == pytest.approx(0.5 * math.log(2.5), rel=1e-12)


def test_log_moments_single_bin_from_signal():
    n = np.arange(64)
    x = np.cos(2 * np.pi * 5 * n / 64)
    g = spectral_moments(x)
    np.testing.assert_allclose(g, np.sqrt(5.0 ** np.arange(7) * 32), rtol=1e-10)
    assert log_moment_features(x)[4] == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("c", [0.5, 2.0, 10.0])
def test_log_moments_scale(c, rng):
    x = np.abs(rng.standard_normal(1000))
    f, fc = log_moment_features(x), log_moment_features(c * x)
    np.testing.assert_allclose(fc[:3] - f[:3], 0.5 * math.log(c), atol=1e-8)
    np.testing.assert_allclose(fc[3:7], f[3:7], atol=1e-8)


def test_log_moments_zero_energy():
    with pytest.raises(ZeroEnergyError):
        log_moment_features(np.zeros(100))
    with pytest.raises(ZeroEnergyError):
        log_moment_features(np.full(100, 4.0))


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.integers(8, 200), elements=st.floats(-100, 100, allow_nan=False)))
def test_log_moments_always_finite(x):
    if np.ptp(x) == 0:
        return
    assert np.all(np.isfinite(log_moment_features(x)))
