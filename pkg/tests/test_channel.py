import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from creephar.channel import (BodyGeometry, ChannelError, ChannelParams, around_body_profile,
                              complex_gain, decay_factor, path_gain, receiver_arc)

THIGH = BodyGeometry(48.0)
DEFAULT = ChannelParams()


def test_decay_octave_and_circumference_ratios():
    p, p8 = ChannelParams(frequency=2450), ChannelParams(frequency=8 * 2450)
    assert decay_factor(p8, THIGH) / decay_factor(p, THIGH) == pytest.approx(2.0, abs=1e-12)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        big = BodyGeometry(8 * 48.0)
    assert decay_factor(p, big) / decay_factor(p, THIGH) == pytest.approx(0.25, abs=1e-12)


def test_decay_unit_scale_value():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    oracle = float(mpmath.mpf(2450) ** (mpmath.mpf(1) / 3) / mpmath.mpf(48) ** (mpmath.mpf(2) / 3))
    got = decay_factor(ChannelParams(decay_scale=1.0), THIGH)
    assert got == pytest.approx(oracle, rel=1e-14)
    assert got == pytest.approx(1.0205, abs=5e-4)


@given(c=st.floats(0.1, 10.0), f=st.floats(100.0, 10000.0))
def test_decay_homogeneity(c, f):
    lhs = decay_factor(ChannelParams(frequency=c ** 3 * f), THIGH)
    rhs = c * decay_factor(ChannelParams(frequency=f), THIGH)
    assert lhs == pytest.approx(rhs, rel=1e-12)


@given(d=st.floats(0.01, 47.99))
def test_antipodal_symmetry(d):
    m1, p1 = path_gain(d, THIGH, DEFAULT)
    m2, p2 = path_gain(48.0 - d, THIGH, DEFAULT)
    assert abs(m1 - m2) < 1e-9
    assert abs(np.angle(np.exp(1j * (p1 - p2)))) < 1e-9


def test_single_wave_is_affine():
    params = ChannelParams(launch_gain=-3.0)
    d = np.linspace(1.0, 40.0, 17)
    mag, _ = path_gain(d, THIGH, params, two_path=False)
    alpha = decay_factor(params, THIGH)
    assert np.max(np.abs(mag - (-3.0 - alpha * d))) < 1e-10


@pytest.mark.parametrize("scale", [1.47, 5.0, 50.0])
def test_antipode_doubles_amplitude(scale):
    params = ChannelParams(decay_scale=scale)
    two, _ = path_gain(24.0, THIGH, params)
    one, _ = path_gain(24.0, THIGH, params, two_path=False)
    assert two - one == pytest.approx(20 * math.log10(2), abs=1e-9)


def test_profile_counts_symmetry_and_shape():
    prof = around_body_profile(THIGH, DEFAULT, 1.0)
    assert len(prof) == 47
    mags = np.array([s.magnitude for s in prof])
    assert np.allclose(mags, mags[::-1], atol=1e-9)
    d = np.array([s.arc_distance for s in prof])
    seg = mags[(d >= 2) & (d <= 19)]
    assert np.all(np.diff(seg) < 0)
    assert np.argmax(mags) == 0
    # constructive interference: a local maximum inside [20, 26] cm
    inner = [i for i in range(1, 46) if 20 <= d[i] <= 26 and mags[i] > mags[i - 1] and mags[i] >= mags[i + 1]]
    assert inner
    assert prof[2].angle == pytest.approx(360 * 3 / 48)


def test_default_slope_near_one_and_a_half_db_per_cm():
    assert decay_factor(DEFAULT, THIGH) == pytest.approx(1.5, abs=0.01)


def test_domain_errors():
    with pytest.raises(ChannelError):
        complex_gain(0.0, THIGH, DEFAULT)
    with pytest.raises(ChannelError):
        complex_gain(48.0, THIGH, DEFAULT)
    with pytest.raises(ChannelError):
        BodyGeometry(-1.0)
    with pytest.raises(ChannelError):
        ChannelParams(frequency=0)
    with pytest.raises(ChannelError):
        around_body_profile(THIGH, DEFAULT, 60.0)


def test_implausible_circumference_warns():
    with pytest.warns(UserWarning, match="plausible"):
        BodyGeometry(120.0)


def test_receiver_arc():
    assert receiver_arc(THIGH, 90.0) == 12.0
