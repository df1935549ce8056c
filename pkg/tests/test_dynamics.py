import math

import pytest
from hypothesis import given, strategies as st

from tailsitter import (
    AeroParams,
    AttState,
    ConfigurationError,
    LongState,
    VehicleParams,
    aero_forces,
    angle_of_attack,
    attitude_rates,
    h1,
    h2,
    longitudinal_rates,
)

speeds = st.floats(-50, 50, allow_nan=False)
angles = st.floats(-4, 4, allow_nan=False)


def test_angle_of_attack_examples():
    assert angle_of_attack(LongState(1, 0)) == 0
    assert angle_of_attack(LongState(1, 1)) == pytest.approx(math.pi / 4)
    assert angle_of_attack(LongState(0.01, 0.001)) == pytest.approx(0.0996687, abs=1e-6)
    assert angle_of_attack((0.0, 0.0)) == 0


def test_aero_forces_examples():
    assert aero_forces(LongState(0, 0)) == (0.0, 0.0)
    L, D = aero_forces(LongState(10, 0))
    assert L == 0
    assert D == pytest.approx(0.1, rel=1e-12)
    L, D = aero_forces(LongState(1, 1), AeroParams(K=0.05, cd0=0.02))
    assert L == pytest.approx(0.1, rel=1e-12)
    assert D == pytest.approx(0.102, rel=1e-12)


def test_h1_examples():
    assert h1(LongState(0, 0), 0) == 0
    assert h1(LongState(0, 0), 5) == 0
    assert h1(LongState(1, 1), 0.5) == pytest.approx(-0.501414, abs=1e-6)


def test_h2_examples():
    assert h2(LongState(0, 0), 0) == 0
    assert h2(LongState(1, 0), 2) == pytest.approx(2.0, rel=1e-12)
    assert h2(LongState(1, 1), 0) == pytest.approx(-0.142836, abs=1e-6)


def test_longitudinal_rates_examples():
    du, dw = longitudinal_rates(LongState(0, 0), AttState(math.pi / 2, 0), 9.81)
    assert du == pytest.approx(0, abs=1e-12)
    assert dw == pytest.approx(0, abs=1e-12)
    du, dw = longitudinal_rates(LongState(0, 0), AttState(math.pi / 2, 0), 0.0)
    assert du == pytest.approx(-9.81)
    assert dw == pytest.approx(0, abs=1e-12)
    assert longitudinal_rates(LongState(0, 0), AttState(0, 0), 0.0) == (0.0, 9.81)


def test_attitude_rates_examples():
    assert attitude_rates(AttState(0, 0), 0) == (0, 0)
    assert attitude_rates(AttState(0, 0.1), 0) == (0.1, 0)
    assert attitude_rates(AttState(1, 0), 0.5, VehicleParams(J=1)) == (0, 0.5)


@given(speeds, speeds, angles, st.floats(-5, 5), st.floats(0, 30))
def test_decomposition_identity(u, w, theta, q, T):
    vp = VehicleParams()
    du, dw = longitudinal_rates((u, w), (theta, q), T, vp)
    assert du == h1((u, w), q, vp) - vp.g * math.sin(theta) + T / vp.m
    assert dw == h2((u, w), q, vp) + vp.g * math.cos(theta)


@given(speeds, speeds)
def test_lift_zero_and_drag_nonnegative_at_zero_aoa(u, w):
    L, D = aero_forces((abs(u), 0.0))
    assert L == 0
    assert D >= 0
    assert aero_forces((u, w))[1] >= 0


def test_forces_exactly_zero_at_rest():
    assert aero_forces((0.0, 0.0), AeroParams(K=3.0, cd0=1.0)) == (0.0, 0.0)


@pytest.mark.parametrize("direction", [0.0, 0.7, 2.0, -1.3, math.pi])
def test_h_continuous_at_origin(direction):
    # |h| scales like V^2 along every ray into the origin
    for r in (1e-2, 1e-4, 1e-6):
        s = (r * math.cos(direction), r * math.sin(direction))
        assert abs(h1(s, 0)) <= 0.2 * r * r
        assert abs(h2(s, 0)) <= 0.2 * r * r


def test_parameter_validation():
    with pytest.raises(ConfigurationError):
        VehicleParams(m=0)
    with pytest.raises(ConfigurationError):
        VehicleParams(J=-1)
    with pytest.raises(ConfigurationError):
        AeroParams(K=-0.1)
