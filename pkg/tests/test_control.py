import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tailsitter import (
    ConfigurationError,
    DesiredState,
    InnerGains,
    OuterGains,
    VehicleParams,
    attitude_error_matrix,
    attitude_inner_loop,
    velocity_outer_loop,
)

VP = VehicleParams()
REST = DesiredState(0.0, 0.0, 0.0, math.pi / 2, 0.0)


def test_hover_equilibrium():
    cmd = velocity_outer_loop((0.0, 0.0), REST, (0.0, 0.0), (0.0, 0.0), OuterGains(), VP)
    assert cmd.T == pytest.approx(9.81)
    assert cmd.eps == 0
    assert not (cmd.eps_saturated or cmd.T_saturated)


def test_level_cruise_reference():
    d = DesiredState(1.0, 0.0, 0.0, 0.0, 0.0)
    cmd = velocity_outer_loop((1.0, 0.0), d, (0.0, 0.0), (0.0, -VP.g), OuterGains(), VP)
    assert cmd.eps == 1.0
    assert math.acos(cmd.eps) == 0.0


def test_forward_error_reduces_thrust():
    # u above its reference must decelerate: T = m (-k1 e_u) + m g = 9.61
    cmd = velocity_outer_loop((0.1, 0.0), REST, (0.0, 0.0), (0.0, 0.0), OuterGains(k1=2), VP)
    assert cmd.T == pytest.approx(9.61)


def test_measured_pitch_gravity_compensation():
    cmd = velocity_outer_loop((0.0, 0.0), REST, (0.0, 0.0), (0.0, 0.0), OuterGains(), VP, theta=0.3)
    assert cmd.T == pytest.approx(VP.m * VP.g * math.sin(0.3))


def test_saturation_flags():
    d = DesiredState(0.0, 0.0, 0.0, 0.0, 0.0)
    cmd = velocity_outer_loop((0.0, -10.0), d, (0.0, 0.0), (0.0, 0.0), OuterGains(), VP)
    assert cmd.eps == 1.0 and cmd.eps_saturated and cmd.eps_raw > 1
    cmd = velocity_outer_loop((50.0, 0.0), REST, (0.0, 0.0), (0.0, 0.0), OuterGains(), VP)
    assert cmd.T == 0.0 and cmd.T_saturated
    cmd = velocity_outer_loop((0.0, 0.0), REST, (0.0, 0.0), (0.0, 0.0), OuterGains(), VP, T_max=5.0)
    assert cmd.T == 5.0 and cmd.T_saturated


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-5, 5), st.floats(-5, 5))
def test_unsaturated_outputs_equal_raw(u, w, h1_hat, h2_hat):
    d = DesiredState(0.5, 0.05, 0.1, 1.0, 0.0)
    cmd = velocity_outer_loop((u, w), d, (0.1, 0.01), (h1_hat, h2_hat), OuterGains(), VP)
    if abs(cmd.eps_raw) <= 1 and cmd.T_raw >= 0:
        assert not cmd.eps_saturated and not cmd.T_saturated
        assert cmd.eps == cmd.eps_raw and cmd.T == cmd.T_raw


def test_gravity_term_is_weight_at_zero_eps():
    for m in (0.5, 1.0, 3.0):
        vp = VehicleParams(m=m)
        cmd = velocity_outer_loop((0.0, 0.0), REST, (0.0, 0.0), (0.0, 0.0), OuterGains(), vp)
        assert cmd.T == m * vp.g


def test_inner_loop_examples():
    assert attitude_inner_loop((1.0, 0.2), DesiredState(0, 0, 0, 1.0, 0.2), InnerGains()) == 0
    d = DesiredState(0, 0, 0, 0.0, 0.0)
    assert attitude_inner_loop((0.1, 0.0), d, InnerGains(k3=4, k4=1)) == pytest.approx(-0.4)
    assert attitude_inner_loop((0.0, -0.5), d, InnerGains(k3=1, k4=2)) == pytest.approx(1.0)


def test_error_matrix_examples():
    res = attitude_error_matrix(InnerGains(4, 4))
    assert res.eigenvalues == (-2.0, -2.0) and res.hurwitz
    res = attitude_error_matrix((1, 1))
    expected = {complex(-0.5, math.sqrt(3) / 2), complex(-0.5, -math.sqrt(3) / 2)}
    assert all(min(abs(z - e) for e in expected) < 1e-12 for z in res.eigenvalues)
    assert res.hurwitz
    assert not attitude_error_matrix((-1, 1)).hurwitz
    assert np.array_equal(res.A, [[0, 1], [-1, -1]])


@given(st.floats(1e-6, 100), st.floats(1e-6, 100))
def test_eigenvalues_match_numpy(k3, k4):
    res = attitude_error_matrix((k3, k4))
    ref = np.sort_complex(np.linalg.eigvals(res.A))
    got = np.sort_complex(np.array(res.eigenvalues, dtype=complex))
    assert np.allclose(got, ref, rtol=1e-6, atol=1e-9)


@given(st.floats(-100, 0), st.floats(-100, 100))
def test_nonpositive_gain_not_hurwitz(bad, other):
    assert not attitude_error_matrix((bad, other)).hurwitz
    assert not attitude_error_matrix((other, bad)).hurwitz


def test_gain_validation():
    with pytest.raises(ConfigurationError):
        OuterGains(k1=0)
    with pytest.raises(ConfigurationError):
        InnerGains(k4=-1)
