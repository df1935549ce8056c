import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tailsitter import (
    ConfigurationError,
    ShapingConstants,
    TransitionMode,
    alpha_hover_cruise,
    desired_state,
    reference_profile,
    theta_from_epsilon,
    ud_hover_cruise,
)
from tailsitter.guidance import reference_kinematics

HC, CH = TransitionMode.HoverToCruise, TransitionMode.CruiseToHover
times = st.floats(0, 1e4, allow_nan=False)


def test_velocity_ramp_examples():
    sc = ShapingConstants()
    assert ud_hover_cruise(0.0) == 0
    seam = 5 * sc.L_u
    assert ud_hover_cruise(seam) == sc.L_u
    assert ud_hover_cruise(math.nextafter(seam, math.inf)) == pytest.approx(sc.L_u, abs=1e-12)
    assert ud_hover_cruise(1e4) == pytest.approx(sc.M_u, abs=1e-3)


def test_alpha_ramp_examples():
    sc = ShapingConstants()
    assert alpha_hover_cruise(0.0) == 0
    assert alpha_hover_cruise(sc.L_alpha) == sc.L_alpha
    assert alpha_hover_cruise(math.nextafter(sc.L_alpha, math.inf)) == pytest.approx(sc.L_alpha, abs=1e-12)
    assert alpha_hover_cruise(1e5) == pytest.approx(sc.M_alpha, abs=1e-3)


@given(times, st.floats(0, 10))
def test_ramps_bounded_and_monotone(t, dt):
    sc = ShapingConstants()
    for ramp, top in ((ud_hover_cruise, sc.M_u), (alpha_hover_cruise, sc.M_alpha)):
        assert 0 <= ramp(t) <= top
        assert ramp(t + dt) >= ramp(t)


@given(times)
def test_complementarity(t):
    u_hc = reference_kinematics(t, HC)[0]
    u_ch = reference_kinematics(t, CH)[0]
    assert u_hc + u_ch == pytest.approx(1.0, abs=1e-15)


@given(times, st.sampled_from([HC, CH]))
def test_wd_identity_exact(t, mode):
    u, w, alpha, _, _ = reference_kinematics(t, mode)
    assert w == u * math.tan(math.radians(alpha))


@given(st.floats(0, 30), st.sampled_from([HC, CH]))
def test_reference_derivatives_match_differences(t, mode):
    h = 1e-6
    lo, hi = reference_kinematics(max(t - h, 0.0), mode), reference_kinematics(t + h, mode)
    span = t + h - max(t - h, 0.0)
    _, _, _, du, dw = reference_kinematics(t, mode)
    assert du == pytest.approx((hi[0] - lo[0]) / span, abs=1e-5)
    assert dw == pytest.approx((hi[1] - lo[1]) / span, abs=1e-5)


def test_desired_state_examples():
    d = desired_state(0.0, HC)
    assert (d.u_d, d.w_d, d.alpha_d) == (0.0, 0.0, 0.0)
    assert d.theta_d == pytest.approx(math.pi / 2, abs=1e-3)
    d = desired_state(0.0, CH)
    assert d.u_d == 1.0
    assert math.degrees(d.alpha_d) == pytest.approx(6.0)
    d = desired_state(1e4, HC)
    assert d.w_d == pytest.approx(math.tan(math.radians(6.0)), abs=1e-3)


def test_theta_from_epsilon_examples():
    assert theta_from_epsilon(0.0).value == pytest.approx(math.pi / 2)
    assert theta_from_epsilon(1.0).value == 0.0
    th = theta_from_epsilon(1.2)
    assert th.value == 0.0 and th.saturated
    assert not theta_from_epsilon(-0.3).saturated


@pytest.mark.parametrize("mode", [HC, CH])
def test_profile_columns(mode):
    prof = reference_profile(mode, 30.0, 0.01)
    assert len(prof) == 3001
    assert np.all((prof.theta_d >= 0) & (prof.theta_d <= math.pi))
    assert np.all(np.abs(prof.eps) <= 1)
    for u, w, a in zip(prof.u_d, prof.w_d, prof.alpha_d_deg):
        assert w == u * math.tan(math.radians(a))
    assert np.allclose(np.cos(prof.theta_d), prof.eps, atol=1e-12)
    interior = np.gradient(prof.theta_d, 0.01)
    assert np.array_equal(prof.q_d, interior)


def test_profile_csv(tmp_path):
    prof = reference_profile(CH, 0.05, 0.01)
    path = tmp_path / "refs.csv"
    prof.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,u_d,w_d,alpha_d_deg,theta_d,q_d"
    assert len(lines) == 7
    assert float(lines[1].split(",")[1]) == 1.0


@pytest.mark.parametrize("mode", [HC, CH])
def test_desired_state_matches_profile(mode):
    prof = reference_profile(mode, 3.0, 0.01)
    for i in (0, 1, 57, 200):
        d = desired_state(i * 0.01, mode, dt=0.01)
        assert d.theta_d == prof.theta_d[i]
        assert d.q_d == pytest.approx(prof.q_d[i], rel=1e-9, abs=1e-12)


def test_q_d_interpolation():
    prof = reference_profile(HC, 1.0, 0.1)
    assert prof.q_d_at(0.3) == pytest.approx(prof.q_d[3])
    assert prof.q_d_at(0.35) == pytest.approx(0.5 * (prof.q_d[3] + prof.q_d[4]))
    assert prof.q_d_at(5.0) == prof.q_d[-1]


def test_shaping_validation():
    with pytest.raises(ConfigurationError):
        ShapingConstants(M_u=1.0, L_u=1.0)
    with pytest.raises(ConfigurationError):
        ShapingConstants(M_alpha=6.0, L_alpha=-1.0)
    with pytest.raises(ConfigurationError):
        TransitionMode.parse("sideways")
    assert TransitionMode.parse("HC") is HC
    assert TransitionMode.parse("cruisetohover") is CH
