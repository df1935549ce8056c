"""Longitudinal and pitch dynamics of a tail-sitter in the body x-z plane.

State convention: ``u`` is the body-x velocity, ``w`` the body-z velocity,
``theta`` the pitch angle (``pi/2`` is hover, nose up) and ``q`` the pitch
rate. All quantities are SI, angles in radians.

Aerodynamics use a full-envelope flat-plate model so the coefficients stay
meaningful over the +-90 deg angle-of-attack sweep of a transition::

    C_L(alpha) = 2 sin(alpha) cos(alpha)
    C_D(alpha) = 2 sin(alpha)**2 + cd0
    L = K C_L V**2,   D = K C_D V**2,   V**2 = u**2 + w**2
"""

from dataclasses import dataclass, field
import math

from .errors import ConfigurationError


@dataclass(frozen=True)
class AeroParams:
    """Flat-plate aerodynamic constants.

    Parameters
    ----------
    K : float
        Force scaling (N s^2 / m^2), lumps density, wing area and 1/2.
    cd0 : float
        Parasitic drag coefficient.
    """

    K: float = 0.05
    cd0: float = 0.02

    def __post_init__(self):
        if not self.K > 0:
            raise ConfigurationError(f"K must be positive, got {self.K}")
        if not self.cd0 >= 0:
            raise ConfigurationError(f"cd0 must be non-negative, got {self.cd0}")


@dataclass(frozen=True)
class VehicleParams:
    """Rigid-body constants. Defaults are a 1 kg, 1 kg m^2 airframe."""

    m: float = 1.0
    J: float = 1.0
    g: float = 9.81
    aero: AeroParams = field(default_factory=AeroParams)

    def __post_init__(self):
        for name in ("m", "J", "g"):
            value = getattr(self, name)
            if not value > 0:
                raise ConfigurationError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class LongState:
    u: float
    w: float


@dataclass(frozen=True)
class AttState:
    theta: float
    q: float


@dataclass(frozen=True)
class ControlInput:
    T: float
    tau: float


def _uw(s):
    # accept LongState or any (u, w) pair
    if isinstance(s, LongState):
        return s.u, s.w
    u, w = s
    return u, w


def angle_of_attack(s):
    """Angle between body x and the airspeed vector, ``atan2(w, u)``.

    Returns 0 at zero airspeed, where the forces vanish anyway.
    """
    u, w = _uw(s)
    if u == 0.0 and w == 0.0:
        return 0.0
    return math.atan2(w, u)


def aero_forces(s, p=AeroParams()):
    """Lift and drag magnitudes (N) for the flat-plate model."""
    u, w = _uw(s)
    v2 = u * u + w * w
    if v2 == 0.0:
        return 0.0, 0.0
    alpha = math.atan2(w, u)
    sa, ca = math.sin(alpha), math.cos(alpha)
    lift = p.K * 2.0 * sa * ca * v2
    drag = p.K * (2.0 * sa * sa + p.cd0) * v2
    return lift, drag


def _aero_terms(u, w, p):
    # returns (-D cos a + L sin a, -D sin a - L cos a) without trig calls:
    # cos a = u/V, sin a = w/V, so every term is a polynomial in u, w
    v2 = u * u + w * w
    if v2 == 0.0:
        return 0.0, 0.0
    v = math.sqrt(v2)
    sa, ca = w / v, u / v
    lift = p.K * 2.0 * sa * ca * v2
    drag = p.K * (2.0 * sa * sa + p.cd0) * v2
    return -drag * ca + lift * sa, -drag * sa - lift * ca


def h1(s, q, vp=VehicleParams()):
    """Non-thrust, non-gravity part of du/dt: ``(-D cos a + L sin a)/m - q w``."""
    u, w = _uw(s)
    fx, _ = _aero_terms(u, w, vp.aero)
    return fx / vp.m - q * w


def h2(s, q, vp=VehicleParams()):
    """Non-gravity part of dw/dt: ``(-D sin a - L cos a)/m + q u``."""
    u, w = _uw(s)
    _, fz = _aero_terms(u, w, vp.aero)
    return fz / vp.m + q * u


def h_terms(s, q, vp=VehicleParams()):
    """``(h1, h2)`` with one evaluation of the aerodynamics."""
    u, w = _uw(s)
    fx, fz = _aero_terms(u, w, vp.aero)
    return fx / vp.m - q * w, fz / vp.m + q * u


def longitudinal_rates(s, att, T, vp=VehicleParams()):
    """Body-axis accelerations ``(du/dt, dw/dt)`` under thrust ``T``."""
    u, w = _uw(s)
    theta, q = (att.theta, att.q) if isinstance(att, AttState) else att
    fx, fz = _aero_terms(u, w, vp.aero)
    # same operation order as h1/h2 so the decomposition holds bit-for-bit
    du = (fx / vp.m - q * w) - vp.g * math.sin(theta) + T / vp.m
    dw = (fz / vp.m + q * u) + vp.g * math.cos(theta)
    return du, dw


def attitude_rates(a, tau, vp=VehicleParams()):
    theta, q = (a.theta, a.q) if isinstance(a, AttState) else a
    return q, tau / vp.J
