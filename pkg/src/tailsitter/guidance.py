"""Velocity, angle-of-attack and pitch references for both transitions.

Hover-to-cruise references rise linearly and then bend over an arctangent
towards their ceilings::

    u_d(t) = t/5                                  if t/5 <= L_u
             arctan(a_u (t/5 - L_u)) / a_u + L_u  otherwise,  a_u = pi / (2 (M_u - L_u))

and the same shape with argument ``t`` for the angle of attack (degrees).
Cruise-to-hover mirrors them, ``u_d = M_u - u_d^hc`` and
``alpha_d = M_alpha - alpha_d^hc``, and ``w_d = u_d tan(alpha_d)`` in both.

The pitch reference comes from the virtual control ``eps = cos(theta)``
evaluated on the reference model, i.e. along ``(u_d, w_d)`` with the true
``h2``; see :func:`reference_profile`.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from .dynamics import VehicleParams, h2
from .errors import ConfigurationError


class TransitionMode(enum.Enum):
    HoverToCruise = "hc"
    CruiseToHover = "ch"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        for mode in cls:
            if text in (mode.value, mode.name.lower()):
                return mode
        raise ConfigurationError(f"unknown transition mode {value!r}")


@dataclass(frozen=True)
class ShapingConstants:
    """Ceilings ``M`` and linear-phase limits ``L`` of the reference ramps.

    Velocity values are in m/s, angle-of-attack values in degrees.
    """

    M_u: float = 1.0
    L_u: float = 0.5
    M_alpha: float = 6.0
    L_alpha: float = 3.0

    def __post_init__(self):
        if not 0 < self.L_u < self.M_u:
            raise ConfigurationError(f"need 0 < L_u < M_u, got L_u={self.L_u}, M_u={self.M_u}")
        if not 0 < self.L_alpha < self.M_alpha:
            raise ConfigurationError(
                f"need 0 < L_alpha < M_alpha, got L_alpha={self.L_alpha}, M_alpha={self.M_alpha}"
            )

    @property
    def a_u(self):
        return math.pi / (2.0 * (self.M_u - self.L_u))

    @property
    def a_alpha(self):
        return math.pi / (2.0 * (self.M_alpha - self.L_alpha))


@dataclass(frozen=True)
class DesiredState:
    """Reference at one instant. ``alpha_d`` in radians."""

    u_d: float
    w_d: float
    alpha_d: float
    theta_d: float
    q_d: float


def _ramp(s, limit, a):
    if s <= limit:
        return s
    return math.atan(a * (s - limit)) / a + limit


def _ramp_rate(s, limit, a):
    # derivative of _ramp with respect to its argument
    if s <= limit:
        return 1.0
    z = a * (s - limit)
    return 1.0 / (1.0 + z * z)


def ud_hover_cruise(t, sc=ShapingConstants()):
    """Hover-to-cruise forward-speed reference (m/s)."""
    return _ramp(t / 5.0, sc.L_u, sc.a_u)


def alpha_hover_cruise(t, sc=ShapingConstants()):
    """Hover-to-cruise angle-of-attack reference (degrees)."""
    return _ramp(t, sc.L_alpha, sc.a_alpha)


def reference_kinematics(t, mode, sc=ShapingConstants()):
    """``(u_d, w_d, alpha_d_deg, u_d_dot, w_d_dot)`` with exact time derivatives."""
    s = t / 5.0
    u = _ramp(s, sc.L_u, sc.a_u)
    du = 0.2 * _ramp_rate(s, sc.L_u, sc.a_u)
    alpha = _ramp(t, sc.L_alpha, sc.a_alpha)
    dalpha = _ramp_rate(t, sc.L_alpha, sc.a_alpha)
    if mode is TransitionMode.CruiseToHover:
        u, du = sc.M_u - u, -du
        alpha, dalpha = sc.M_alpha - alpha, -dalpha
    a = math.radians(alpha)
    tan_a = math.tan(a)
    w = u * tan_a
    dw = du * tan_a + u * (1.0 + tan_a * tan_a) * math.radians(dalpha)
    return u, w, alpha, du, dw


@dataclass(frozen=True)
class Theta:
    """Pitch angle from a virtual control, with the clamp recorded."""

    value: float
    saturated: bool

    def __float__(self):
        return self.value


def theta_from_epsilon(eps):
    """``arccos`` of the virtual control after clamping it to [-1, 1]."""
    clamped = min(1.0, max(-1.0, eps))
    return Theta(math.acos(clamped), clamped != eps)


@dataclass
class ReferenceProfile:
    """Precomputed reference table on a uniform grid ``t = i * dt``.

    All columns are ndarrays of equal length; ``alpha_d_deg`` is in degrees.
    """

    mode: TransitionMode
    dt: float
    t: np.ndarray
    u_d: np.ndarray
    w_d: np.ndarray
    alpha_d_deg: np.ndarray
    u_d_dot: np.ndarray
    w_d_dot: np.ndarray
    eps: np.ndarray
    eps_saturated: np.ndarray
    theta_d: np.ndarray
    q_d: np.ndarray

    def __len__(self):
        return self.t.size

    def at(self, i):
        return DesiredState(
            float(self.u_d[i]),
            float(self.w_d[i]),
            math.radians(float(self.alpha_d_deg[i])),
            float(self.theta_d[i]),
            float(self.q_d[i]),
        )

    def q_d_at(self, t):
        """Pitch-rate reference, linearly interpolated."""
        x = t / self.dt
        i = int(x)
        if i >= self.t.size - 1:
            return float(self.q_d[-1])
        frac = x - i
        return float(self.q_d[i] + frac * (self.q_d[i + 1] - self.q_d[i]))

    def to_csv(self, path):
        """Write ``t,u_d,w_d,alpha_d_deg,theta_d,q_d``."""
        lines = ["t,u_d,w_d,alpha_d_deg,theta_d,q_d"]
        cols = (self.t, self.u_d, self.w_d, self.alpha_d_deg, self.theta_d, self.q_d)
        for row in zip(*cols):
            lines.append(",".join(repr(float(v)) for v in row))
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def _pitch_reference(row, vp):
    # virtual control of the reference model and its arccos
    u, w, _, _, dw = row
    raw = (dw - h2((u, w), 0.0, vp)) / vp.g
    return min(1.0, max(-1.0, raw)), theta_from_epsilon(raw)


def reference_profile(mode, t_end, dt=1e-3, sc=ShapingConstants(), vp=VehicleParams()):
    """Tabulate the references on ``[0, t_end]`` (inclusive) at step ``dt``.

    The virtual control on the reference model is
    ``eps = (dw_d/dt - h2(u_d, w_d, 0)) / g``: the value that makes the
    body-z acceleration equal the reference's when the pitch follows it.
    ``h2`` is taken at zero pitch rate; feeding the differenced pitch
    reference back through its ``q u`` term gives a recursion with gain
    ``u / (g dt)``, which is unstable at any practical step. ``q_d`` is the
    central difference of the finished ``theta_d`` column (one-sided at the
    ends).
    """
    mode = TransitionMode.parse(mode)
    if not dt > 0:
        raise ConfigurationError(f"dt must be positive, got {dt}")
    n = int(math.ceil(t_end / dt - 1e-9)) + 1
    t = np.arange(n) * dt
    cols = np.empty((n, 5))
    eps = np.empty(n)
    sat = np.zeros(n, dtype=bool)
    theta = np.empty(n)
    for i in range(n):
        row = reference_kinematics(float(t[i]), mode, sc)
        cols[i] = row
        eps[i], th = _pitch_reference(row, vp)
        sat[i] = th.saturated
        theta[i] = th.value
    q_d = np.gradient(theta, dt) if n > 1 else np.zeros(n)
    return ReferenceProfile(
        mode=mode,
        dt=dt,
        t=t,
        u_d=cols[:, 0].copy(),
        w_d=cols[:, 1].copy(),
        alpha_d_deg=cols[:, 2].copy(),
        u_d_dot=cols[:, 3].copy(),
        w_d_dot=cols[:, 4].copy(),
        eps=eps,
        eps_saturated=sat,
        theta_d=theta,
        q_d=q_d,
    )


def desired_state(t, mode, sc=ShapingConstants(), vp=VehicleParams(), dt=1e-3):
    """Reference at time ``t``.

    ``q_d`` is the same difference quotient of ``theta_d`` with step ``dt``
    that :func:`reference_profile` tabulates (one-sided at ``t < dt``).
    """
    if t < 0:
        raise ConfigurationError(f"t must be non-negative, got {t}")
    mode = TransitionMode.parse(mode)

    def theta(s):
        return _pitch_reference(reference_kinematics(s, mode, sc), vp)[1].value

    u, w, alpha, _, _ = reference_kinematics(t, mode, sc)
    th = theta(t)
    if t < dt:
        q = (theta(t + dt) - th) / dt
    else:
        q = (theta(t + dt) - theta(t - dt)) / (2 * dt)
    return DesiredState(u, w, math.radians(alpha), th, q)
