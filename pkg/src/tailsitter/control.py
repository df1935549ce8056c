"""Feedback-linearising velocity loop and PD pitch loop.

With ``h1``, ``h2`` known the commands

    T   = m (v_u - h1) + m g sin(theta)
    eps = (v_w - h2) / g

turn the body-axis velocity dynamics into ``du/dt = v_u`` and
``dw/dt = v_w`` once the pitch follows ``theta_d = arccos(eps)``. The
proportional laws ``v_u = -k1 e_u + du_d/dt`` and ``v_w = -k2 e_w + dw_d/dt``
then give exponentially decaying velocity errors.
"""

from dataclasses import dataclass
import math
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class OuterGains:
    k1: float = 2.0
    k2: float = 2.0

    def __post_init__(self):
        if not (self.k1 > 0 and self.k2 > 0):
            raise ConfigurationError(f"k1, k2 must be positive, got {self.k1}, {self.k2}")


@dataclass(frozen=True)
class InnerGains:
    k3: float = 16.0
    k4: float = 8.0

    def __post_init__(self):
        if not (self.k3 > 0 and self.k4 > 0):
            raise ConfigurationError(f"k3, k4 must be positive, got {self.k3}, {self.k4}")


@dataclass(frozen=True)
class OuterCommand:
    """Thrust and virtual control after actuator/range clamps.

    ``eps_raw`` and ``T_raw`` keep the values before clamping.
    """

    T: float
    eps: float
    eps_raw: float
    T_raw: float
    eps_saturated: bool
    T_saturated: bool


def velocity_outer_loop(s, d, d_dot, h_hat, gains, vp, theta=None, T_max=None):
    """Thrust and virtual control from the velocity errors.

    Parameters
    ----------
    s : LongState or (u, w)
    d : DesiredState
    d_dot : (du_d/dt, dw_d/dt)
    h_hat : (h1_hat, h2_hat)
    gains : OuterGains
    vp : VehicleParams
    theta : float, optional
        Measured pitch. When given, gravity compensation in the thrust uses
        ``sin(theta)`` so ``du/dt = v_u`` holds whatever the pitch-loop lag;
        otherwise it uses ``sqrt(1 - eps**2)`` of the commanded virtual control.
    T_max : float, optional
        Upper thrust limit; thrust is always clamped at zero from below.
    """
    u, w = (s.u, s.w) if hasattr(s, "u") else s
    e_u = u - d.u_d
    e_w = w - d.w_d
    v_u = -gains.k1 * e_u + d_dot[0]
    v_w = -gains.k2 * e_w + d_dot[1]
    eps_raw = (v_w - h_hat[1]) / vp.g
    eps = min(1.0, max(-1.0, eps_raw))
    if theta is None:
        gravity = math.sqrt(1.0 - eps * eps)
    else:
        gravity = math.sin(theta)
    T_raw = vp.m * (v_u - h_hat[0]) + vp.m * vp.g * gravity
    T = max(0.0, T_raw)
    if T_max is not None:
        T = min(T, T_max)
    return OuterCommand(T, eps, eps_raw, T_raw, eps != eps_raw, T != T_raw)


def attitude_inner_loop(a, d, gains):
    """PD pitch moment ``-k3 (theta - theta_d) - k4 (q - q_d)``."""
    theta, q = (a.theta, a.q) if hasattr(a, "theta") else a
    return -gains.k3 * (theta - d.theta_d) - gains.k4 * (q - d.q_d)


class ErrorMatrix(NamedTuple):
    A: np.ndarray
    eigenvalues: tuple
    hurwitz: bool


def attitude_error_matrix(gains):
    """Closed-loop pitch error matrix ``[[0, 1], [-k3, -k4]]``.

    Eigenvalues come from the characteristic polynomial
    ``l**2 + k4 l + k3``. Accepts ``InnerGains`` or a ``(k3, k4)`` pair, so
    non-positive gains can be checked too.
    """
    k3, k4 = (gains.k3, gains.k4) if hasattr(gains, "k3") else gains
    k3, k4 = float(k3), float(k4)
    A = np.array([[0.0, 1.0], [-k3, -k4]])
    disc = k4 * k4 - 4.0 * k3
    if disc >= 0:
        # cancellation-free real roots: the product of the roots is k3
        big = -0.5 * (k4 + math.copysign(math.sqrt(disc), k4))
        eig = (big, k3 / big) if big != 0 else (0.0, 0.0)
    else:
        im = 0.5 * math.sqrt(-disc)
        eig = (complex(-0.5 * k4, im), complex(-0.5 * k4, -im))
    hurwitz = all(complex(z).real < 0 for z in eig)
    return ErrorMatrix(A, eig, hurwitz)
