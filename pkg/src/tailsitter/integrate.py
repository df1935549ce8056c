"""Fixed-step classical Runge-Kutta integration."""

import math

import numpy as np

from .errors import ConfigurationError, DivergenceError


def _finite(y):
    if isinstance(y, float):
        return math.isfinite(y)
    return bool(np.isfinite(y).all())


def rk4_step(f, state, t, dt):
    """One classical RK4 step of ``dy/dt = f(t, y)``.

    ``state`` may be a float or an ndarray; ``f`` must return the same kind.
    Raises ``DivergenceError`` if the result is non-finite (a non-finite
    stage always propagates into it).
    """
    if not dt > 0:
        raise ConfigurationError(f"dt must be positive, got {dt}")
    half = 0.5 * dt
    k1 = f(t, state)
    k2 = f(t + half, state + half * k1)
    k3 = f(t + half, state + half * k2)
    k4 = f(t + dt, state + dt * k3)
    out = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not _finite(out):
        raise DivergenceError(f"non-finite state at t={t + dt:.6g}", time=t + dt)
    return out
