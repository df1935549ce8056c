"""Closed-loop transition simulation.

Plant, controllers and (optionally) the two estimator networks form one
ODE that is integrated with fixed-step RK4. The controllers are evaluated
at every Runge-Kutta stage. The networks are driven by the command applied
during the previous step (held over the step), which keeps the estimate
free of an algebraic loop through the thrust.
"""

from dataclasses import dataclass, field
import math
import os
from pathlib import Path

import numpy as np

from .control import InnerGains, OuterGains, attitude_inner_loop, velocity_outer_loop
from .dynamics import VehicleParams, attitude_rates, h_terms, longitudinal_rates
from .errors import ConfigurationError
from .guidance import (
    DesiredState,
    ShapingConstants,
    TransitionMode,
    reference_kinematics,
    reference_profile,
)
from .integrate import rk4_step
from .rnn import load_weights

LOG_COLUMNS = (
    "t", "u", "w", "theta", "q", "T", "tau", "eps", "u_d", "w_d", "theta_d",
    "e_u", "e_w", "e_theta", "h1_hat", "h2_hat", "eps_sat", "T_sat",
)

PAPER_INITIAL = {
    TransitionMode.HoverToCruise: (0.01, 0.001, 1.6, 0.0),
    TransitionMode.CruiseToHover: (1.1, 0.16, 0.15, 0.0),
}
DEFAULT_T_END = {TransitionMode.HoverToCruise: 20.0, TransitionMode.CruiseToHover: 30.0}


@dataclass
class ScenarioConfig:
    """Everything needed to run one transition.

    ``rnn_weights`` is ``"oracle"`` (true ``h1``/``h2`` as estimates) or a
    pair of weight-file paths ``(u_channel, w_channel)``.
    """

    mode: TransitionMode = TransitionMode.HoverToCruise
    initial: tuple = None
    t_end: float = None
    dt: float = 1e-3
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    outer: OuterGains = field(default_factory=OuterGains)
    inner: InnerGains = field(default_factory=InnerGains)
    shaping: ShapingConstants = field(default_factory=ShapingConstants)
    rnn_weights: object = "oracle"
    seed: int = 0
    T_max: float = None

    def __post_init__(self):
        self.mode = TransitionMode.parse(self.mode)
        if self.initial is None:
            self.initial = PAPER_INITIAL[self.mode]
        self.initial = tuple(float(v) for v in self.initial)
        if self.t_end is None:
            self.t_end = DEFAULT_T_END[self.mode]
        if len(self.initial) != 4 or not all(math.isfinite(v) for v in self.initial):
            raise ConfigurationError(f"initial must be four finite numbers, got {self.initial}")
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if not self.t_end > self.dt * (1 - 1e-9):
            raise ConfigurationError(f"t_end must exceed dt, got t_end={self.t_end}, dt={self.dt}")
        env_seed = os.environ.get("TTL_SEED")
        if env_seed:
            self.seed = int(env_seed)

    @property
    def oracle(self):
        return isinstance(self.rnn_weights, str) and self.rnn_weights == "oracle"


class TrajectoryLog:
    """Column store of a closed-loop run, one row per time step."""

    def __init__(self, columns):
        self.columns = {name: np.asarray(columns[name]) for name in LOG_COLUMNS}

    def __getitem__(self, name):
        return self.columns[name]

    def __len__(self):
        return self.columns["t"].size

    def to_csv(self, path):
        names = LOG_COLUMNS
        cols = [self.columns[n] for n in names]
        lines = [",".join(names)]
        for i in range(len(self)):
            parts = []
            for name, col in zip(names, cols):
                if name in ("eps_sat", "T_sat"):
                    parts.append(str(int(col[i])))
                else:
                    parts.append(repr(float(col[i])))
            lines.append(",".join(parts))
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path):
        data = np.genfromtxt(path, delimiter=",", names=True)
        missing = set(LOG_COLUMNS) - set(data.dtype.names)
        if missing:
            raise ConfigurationError(f"{path}: missing columns {sorted(missing)}")
        return cls({name: np.atleast_1d(data[name]) for name in LOG_COLUMNS})


def _networks(cfg, networks):
    if networks is not None:
        return networks
    if cfg.oracle:
        return None
    try:
        path_u, path_w = cfg.rnn_weights
    except (TypeError, ValueError):
        raise ConfigurationError(f"rnn_weights must be 'oracle' or two paths, got {cfg.rnn_weights!r}")
    return load_weights(path_u), load_weights(path_w)


def run_transition(cfg, networks=None):
    """Simulate one transition and return its :class:`TrajectoryLog`.

    Parameters
    ----------
    cfg : ScenarioConfig
    networks : (RnnNetwork, RnnNetwork), optional
        In-memory estimators for the u and w channels; overrides
        ``cfg.rnn_weights``. Their states are reset to the initial velocities.
    """
    vp, sc, mode = cfg.vehicle, cfg.shaping, cfg.mode
    outer, inner = cfg.outer, cfg.inner
    dt = cfg.dt
    n_steps = int(math.ceil(cfg.t_end / dt - 1e-9))
    ref = reference_profile(mode, (n_steps + 1) * dt, dt, sc, vp)
    nets = _networks(cfg, networks)

    u0, w0, th0, q0 = cfg.initial
    if nets is None:
        y = np.array([u0, w0, th0, q0])
    else:
        net_u, net_w = (net.copy() for net in nets)
        net_u.reset_state(u0)
        net_w.reset_state(w0)
        nu = net_u.n
        y = np.concatenate(([u0, w0, th0, q0], net_u.x, net_w.x))
        ru, rw = net_u.readout_index, net_w.readout_index
        su, sw = net_u.output_scale, net_w.output_scale
        g_train = vp.g * math.sqrt(1.0 - net_u.eps_train ** 2)

    # inputs held for the networks over the current step
    held = {"T": vp.m * vp.g * math.sin(th0), "eps": min(1.0, max(-1.0, math.cos(th0)))}
    drive = {}
    record = {"on": False, "diag": None}

    def set_drive():
        if nets is not None:
            drive["u"] = net_u.Wp @ np.tanh(net_u.encode_input(held["T"]))
            drive["w"] = net_w.Wp @ np.tanh(net_w.encode_input(held["eps"]))

    # RK4 evaluates each half step twice and each step end again at the
    # next step's start, so the reference is cached by time
    cache = {}

    def reference(t):
        hit = cache.get(t)
        if hit is None:
            if len(cache) > 4:
                cache.clear()
            hit = cache[t] = reference_kinematics(t, mode, sc) + (ref.q_d_at(t),)
        return hit

    def field_(t, y):
        u, w, theta, q = float(y[0]), float(y[1]), float(y[2]), float(y[3])
        u_d, w_d, alpha_deg, du_d, dw_d, q_d = reference(t)
        if nets is None:
            h1_hat, h2_hat = h_terms((u, w), q, vp)
        else:
            xu = y[4:4 + nu]
            xw = y[4 + nu:]
            rate_u = -net_u.c * xu + net_u.Wx @ np.tanh(xu) + drive["u"]
            rate_w = -net_w.c * xw + net_w.Wx @ np.tanh(xw) + drive["w"]
            h1_hat = su * rate_u[ru] + g_train - held["T"] / vp.m
            h2_hat = sw * rate_w[rw] - vp.g * held["eps"]
        d = DesiredState(u_d, w_d, math.radians(alpha_deg), 0.0, q_d)
        cmd = velocity_outer_loop((u, w), d, (du_d, dw_d), (h1_hat, h2_hat), outer, vp,
                                  theta=theta, T_max=cfg.T_max)
        theta_d = math.acos(cmd.eps)
        d = DesiredState(u_d, w_d, d.alpha_d, theta_d, q_d)
        tau = attitude_inner_loop((theta, q), d, inner)
        du, dw = longitudinal_rates((u, w), (theta, q), cmd.T, vp)
        dtheta, dq = attitude_rates((theta, q), tau, vp)
        if record["on"]:
            record["on"] = False
            record["diag"] = (cmd, tau, d, h1_hat, h2_hat)
        if nets is None:
            return np.array([du, dw, dtheta, dq])
        return np.concatenate(([du, dw, dtheta, dq], rate_u, rate_w))

    rows = np.empty((n_steps + 1, len(LOG_COLUMNS)))

    def log(i, t, y):
        cmd, tau, d, h1_hat, h2_hat = record["diag"]
        u, w, theta, q = y[0], y[1], y[2], y[3]
        rows[i] = (
            t, u, w, theta, q, cmd.T, tau, cmd.eps, d.u_d, d.w_d, d.theta_d,
            u - d.u_d, w - d.w_d, theta - d.theta_d, h1_hat, h2_hat,
            float(cmd.eps_saturated), float(cmd.T_saturated),
        )

    set_drive()
    for i in range(n_steps + 1):
        t = i * dt
        record["on"] = True
        if i == n_steps:
            field_(t, y)
            log(i, t, y)
            break
        y_next = rk4_step(field_, y, t, dt)
        log(i, t, y)
        cmd = record["diag"][0]
        held["T"], held["eps"] = cmd.T, cmd.eps
        set_drive()
        y = y_next
    return TrajectoryLog(dict(zip(LOG_COLUMNS, rows.T)))
