"""Continuous-time recurrent network used as a nonlinear estimator.

The network state obeys::

    dx/dt = -C x + Wx tanh(x) + Wp tanh(p)

with ``C`` diagonal and positive. One neuron (``readout_index``) carries the
prediction of a body velocity. Physical signals are mapped to network units
by a fixed affine input normalisation and an output scale, so that the same
equations handle thrust in newtons and the bounded virtual control alike.
"""

from dataclasses import dataclass, field, replace
import math
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DivergenceError, DomainError

#: floor applied to recurrent weights after every adaptation step
WX_FLOOR = 1e-4


@dataclass
class RnnNetwork:
    """Network parameters and state.

    Attributes
    ----------
    x : ndarray, shape (n,)
        Neuron activations.
    c : ndarray, shape (n,)
        Diagonal of the leak matrix ``C``.
    Wx : ndarray, shape (n, n)
        Recurrent weights.
    Wp : ndarray, shape (n, k)
        External input weights.
    readout_index : int
        Neuron whose state, times ``output_scale``, predicts the velocity.
    input_offset, input_scale : ndarray, shape (k,)
        ``p = (control - input_offset) / input_scale``.
    output_scale : float
        Velocity per unit of readout activation (m/s).
    channel : str
        ``"u"``, ``"w"`` or ``""`` for a network not tied to a plant channel.
    eps_train : float
        Virtual control held during channel-u data collection; the gravity
        projection the network has absorbed.
    """

    x: np.ndarray
    c: np.ndarray
    Wx: np.ndarray
    Wp: np.ndarray
    readout_index: int = 0
    input_offset: np.ndarray = None
    input_scale: np.ndarray = None
    output_scale: float = 1.0
    channel: str = ""
    eps_train: float = 0.0

    def __post_init__(self):
        self.x = np.array(self.x, dtype=float).reshape(-1)
        n = self.x.size
        self.c = np.array(self.c, dtype=float).reshape(-1)
        self.Wx = np.array(self.Wx, dtype=float)
        if self.Wx.ndim < 2:
            self.Wx = self.Wx.reshape(n, -1)
        self.Wp = np.array(self.Wp, dtype=float)
        if self.Wp.ndim == 1:
            self.Wp = self.Wp.reshape(n, -1)
        k = self.Wp.shape[1] if self.Wp.ndim == 2 else 0
        if self.input_offset is None:
            self.input_offset = np.zeros(k)
        if self.input_scale is None:
            self.input_scale = np.ones(k)
        self.input_offset = np.array(self.input_offset, dtype=float).reshape(-1)
        self.input_scale = np.array(self.input_scale, dtype=float).reshape(-1)
        self.output_scale = float(self.output_scale)
        self.readout_index = int(self.readout_index)
        self.eps_train = float(self.eps_train)
        self._validate()

    def _validate(self):
        n = self.x.size
        if self.c.shape != (n,):
            raise ConfigurationError(f"C diagonal has shape {self.c.shape}, expected ({n},)")
        if self.Wx.shape != (n, n):
            raise ConfigurationError(f"Wx has shape {self.Wx.shape}, expected ({n}, {n})")
        if self.Wp.ndim != 2 or self.Wp.shape[0] != n:
            raise ConfigurationError(f"Wp has shape {self.Wp.shape}, expected ({n}, k)")
        k = self.Wp.shape[1]
        if self.input_offset.shape != (k,) or self.input_scale.shape != (k,):
            raise ConfigurationError("input normalisation must have one entry per input")
        if np.any(self.c <= 0):
            raise ConfigurationError("every leak constant c_i must be positive")
        if np.any(self.input_scale == 0):
            raise ConfigurationError("input_scale entries must be non-zero")
        if not 0 <= self.readout_index < n:
            raise ConfigurationError(f"readout_index {self.readout_index} outside 0..{n - 1}")
        if self.output_scale == 0:
            raise ConfigurationError("output_scale must be non-zero")

    @property
    def n(self):
        return self.x.size

    @property
    def k(self):
        return self.Wp.shape[1]

    def copy(self):
        return replace(
            self,
            x=self.x.copy(),
            c=self.c.copy(),
            Wx=self.Wx.copy(),
            Wp=self.Wp.copy(),
            input_offset=self.input_offset.copy(),
            input_scale=self.input_scale.copy(),
        )

    def encode_input(self, control):
        """Physical control value(s) to network input ``p``."""
        control = np.atleast_1d(np.asarray(control, dtype=float))
        return (control - self.input_offset) / self.input_scale

    @property
    def velocity(self):
        """Readout in physical units (m/s)."""
        return self.output_scale * self.x[self.readout_index]

    def reset_state(self, velocity=0.0):
        """Zero the hidden neurons and place the readout at ``velocity``."""
        self.x = np.zeros(self.n)
        self.x[self.readout_index] = velocity / self.output_scale
        return self


def init_network(n=8, k=1, seed=0, readout_index=0, **kwargs):
    """Seeded initial network.

    ``C`` is the identity, ``Wx`` uniform in [0.01, 0.1] and ``Wp`` uniform
    in [-0.1, 0.1]. Extra keyword arguments are passed to ``RnnNetwork``.
    """
    rng = np.random.default_rng(seed)
    Wx = rng.uniform(0.01, 0.1, size=(n, n))
    Wp = rng.uniform(-0.1, 0.1, size=(n, k))
    return RnnNetwork(
        x=np.zeros(n), c=np.ones(n), Wx=Wx, Wp=Wp, readout_index=readout_index, **kwargs
    )


def _check_input(net, p):
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if p.shape != (net.k,):
        raise ConfigurationError(f"input has shape {p.shape}, network expects ({net.k},)")
    return p


def rnn_rate(net, p, x=None):
    """``-C x + Wx tanh(x) + Wp tanh(p)`` at the network state (or ``x``)."""
    p = _check_input(net, p)
    x = net.x if x is None else np.asarray(x, dtype=float)
    if x.shape != (net.n,):
        raise ConfigurationError(f"state has shape {x.shape}, network expects ({net.n},)")
    return -net.c * x + net.Wx @ np.tanh(x) + net.Wp @ np.tanh(p)


def _rk4_states(net, x, drive, dt):
    # one RK4 step of the leaky network with the input term held constant
    c, Wx = net.c, net.Wx
    k1 = -c * x + Wx @ np.tanh(x) + drive
    k2 = -c * (x + 0.5 * dt * k1) + Wx @ np.tanh(x + 0.5 * dt * k1) + drive
    k3 = -c * (x + 0.5 * dt * k2) + Wx @ np.tanh(x + 0.5 * dt * k2) + drive
    x4 = x + dt * k3
    k4 = -c * x4 + Wx @ np.tanh(x4) + drive
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rnn_step(net, p, dt):
    """Advance the state by one RK4 step with ``p`` held; returns a new network."""
    if not dt > 0:
        raise ConfigurationError(f"dt must be positive, got {dt}")
    p = _check_input(net, p)
    with np.errstate(over="ignore", invalid="ignore"):
        x_new = _rk4_states(net, net.x, net.Wp @ np.tanh(p), dt)
    if not np.all(np.isfinite(x_new)):
        raise DivergenceError("network state became non-finite")
    out = net.copy()
    out.x = x_new
    return out


def nonlinear_estimate(net, control, channel, vp, eps=None):
    """Recover ``h1`` or ``h2`` from the network's predicted acceleration.

    The readout models the channel velocity, so its time derivative is the
    network's estimate of ``du/dt`` (or ``dw/dt``). Removing the known input
    terms leaves the nonlinear part::

        channel "u":  h1_hat = dy/dt + g sqrt(1 - eps**2) - T/m
        channel "w":  h2_hat = dy/dt - g eps

    Parameters
    ----------
    net : RnnNetwork
    control : float
        Thrust ``T`` for channel ``"u"``, virtual control for ``"w"``. This
        must be the input the network is currently being driven with.
    channel : {"u", "w"}
    vp : VehicleParams
    eps : float, optional
        Gravity projection for channel ``"u"``; defaults to the value held
        while the network's training data was collected.
    """
    channel = str(channel).lower()
    rate = rnn_rate(net, net.encode_input(control))
    ydot = net.output_scale * rate[net.readout_index]
    if channel == "u":
        e = net.eps_train if eps is None else eps
        if abs(e) > 1:
            raise DomainError(f"virtual control {e} outside [-1, 1]")
        return ydot + vp.g * math.sqrt(1.0 - e * e) - control / vp.m
    if channel == "w":
        if abs(control) > 1:
            raise DomainError(f"virtual control {control} outside [-1, 1]")
        return ydot - vp.g * control
    raise ConfigurationError(f"unknown channel {channel!r}")


@dataclass
class EstimationError:
    """Output and weight errors of a student network against a teacher.

    ``x_tilde`` is a scalar (one neuron) or a vector (all neurons); the
    weight errors are the matching rows or full matrices.
    """

    x_tilde: np.ndarray
    wx_tilde: np.ndarray = field(default_factory=lambda: np.zeros(0))
    wp_tilde: np.ndarray = field(default_factory=lambda: np.zeros(0))


def weight_update_rates(err, x_hat, p):
    """Adaptation law ``dWx/dt = x_tilde tanh(x_hat)``, ``dWp/dt = x_tilde tanh(p)``.

    With a vector ``x_tilde`` each neuron's row is updated by its own error,
    i.e. the returned rates are outer products.
    """
    x_tilde = err.x_tilde if isinstance(err, EstimationError) else err
    x_tilde = np.asarray(x_tilde, dtype=float)
    fx = np.tanh(np.atleast_1d(np.asarray(x_hat, dtype=float)))
    fp = np.tanh(np.atleast_1d(np.asarray(p, dtype=float)))
    if x_tilde.ndim == 0:
        return x_tilde * fx, x_tilde * fp
    return np.outer(x_tilde, fx), np.outer(x_tilde, fp)


def lyapunov_value(err):
    """``0.5 |x_tilde|^2 + 0.5 |Wx_tilde|^2 + 0.5 |Wp_tilde|^2`` (Frobenius norms)."""
    return 0.5 * (
        float(np.sum(np.square(err.x_tilde)))
        + float(np.sum(np.square(err.wx_tilde)))
        + float(np.sum(np.square(err.wp_tilde)))
    )


def project_positive(Wx, floor=WX_FLOOR):
    """Clamp recurrent weights to ``>= floor`` in place."""
    np.maximum(Wx, floor, out=Wx)
    return Wx


# -- weight snapshot files ---------------------------------------------------

_META_KEYS = ("n", "k", "readout_index", "channel", "output_scale", "eps_train")


def save_weights(net, path):
    """Write ``C``, ``Wx``, ``Wp`` and the input normalisation to CSV.

    The first line is a ``#``-prefixed metadata record, followed by the
    ``layer,row,col,value`` header and one row per entry in a fixed order.
    """
    meta = {
        "n": net.n,
        "k": net.k,
        "readout_index": net.readout_index,
        "channel": net.channel,
        "output_scale": repr(float(net.output_scale)),
        "eps_train": repr(float(net.eps_train)),
    }
    lines = ["# " + " ".join(f"{key}={meta[key]}" for key in _META_KEYS)]
    lines.append("layer,row,col,value")
    for i in range(net.n):
        lines.append(f"C,{i},{i},{float(net.c[i])!r}")
    for i in range(net.n):
        for j in range(net.n):
            lines.append(f"Wx,{i},{j},{float(net.Wx[i, j])!r}")
    for i in range(net.n):
        for j in range(net.k):
            lines.append(f"Wp,{i},{j},{float(net.Wp[i, j])!r}")
    for j in range(net.k):
        lines.append(f"input_offset,0,{j},{float(net.input_offset[j])!r}")
    for j in range(net.k):
        lines.append(f"input_scale,0,{j},{float(net.input_scale[j])!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_weights(path):
    """Inverse of :func:`save_weights`; the network state starts at zero."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"weight file not found: {path}")
    text = path.read_text().splitlines()
    if not text or not text[0].startswith("#"):
        raise ConfigurationError(f"{path}: missing metadata line")
    meta = dict(item.split("=", 1) for item in text[0][1:].split())
    try:
        n, k = int(meta["n"]), int(meta["k"])
    except KeyError as exc:
        raise ConfigurationError(f"{path}: metadata lacks {exc}") from None
    if text[1].strip() != "layer,row,col,value":
        raise ConfigurationError(f"{path}: bad header {text[1]!r}")
    arrays = {
        "C": np.zeros((n, n)),
        "Wx": np.zeros((n, n)),
        "Wp": np.zeros((n, k)),
        "input_offset": np.zeros((1, k)),
        "input_scale": np.ones((1, k)),
    }
    for line in text[2:]:
        if not line.strip():
            continue
        layer, row, col, value = line.split(",")
        if layer not in arrays:
            raise ConfigurationError(f"{path}: unknown layer {layer!r}")
        arrays[layer][int(row), int(col)] = float(value)
    return RnnNetwork(
        x=np.zeros(n),
        c=np.diag(arrays["C"]).copy(),
        Wx=arrays["Wx"],
        Wp=arrays["Wp"],
        readout_index=int(meta.get("readout_index", 0)),
        input_offset=arrays["input_offset"][0],
        input_scale=arrays["input_scale"][0],
        output_scale=float(meta.get("output_scale", 1.0)),
        channel=meta.get("channel", ""),
        eps_train=float(meta.get("eps_train", 0.0)),
    )
