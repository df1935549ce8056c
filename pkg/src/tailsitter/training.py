"""Excitation data, offline training and online adaptation of the estimators.

Data come from the isolated channel plants, started at rest:

* channel ``"u"``: ``du/dt = h1(u, 0, 0) - g sqrt(1 - eps0**2) + T/m`` with
  the virtual control held at ``eps0`` (0, hover attitude);
* channel ``"w"``: ``dw/dt = h2(0, w, 0) + g eps``.

Both are driven by random piecewise-constant inputs and sampled at ``dt``.
"""

from dataclasses import dataclass, field
import math
from pathlib import Path

import numpy as np

from . import _kernels
from .dynamics import VehicleParams, h1, h2
from .errors import ConfigurationError, DivergenceError
from .integrate import rk4_step
from .rnn import WX_FLOOR, init_network, lyapunov_value, EstimationError, project_positive

DEFAULT_BOUNDS = {"u": (0.0, 15.0), "w": (-1.0, 1.0)}
# the thrust channel is a near-integrator that drifts to its drag-limited
# speed; a smaller step generalises better to runs that drift further
DEFAULT_LR = {"u": 2e-3, "w": 1e-2}


def _channel(channel):
    text = str(channel).strip().lower()
    if text not in ("u", "w"):
        raise ConfigurationError(f"channel must be 'u' or 'w', got {channel!r}")
    return text


@dataclass(frozen=True)
class ExcitationConfig:
    """Random hold-and-sample excitation for one channel.

    ``input_bounds`` defaults to [0, 15] N of thrust for channel ``"u"`` and
    the full virtual-control range [-1, 1] for ``"w"``.
    """

    channel: str = "u"
    seed: int = 0
    n_samples: int = 5000
    dt: float = 0.01
    input_bounds: tuple = None
    hold_time_bounds: tuple = (0.2, 1.0)
    eps_hold: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "channel", _channel(self.channel))
        if self.input_bounds is None:
            object.__setattr__(self, "input_bounds", DEFAULT_BOUNDS[self.channel])
        lo, hi = self.input_bounds
        hmin, hmax = self.hold_time_bounds
        if not self.n_samples > 0:
            raise ConfigurationError(f"n_samples must be positive, got {self.n_samples}")
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if not lo < hi:
            raise ConfigurationError(f"input bounds must satisfy min < max, got {self.input_bounds}")
        if not 0 < hmin <= hmax:
            raise ConfigurationError(f"bad hold time bounds {self.hold_time_bounds}")
        if self.channel == "w" and (lo < -1 or hi > 1):
            raise ConfigurationError(f"virtual-control bounds must lie in [-1, 1], got {self.input_bounds}")
        if abs(self.eps_hold) > 1:
            raise ConfigurationError(f"eps_hold must lie in [-1, 1], got {self.eps_hold}")


def generate_excitation(cfg):
    """Piecewise-constant random signal sampled at ``t_i = i dt``.

    Each level is uniform in ``input_bounds`` and lasts a duration uniform in
    ``hold_time_bounds``. Returns ``(t, values)``.
    """
    rng = np.random.default_rng(cfg.seed)
    t = np.arange(cfg.n_samples) * cfg.dt
    values = np.empty(cfg.n_samples)
    lo, hi = cfg.input_bounds
    i = 0
    seg_end = 0.0
    while i < cfg.n_samples:
        level = rng.uniform(lo, hi)
        seg_end += rng.uniform(*cfg.hold_time_bounds)
        while i < cfg.n_samples and t[i] < seg_end:
            values[i] = level
            i += 1
    return t, values


@dataclass
class Dataset:
    """``(t, input, output)`` samples of one channel; output is a velocity."""

    t: np.ndarray
    input: np.ndarray
    output: np.ndarray
    channel: str = "u"

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.input = np.asarray(self.input, dtype=float)
        self.output = np.asarray(self.output, dtype=float)
        self.channel = _channel(self.channel)
        if not (self.t.shape == self.input.shape == self.output.shape):
            raise ConfigurationError("dataset columns must have equal length")
        if self.t.size > 1 and np.any(np.diff(self.t) <= 0):
            raise ConfigurationError("dataset times must be strictly increasing")

    def __len__(self):
        return self.t.size

    @property
    def dt(self):
        return float(self.t[1] - self.t[0]) if len(self) > 1 else 0.0

    def to_csv(self, path):
        lines = [f"# channel={self.channel}", "t,input,output"]
        for row in zip(self.t, self.input, self.output):
            lines.append(",".join(format(float(v), ".17g") for v in row))
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path, channel=None):
        text = Path(path).read_text().splitlines()
        meta_channel = None
        if text and text[0].startswith("#"):
            meta = dict(item.split("=", 1) for item in text[0][1:].split() if "=" in item)
            meta_channel = meta.get("channel")
            text = text[1:]
        if not text or text[0].strip() != "t,input,output":
            raise ConfigurationError(f"{path}: expected header 't,input,output'")
        data = np.array([[float(v) for v in line.split(",")] for line in text[1:] if line.strip()])
        data = data.reshape(-1, 3)
        return cls(data[:, 0], data[:, 1], data[:, 2], channel or meta_channel or "u")


def collect_dataset(cfg, vp=VehicleParams()):
    """Drive the channel plant from rest with the excitation; RK4 at ``cfg.dt``.

    Sample ``i`` pairs the input applied on ``[t_i, t_i + dt)`` with the
    velocity at ``t_i``.
    """
    t, values = generate_excitation(cfg)
    if cfg.channel == "u":
        gravity = vp.g * math.sqrt(1.0 - cfg.eps_hold ** 2)

        def rate(_, v, a):
            return h1((v, 0.0), 0.0, vp) - gravity + a / vp.m
    else:

        def rate(_, v, a):
            return h2((0.0, v), 0.0, vp) + vp.g * a

    out = np.empty(cfg.n_samples)
    v = 0.0
    for i in range(cfg.n_samples):
        out[i] = v
        a = values[i]
        try:
            v = rk4_step(lambda s, y: rate(s, y, a), v, t[i], cfg.dt)
        except DivergenceError as exc:
            raise DivergenceError(f"data collection diverged at t={exc.time}", time=exc.time) from None
    return Dataset(t, values, out, cfg.channel)


def mse(real, predicted):
    """Mean squared difference of two equal-length sequences."""
    real = np.asarray(real, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if real.shape != predicted.shape:
        raise ValueError(f"length mismatch: {real.shape} vs {predicted.shape}")
    if real.size == 0:
        raise ValueError("mse of empty sequences")
    return float(np.mean((real - predicted) ** 2))


def network_for(data, vp=VehicleParams(), n=8, seed=0, eps_hold=0.0):
    """Fresh network with input/output normalisation fitted to ``data``.

    Thrust is centred on the trim value ``m g sqrt(1 - eps_hold**2)`` so that
    ``tanh`` of the input vanishes where the channel plant is in equilibrium
    at low speed; the virtual control is left uncentred. Inputs are scaled by
    their largest excursion from the centre, the readout by twice the largest
    observed velocity.
    """
    channel = data.channel
    if channel == "u":
        offset = vp.m * vp.g * math.sqrt(1.0 - eps_hold ** 2)
    else:
        offset = 0.0
    spread = float(np.max(np.abs(data.input - offset)))
    out_scale = 2.0 * float(np.max(np.abs(data.output)))
    return init_network(
        n=n,
        k=1,
        seed=seed,
        input_offset=[offset],
        input_scale=[spread if spread > 0 else 1.0],
        output_scale=out_scale if out_scale > 0 else 1.0,
        channel=channel,
        eps_train=eps_hold if channel == "u" else 0.0,
    )


def _encoded(net, data):
    return ((data.input[:, None] - net.input_offset) / net.input_scale).astype(float)


def _x0(net, velocity):
    x0 = np.zeros(net.n)
    x0[net.readout_index] = velocity / net.output_scale
    return x0


def predict(net, data):
    """Readout trajectory (m/s) of ``net`` driven open-loop by ``data.input``.

    The readout starts at the first measured velocity, hidden neurons at 0.
    """
    X = _kernels.simulate(net.c, net.Wx, net.Wp, _encoded(net, data), _x0(net, data.output[0]), data.dt)
    return net.output_scale * X[: len(data), net.readout_index]


@dataclass
class TrainingReport:
    epoch_mse: list = field(default_factory=list)
    final_mse: float = math.nan
    epochs: int = 0
    learning_rate: float = 0.0

    def to_csv(self, path):
        lines = ["epoch,mse"] + [f"{e},{m!r}" for e, m in self.epoch_mse]
        Path(path).write_text("\n".join(lines) + "\n")


def train_offline(data, net, epochs=400, lr=None, clip=1.0):
    """Fit ``Wx`` and ``Wp`` to the dataset by gradient descent through time.

    The loss is the MSE between the measured velocity and the readout of the
    network simulated over the whole record. Each epoch takes one full-batch
    step: the exact gradient is clipped to norm ``clip`` and applied with
    Adam moment estimates (``beta1 = 0.9``, ``beta2 = 0.999``). ``Wx`` is
    clamped to ``>= WX_FLOOR`` after every step. ``C`` is not trained.
    ``lr=None`` picks the channel default from ``DEFAULT_LR``.

    Returns the lowest-loss network seen (a copy) and the report.
    """
    if data.channel != net.channel and net.channel:
        raise ConfigurationError(f"dataset channel {data.channel!r} does not match network {net.channel!r}")
    if len(data) < 2:
        raise ConfigurationError("need at least two samples to train")
    if lr is None:
        lr = DEFAULT_LR[data.channel]
    if not lr > 0:
        raise ConfigurationError(f"learning rate must be positive, got {lr}")
    report = TrainingReport(epochs=int(epochs), learning_rate=float(lr))
    best = net.copy()
    if epochs <= 0:
        return best, report

    P = _encoded(net, data)
    y = data.output
    x0 = _x0(net, y[0])
    dt = data.dt
    Wx, Wp = net.Wx.copy(), net.Wp.copy()
    mom = [np.zeros_like(Wx), np.zeros_like(Wp)]
    vel = [np.zeros_like(Wx), np.zeros_like(Wp)]
    b1, b2, tiny = 0.9, 0.999, 1e-8
    best_loss = math.inf

    def consider(loss, epoch):
        nonlocal best_loss
        if not math.isfinite(loss):
            raise DivergenceError(f"training loss became non-finite at epoch {epoch}", epoch=epoch)
        if loss < best_loss:
            best_loss = loss
            best.Wx, best.Wp = Wx.copy(), Wp.copy()

    for epoch in range(1, int(epochs) + 1):
        loss, gWx, gWp, _ = _kernels.loss_and_grad(net.c, Wx, Wp, P, y, x0, dt, net.output_scale, net.readout_index)
        consider(loss, epoch)
        report.epoch_mse.append((epoch, float(loss)))
        norm = math.sqrt(float(np.sum(gWx ** 2) + np.sum(gWp ** 2)))
        if norm > clip:
            gWx *= clip / norm
            gWp *= clip / norm
        for j, (param, grad) in enumerate(((Wx, gWx), (Wp, gWp))):
            mom[j] = b1 * mom[j] + (1 - b1) * grad
            vel[j] = b2 * vel[j] + (1 - b2) * grad * grad
            param -= lr * (mom[j] / (1 - b1 ** epoch)) / (np.sqrt(vel[j] / (1 - b2 ** epoch)) + tiny)
        project_positive(Wx)
    # the weights after the last step have not been scored yet
    X = _kernels.simulate(net.c, Wx, Wp, P, x0, dt)
    consider(mse(y, net.output_scale * X[: len(y), net.readout_index]), epochs)
    report.final_mse = float(best_loss)
    best.x = net.x.copy()
    return best, report


@dataclass(frozen=True)
class LyapunovSample:
    t: float
    V: float


def adapt_online(net, inputs, dt, measured=None, teacher=None, floor=WX_FLOOR):
    """Adapt ``Wx`` and ``Wp`` along a trajectory with the Lyapunov update law.

    The network state and weights are integrated together with RK4; the
    input (and measurement) are held over each step and ``Wx`` is clamped to
    ``>= floor`` afterwards.

    Two measurement modes:

    * ``teacher`` given: a fixed reference network with the same shape and
      input normalisation is simulated alongside and its full state is the
      measurement. The error is per neuron,
      ``dWx/dt = outer(x_tilde, tanh(x_hat))``, and a Lyapunov sample
      ``V = 0.5 |x_tilde|^2 + 0.5 |Wx - Wx_hat|^2 + 0.5 |Wp - Wp_hat|^2`` is
      recorded at every step (including ``t = 0``).
    * ``measured`` given: a velocity record, one value per input. Only the
      readout neuron has an error signal, so only its weight rows adapt.
      No Lyapunov samples are produced.

    Parameters
    ----------
    net : RnnNetwork
        Student; its current state is the starting point. Not modified.
    inputs : array_like
        Physical control values, one per step.
    dt : float
    measured : array_like, optional
    teacher : RnnNetwork, optional

    Returns
    -------
    (RnnNetwork, list of LyapunovSample)
    """
    if not dt > 0:
        raise ConfigurationError(f"dt must be positive, got {dt}")
    if (teacher is None) == (measured is None):
        raise ConfigurationError("give exactly one of measured or teacher")
    inputs = np.asarray(inputs, dtype=float).reshape(len(inputs), -1)
    student = net.copy()
    n, k = student.n, student.k
    r = student.readout_index
    c = student.c
    nn, nk = n * n, n * k
    samples = []

    if teacher is not None:
        if teacher.Wx.shape != student.Wx.shape or teacher.Wp.shape != student.Wp.shape:
            raise ConfigurationError("teacher and student shapes differ")
        tc, tWx, tWp = teacher.c, teacher.Wx, teacher.Wp
        z = np.concatenate((teacher.x, student.x, student.Wx.ravel(), student.Wp.ravel()))

        def error(zz):
            return EstimationError(zz[:n] - zz[n:2 * n], tWx - zz[2 * n:2 * n + nn].reshape(n, n),
                                   tWp - zz[2 * n + nn:].reshape(n, k))

        def field_(_, zz, fp):
            xt, xh = zz[:n], zz[n:2 * n]
            Wx_h = zz[2 * n:2 * n + nn].reshape(n, n)
            Wp_h = zz[2 * n + nn:].reshape(n, k)
            fxh = np.tanh(xh)
            dxt = -tc * xt + tWx @ np.tanh(xt) + tWp @ fp
            dxh = -c * xh + Wx_h @ fxh + Wp_h @ fp
            xt_err = xt - xh
            return np.concatenate((dxt, dxh, np.outer(xt_err, fxh).ravel(), np.outer(xt_err, fp).ravel()))

        def clamp(zz):
            np.maximum(zz[2 * n:2 * n + nn], floor, out=zz[2 * n:2 * n + nn])

        samples.append(LyapunovSample(0.0, lyapunov_value(error(z))))
    else:
        measured = np.asarray(measured, dtype=float)
        if measured.shape[0] != inputs.shape[0]:
            raise ConfigurationError("measured and inputs must have the same length")
        z = np.concatenate((student.x, student.Wx[r], student.Wp[r]))
        Wx_rows = student.Wx.copy()
        Wp_rows = student.Wp.copy()
        scale = student.output_scale

        def field_(_, zz, fp, target):
            xh = zz[:n]
            Wx_rows[r] = zz[n:2 * n]
            Wp_rows[r] = zz[2 * n:]
            fxh = np.tanh(xh)
            dxh = -c * xh + Wx_rows @ fxh + Wp_rows @ fp
            xt_err = target / scale - xh[r]
            return np.concatenate((dxh, xt_err * fxh, xt_err * fp))

        def clamp(zz):
            np.maximum(zz[n:2 * n], floor, out=zz[n:2 * n])

    for i in range(inputs.shape[0]):
        fp = np.tanh(student.encode_input(inputs[i]))
        t = i * dt
        try:
            if teacher is not None:
                z = rk4_step(lambda s, zz: field_(s, zz, fp), z, t, dt)
            else:
                target = measured[i]
                z = rk4_step(lambda s, zz: field_(s, zz, fp, target), z, t, dt)
        except DivergenceError as exc:
            raise DivergenceError(f"adaptation diverged at t={exc.time}", time=exc.time) from None
        clamp(z)
        if teacher is not None:
            samples.append(LyapunovSample((i + 1) * dt, lyapunov_value(error(z))))

    if teacher is not None:
        student.x = z[n:2 * n].copy()
        student.Wx = z[2 * n:2 * n + nn].reshape(n, n).copy()
        student.Wp = z[2 * n + nn:].reshape(n, k).copy()
    else:
        student.x = z[:n].copy()
        student.Wx[r] = z[n:2 * n]
        student.Wp[r] = z[2 * n:]
    return student, samples
