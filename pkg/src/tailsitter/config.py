"""Flat ``key = value`` configuration files.

One file format serves every subcommand; keys that a subcommand does not
use are ignored by it, unknown keys are rejected. Lines starting with
``#`` are comments. Pairs such as bounds are written ``lo, hi``.
Relative weight paths are resolved against the file's directory.
"""

import configparser
import math
from pathlib import Path

from .control import InnerGains, OuterGains
from .dynamics import AeroParams, VehicleParams
from .errors import ConfigurationError
from .guidance import ShapingConstants, TransitionMode
from .sim import DEFAULT_T_END, PAPER_INITIAL, ScenarioConfig
from .training import ExcitationConfig

_SECTION = "config"


def _float(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"{text!r} is not finite")
    return value


def _pair(text):
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 2:
        raise ValueError(f"expected two numbers, got {text!r}")
    return _float(parts[0]), _float(parts[1])


def _optional_float(text):
    return None if text.strip().lower() in ("", "none") else _float(text)


# name -> (parser, default, description)
KEYS = {
    "mass": (_float, 1.0, "vehicle mass m (kg)"),
    "inertia": (_float, 1.0, "pitch inertia J (kg m^2)"),
    "gravity": (_float, 9.81, "gravitational acceleration g (m/s^2)"),
    "k_aero": (_float, 0.05, "lumped aerodynamic constant K in L, D = K C V^2"),
    "cd0": (_float, 0.02, "zero-lift drag coefficient"),
    "k1": (_float, 2.0, "forward-velocity gain"),
    "k2": (_float, 2.0, "normal-velocity gain"),
    "k3": (_float, 16.0, "pitch-angle gain"),
    "k4": (_float, 8.0, "pitch-rate gain"),
    "M_u": (_float, 1.0, "forward-speed ceiling (m/s)"),
    "L_u": (_float, 0.5, "end of the linear forward-speed ramp (m/s)"),
    "M_alpha": (_float, 6.0, "angle-of-attack ceiling (deg)"),
    "L_alpha": (_float, 3.0, "end of the linear angle-of-attack ramp (deg)"),
    "mode": (TransitionMode.parse, TransitionMode.HoverToCruise, "transition: hc or ch"),
    "u0": (_optional_float, None, "initial forward speed (m/s); default per mode"),
    "w0": (_optional_float, None, "initial normal speed (m/s); default per mode"),
    "theta0": (_optional_float, None, "initial pitch (rad); default per mode"),
    "q0": (_float, 0.0, "initial pitch rate (rad/s)"),
    "t_end": (_optional_float, None, "simulation horizon (s); 20 for hc, 30 for ch"),
    "dt": (_float, 1e-3, "closed-loop and reference step (s)"),
    "T_max": (_optional_float, None, "thrust upper limit (N); none = unlimited"),
    "rnn_weights_u": (str, "", "u-channel weight file for simulate"),
    "rnn_weights_w": (str, "", "w-channel weight file for simulate"),
    "seed": (int, 0, "RNG seed for excitation and initial weights (TTL_SEED overrides)"),
    "n_samples": (int, 5000, "excitation samples per channel"),
    "sample_dt": (_float, 0.01, "excitation sample period (s)"),
    "u_bounds": (_pair, (0.0, 15.0), "thrust excitation range (N)"),
    "w_bounds": (_pair, (-1.0, 1.0), "virtual-control excitation range"),
    "hold_time": (_pair, (0.2, 1.0), "range of each excitation level's duration (s)"),
    "eps_hold": (_float, 0.0, "virtual control held during u-channel data collection"),
    "n_neurons": (int, 8, "neurons per network"),
    "epochs": (int, 400, "training epochs"),
    "lr": (_optional_float, None, "learning rate; default 2e-3 (u), 1e-2 (w)"),
    "clip": (_float, 1.0, "gradient-norm clip"),
}


class Settings(dict):
    """Typed configuration values with defaults filled in.

    ``base_dir`` is the directory relative paths are resolved against.
    """

    base_dir = Path(".")

    def path(self, key):
        text = self[key]
        if not text:
            return None
        p = Path(text)
        return p if p.is_absolute() else self.base_dir / p


def parse_config(text, base_dir="."):
    """Parse configuration text into :class:`Settings`."""
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",),
                                       inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string(f"[{_SECTION}]\n" + text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed configuration: {exc}") from None
    if parser.sections() != [_SECTION]:
        raise ConfigurationError("section headers are not allowed")
    out = Settings({name: default for name, (_, default, _) in KEYS.items()})
    out.base_dir = Path(base_dir)
    for key, raw in parser.items(_SECTION):
        if key not in KEYS:
            raise ConfigurationError(f"unknown configuration key {key!r}")
        try:
            out[key] = KEYS[key][0](raw.strip())
        except (ValueError, ConfigurationError) as exc:
            raise ConfigurationError(f"bad value for {key!r}: {exc}") from None
    return out


def load_config(path=None):
    """Read a configuration file; ``None`` gives the defaults."""
    if path is None:
        return parse_config("")
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read configuration {path}: {exc.strerror}") from None
    return parse_config(text, path.parent)


def vehicle_params(s):
    return VehicleParams(m=s["mass"], J=s["inertia"], g=s["gravity"],
                         aero=AeroParams(K=s["k_aero"], cd0=s["cd0"]))


def shaping_constants(s):
    return ShapingConstants(M_u=s["M_u"], L_u=s["L_u"], M_alpha=s["M_alpha"], L_alpha=s["L_alpha"])


def scenario_config(s, oracle=False):
    """:class:`ScenarioConfig` from settings; ``oracle`` overrides the weights."""
    mode = s["mode"]
    defaults = PAPER_INITIAL[mode]
    initial = tuple(
        defaults[i] if s[key] is None else s[key] for i, key in enumerate(("u0", "w0", "theta0"))
    ) + (s["q0"],)
    if oracle:
        weights = "oracle"
    else:
        paths = (s.path("rnn_weights_u"), s.path("rnn_weights_w"))
        if None in paths:
            raise ConfigurationError("rnn_weights_u and rnn_weights_w are required unless --oracle is given")
        weights = tuple(str(p) for p in paths)
    return ScenarioConfig(
        mode=mode,
        initial=initial,
        t_end=DEFAULT_T_END[mode] if s["t_end"] is None else s["t_end"],
        dt=s["dt"],
        vehicle=vehicle_params(s),
        outer=OuterGains(s["k1"], s["k2"]),
        inner=InnerGains(s["k3"], s["k4"]),
        shaping=shaping_constants(s),
        rnn_weights=weights,
        seed=s["seed"],
        T_max=s["T_max"],
    )


def excitation_config(s, channel, seed=None):
    channel = str(channel).lower()
    return ExcitationConfig(
        channel=channel,
        seed=s["seed"] if seed is None else seed,
        n_samples=s["n_samples"],
        dt=s["sample_dt"],
        input_bounds=s["u_bounds"] if channel == "u" else s["w_bounds"],
        hold_time_bounds=s["hold_time"],
        eps_hold=s["eps_hold"],
    )
