"""Command-line entry point: ``python -m tailsitter <subcommand> ...``.

Exit codes: 0 success, 1 usage or input error, 2 numerical divergence.
"""

import argparse
import os
import sys

from .config import excitation_config, load_config, scenario_config, shaping_constants, vehicle_params
from .control import attitude_error_matrix
from .errors import ConfigurationError, DivergenceError, DomainError
from .guidance import TransitionMode, reference_profile
from .rnn import save_weights
from .sim import DEFAULT_T_END, run_transition
from .training import Dataset, collect_dataset, network_for, train_offline


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; 2 is reserved for divergence here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _settings(path):
    s = load_config(path)
    env_seed = os.environ.get("TTL_SEED")
    if env_seed:
        try:
            s["seed"] = int(env_seed)
        except ValueError:
            raise ConfigurationError(f"TTL_SEED must be an integer, got {env_seed!r}") from None
    return s


def _gen_data(args):
    s = _settings(args.config)
    data = collect_dataset(excitation_config(s, args.channel), vehicle_params(s))
    data.to_csv(args.out)


def _train(args):
    s = _settings(args.config)
    data = Dataset.from_csv(args.data, channel=args.channel)
    net = network_for(data, vehicle_params(s), n=s["n_neurons"], seed=s["seed"], eps_hold=s["eps_hold"])
    net, report = train_offline(data, net, epochs=s["epochs"], lr=s["lr"], clip=s["clip"])
    save_weights(net, args.out_weights)
    report.to_csv(args.report)


def _simulate(args):
    s = load_config(args.scenario)
    log = run_transition(scenario_config(s, oracle=args.oracle))
    log.to_csv(args.out)


def _fmt(z):
    z = complex(z)
    if z.imag == 0:
        return format(z.real, ".12g")
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _check_gains(args):
    s = load_config(args.config)
    result = attitude_error_matrix((s["k3"], s["k4"]))
    print("eigenvalues: " + " ".join(_fmt(z) for z in result.eigenvalues))
    print(f"hurwitz: {'true' if result.hurwitz else 'false'}")


def _export_refs(args):
    s = load_config(args.config)
    mode = TransitionMode.parse(args.mode)
    t_end = DEFAULT_T_END[mode] if s["t_end"] is None else s["t_end"]
    profile = reference_profile(mode, t_end, s["dt"], shaping_constants(s), vehicle_params(s))
    profile.to_csv(args.out)


def build_parser():
    parser = _Parser(prog="tailsitter", description="Tail-sitter transition simulation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-data", help="collect an excitation dataset for one channel")
    p.add_argument("--channel", required=True, choices=("u", "w"))
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.set_defaults(run=_gen_data)

    p = sub.add_parser("train", help="train one estimator network offline")
    p.add_argument("--channel", required=True, choices=("u", "w"))
    p.add_argument("--data", required=True)
    p.add_argument("--config")
    p.add_argument("--out-weights", required=True)
    p.add_argument("--report", required=True)
    p.set_defaults(run=_train)

    p = sub.add_parser("simulate", help="run one closed-loop transition")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--oracle", action="store_true", help="use the true h1, h2 instead of networks")
    p.set_defaults(run=_simulate)

    p = sub.add_parser("check-gains", help="print the pitch error-matrix eigenvalues")
    p.add_argument("--config")
    p.set_defaults(run=_check_gains)

    p = sub.add_parser("export-refs", help="write the reference table of one transition")
    p.add_argument("--mode", required=True, choices=("hc", "ch"))
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.set_defaults(run=_export_refs)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.run(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except DivergenceError as exc:
        print(f"error: numerical divergence: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0
