"""Command-line front end.

Subcommands: ``negativity``, ``critical``, ``sweep``, ``verify``, ``asymptotes``.

Exit codes: 0 success, 2 invalid configuration, 3 dense capacity exceeded,
4 product state (no critical value), 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__, analytic, oracle, sweep
from .channels import ChannelKind, ChannelModel
from .errors import CapacityError, UnsupportedClosedFormError
from .ghz import DENSE_CAP_ENV, Bipartition, make_ghz
from .sweep import Quantity, SweepRequest, SweepTable

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_PRODUCT = 4
EXIT_VERIFY = 5


class ConfigError(Exception):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


# ---------------------------------------------------------------- parsing helpers

def parse_int_list(text: str, field: str) -> list[int]:
    """``"4,6,8"``, ``"2:50"`` (inclusive) or ``"2:50:4"``, comma-combinable."""
    out = []
    try:
        for part in str(text).split(","):
            part = part.strip()
            if not part:
                continue
            if ":" in part:
                bits = [int(b) for b in part.split(":")]
                if len(bits) not in (2, 3):
                    raise ValueError(part)
                step = bits[2] if len(bits) == 3 else 1
                if step <= 0:
                    raise ValueError(part)
                out.extend(range(bits[0], bits[1] + 1, step))
            else:
                out.append(int(part))
    except ValueError:
        raise ConfigError(field, f"cannot parse integer list {text!r}") from None
    if not out:
        raise ConfigError(field, "empty list")
    return out


def parse_float_list(text: str, field: str) -> list[float]:
    """Comma list of floats, or ``start:stop:count`` for an inclusive linspace."""
    try:
        text = str(text).strip()
        if ":" in text:
            a, b, c = text.split(":")
            return [float(x) for x in np.linspace(float(a), float(b), int(c))]
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(field, f"cannot parse float list {text!r}") from None
    if not vals:
        raise ConfigError(field, "empty list")
    return vals


def parse_inline_alphas(text: str) -> list[complex]:
    """``"re,im;re,im;..."``."""
    out = []
    for chunk in str(text).split(";"):
        bits = [b.strip() for b in chunk.split(",")]
        if len(bits) != 2:
            raise ConfigError("--alphas", f"expected 're,im' pairs separated by ';', got {chunk!r}")
        try:
            out.append(complex(float(bits[0]), float(bits[1])))
        except ValueError:
            raise ConfigError("--alphas", f"non-numeric entry {chunk!r}") from None
    return out


def _pairs_to_complex(data, field):
    if not isinstance(data, list) or not data:
        raise ConfigError(field, "expected a nonempty JSON array of [re, im] pairs")
    out = []
    for item in data:
        if (not isinstance(item, list) or len(item) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in item)):
            raise ConfigError(field, f"bad amplitude entry {item!r}; expected [re, im]")
        out.append(complex(item[0], item[1]))
    return out


def load_alphas_file(path: str):
    """JSON array of ``[re, im]`` pairs, or an object mapping ``d`` to such arrays."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError("--alphas-file", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("--alphas-file", f"invalid JSON in {path}: {exc}") from None
    if isinstance(data, dict):
        try:
            return {int(k): _pairs_to_complex(v, "--alphas-file") for k, v in data.items()}
        except ValueError:
            raise ConfigError("--alphas-file", "object keys must be integers d") from None
    return _pairs_to_complex(data, "--alphas-file")


def resolve_alphas(args, d):
    sources = [s for s in ("equal", "alphas", "alphas_file", "magnitudes")
               if getattr(args, s, None) not in (None, False)]
    if len(sources) > 1:
        raise ConfigError("--equal/--alphas/--alphas-file/--magnitudes",
                          "give exactly one amplitude source")
    if not sources or sources[0] == "equal":
        return np.full(d, 1 / math.sqrt(d))
    src = sources[0]
    if src == "alphas":
        alphas = parse_inline_alphas(args.alphas)
    elif src == "magnitudes":
        alphas = parse_float_list(args.magnitudes, "--magnitudes")
    else:
        alphas = load_alphas_file(args.alphas_file)
        if isinstance(alphas, dict):
            if d not in alphas:
                raise ConfigError("--alphas-file", f"no amplitudes given for d={d}")
            alphas = alphas[d]
    if len(alphas) != d:
        raise ConfigError(f"--{src.replace('_', '-')}", f"expected {d} amplitudes, got {len(alphas)}")
    return alphas


def build_spec(args):
    if args.d is None or args.N is None:
        raise ConfigError("--d/--N", "both are required")
    try:
        return make_ghz(args.d, args.N, resolve_alphas(args, args.d))
    except ValueError as exc:
        raise ConfigError("--alphas", str(exc)) from None


def channel_kind(args) -> ChannelKind:
    try:
        return ChannelKind.parse(args.channel)
    except ValueError as exc:
        raise ConfigError("--channel", str(exc)) from None


def check_precision(args):
    if not 6 <= args.precision <= 17:
        raise ConfigError("--precision", f"must lie in [6, 17], got {args.precision}")


def check_epsilon(eps):
    if not 0.0 < eps < 1.0:
        raise ConfigError("--epsilon", f"must lie in (0, 1), got {eps}")


# ---------------------------------------------------------------- output

def write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ghzdecay-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(args, table: SweepTable):
    if args.format == "json":
        text = table.to_json(args.precision)
    else:
        text = table.to_csv(args.precision, timestamp=not args.deterministic)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return text


# ---------------------------------------------------------------- commands

def cmd_negativity(args) -> int:
    check_precision(args)
    spec = build_spec(args)
    kind = channel_kind(args)
    if (args.p is None) == (args.p_grid is None):
        raise ConfigError("--p/--p-grid", "give exactly one of --p or --p-grid")
    ps = [args.p] if args.p is not None else parse_float_list(args.p_grid, "--p-grid")
    if any(not 0.0 <= p <= 1.0 for p in ps):
        raise ConfigError("--p", "channel strength must lie in [0, 1]")
    if args.subset is not None:
        sites = parse_int_list(args.subset, "--subset")
        try:
            part = Bipartition.of(spec.N, sites)
        except ValueError as exc:
            raise ConfigError("--subset", str(exc)) from None
        if part.n == spec.N:
            raise ConfigError("--subset", "subset must leave at least one site untransposed")
    else:
        n = args.n if args.n is not None else spec.N // 2
        try:
            part = Bipartition(spec.N, n)
        except ValueError as exc:
            raise ConfigError("--n", str(exc)) from None
    n = part.n
    columns = ["p", "n", "negativity"]
    if args.oracle:
        columns.append("oracle")
    if args.pairs:
        columns += ["i", "j"]
    rows = []
    for p in ps:
        ch = ChannelModel(kind, p, spec.d)
        rep = analytic.negativity(spec, ch, n, spectators=not args.no_spectators)
        row = [p, n, rep[n]]
        if args.oracle:
            row.append(oracle.oracle_negativity(spec, ch, part, args.dense_cap))
        if args.pairs:
            rows.append(tuple(row + [None, None]))
            for (i, j, m), c in rep.contributions.items():
                rows.append(tuple([p, m, c] + ([None] if args.oracle else []) + [i, j]))
        else:
            rows.append(tuple(row))
    table = SweepTable(tuple(columns), rows, sweep._provenance(
        command="negativity", d=spec.d, N=spec.N, channel=kind.value))
    emit(args, table)
    return EXIT_OK


def cmd_critical(args) -> int:
    check_precision(args)
    spec = build_spec(args)
    kind = channel_kind(args)
    chosen = [x for x in ("balanced", "partition", "epsilon")
              if getattr(args, x) not in (None, False)]
    if len(chosen) != 1:
        raise ConfigError("--balanced/--partition/--epsilon", "choose exactly one quantity")
    spectators = not args.no_spectators
    oracle_value = None
    try:
        if args.balanced:
            if kind is ChannelKind.DEPOLARIZING:
                cp = analytic.critical_p_balanced_closed_form(spec)
            else:
                cp = analytic.critical_p_partition(spec, kind, spec.N // 2)
        elif args.partition is not None:
            if not 1 <= args.partition <= spec.N - 1:
                raise ConfigError("--partition", f"n must lie in [1, {spec.N - 1}]")
            cp = analytic.critical_p_partition(spec, kind, args.partition, spectators=spectators)
        else:
            check_epsilon(args.epsilon)
            cp = analytic.epsilon_threshold(spec, kind, args.epsilon, n=args.n, spectators=spectators)
    except UnsupportedClosedFormError as exc:
        raise ConfigError("--balanced", str(exc)) from None
    if args.oracle and cp.kind is not analytic.CriticalKind.EPSILON_THRESHOLD:
        oracle_value = oracle.oracle_critical_p(spec, kind, cp.n, args.dense_cap)
    quantity = cp.kind.value
    columns = ["quantity", "n", "epsilon", "i", "j", "value", "method", "warning"]
    if args.oracle:
        columns.append("oracle")
    main = [quantity, cp.n, cp.epsilon, None, None, cp.value, cp.method.value, "; ".join(cp.warnings)]
    if args.oracle:
        main.append(oracle_value)
    rows = [tuple(main)]
    if args.pairs:
        for (i, j), v in cp.pair_values.items():
            row = [quantity, cp.n, cp.epsilon, i, j, v, cp.method.value, ""]
            if args.oracle:
                row.append(None)
            rows.append(tuple(row))
    table = SweepTable(tuple(columns), rows, sweep._provenance(
        command="critical", d=spec.d, N=spec.N, channel=kind.value))
    emit(args, table)
    if cp.value is None:
        print("product state: no entangled level pair, critical value is None", file=sys.stderr)
        return EXIT_PRODUCT
    return EXIT_OK


def _sweep_amplitudes(args):
    if args.alphas_file:
        data = load_alphas_file(args.alphas_file)
        if not isinstance(data, dict):
            raise ConfigError("--alphas-file", "sweep needs a JSON object mapping d to [re, im] arrays")
        return data
    return "equal"


def cmd_sweep(args) -> int:
    check_precision(args)
    try:
        quantity = Quantity(args.quantity)
    except ValueError:
        raise ConfigError("--quantity", f"unknown quantity {args.quantity!r}") from None
    if quantity is Quantity.P_EPSILON:
        check_epsilon(args.epsilon)
    d_values = parse_int_list(args.d, "--d")
    N_values = parse_int_list(args.N, "--N")
    if min(d_values) < 2:
        raise ConfigError("--d", "dimensions must be >= 2")
    if min(N_values) < 2:
        raise ConfigError("--N", "qudit counts must be >= 2")
    kwargs = {}
    if args.p_grid:
        kwargs["p_grid"] = parse_float_list(args.p_grid, "--p-grid")
    try:
        req = SweepRequest(quantity, d_values, N_values, channel=channel_kind(args),
                           epsilon=args.epsilon, amplitudes=_sweep_amplitudes(args),
                           n=args.n, spectators=not args.no_spectators, **kwargs)
    except ValueError as exc:
        raise ConfigError("--quantity", str(exc)) from None
    table = sweep.run_sweep(req)
    emit(args, table)
    if args.plot_script:
        if not args.out:
            raise ConfigError("--plot-script", "needs --out so the script can reference the CSV")
        write_atomic(args.plot_script, sweep.plot_script(args.out, table))
    return EXIT_OK


def cmd_verify(args) -> int:
    check_precision(args)
    if args.suite == "default":
        instances = sweep.default_suite(n_random=args.n_random, seed=args.seed)
    elif args.suite == "quick":
        instances = sweep.default_suite(N_values=(2, 4), n_random=2, seed=args.seed)
    else:
        raise ConfigError("--suite", f"unknown suite {args.suite!r}")
    report = sweep.verify(instances, cap=args.dense_cap)
    emit(args, report.table())
    status = "PASS" if report.ok else "FAIL"
    print(f"verify {status}: {len(report.results)} instances, max deviation "
          f"{report.max_deviation:.3e}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_asymptotes(args) -> int:
    check_precision(args)
    check_epsilon(args.epsilon)
    d_values = parse_int_list(args.d, "--d")
    N_values = parse_int_list(args.N, "--N")
    table = sweep.asymptote_report(d_values, N_values, args.epsilon)
    emit(args, table)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (written atomically); stdout if omitted")
    p.add_argument("--precision", type=int, default=12, help="significant digits (6-17)")
    p.add_argument("--dense-cap", type=int, default=None,
                   help=f"max d^N for dense matrices (env {DENSE_CAP_ENV}, default 4096)")
    p.add_argument("--deterministic", action="store_true",
                   help="omit the timestamp from the provenance comment")
    p.add_argument("--config", help="JSON file of option defaults (keys as long flag names)")


def _state(p: argparse.ArgumentParser):
    p.add_argument("--d", type=int, required=False)
    p.add_argument("--N", type=int, required=False)
    p.add_argument("--equal", action="store_true", help="a_i = 1/sqrt(d) (default)")
    p.add_argument("--alphas", help="inline amplitudes 're,im;re,im;...'")
    p.add_argument("--alphas-file", help="JSON array of [re, im] pairs")
    p.add_argument("--magnitudes", help="comma list of real amplitudes, zero phases")
    p.add_argument("--channel", default="depolarizing")
    p.add_argument("--no-spectators", action="store_true",
                   help="drop the spectator-level background from the block diagonals")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghzdecay", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"ghzdecay {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("negativity", help="negativity of the noisy GHZ state")
    _state(p)
    _common(p)
    p.add_argument("--p", type=float)
    p.add_argument("--p-grid", help="comma list or start:stop:count")
    p.add_argument("--n", type=int)
    p.add_argument("--subset", help="explicit transposed sites, e.g. 0,2")
    p.add_argument("--pairs", action="store_true", help="also emit per-pair contributions")
    p.add_argument("--oracle", action="store_true", help="add the brute-force negativity")
    p.set_defaults(func=cmd_negativity)

    p = sub.add_parser("critical", help="critical channel strengths")
    _state(p)
    _common(p)
    p.add_argument("--balanced", action="store_true")
    p.add_argument("--partition", type=int, metavar="n")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--n", type=int, help="bipartition size for --epsilon (default N/2)")
    p.add_argument("--pairs", action="store_true")
    p.add_argument("--oracle", action="store_true", help="add the brute-force vanishing point")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("sweep", help="grid sweeps behind the robustness figures")
    _common(p)
    p.add_argument("--quantity", default="p-balanced",
                   help="p-balanced | p-least-balanced | p-epsilon | negativity-curve")
    p.add_argument("--d", default="2:50")
    p.add_argument("--N", default="4,6,8")
    p.add_argument("--equal", action="store_true")
    p.add_argument("--alphas-file", help="JSON object mapping d to [re, im] arrays")
    p.add_argument("--channel", default="depolarizing")
    p.add_argument("--epsilon", type=float, default=sweep.DEFAULT_EPSILON)
    p.add_argument("--p-grid")
    p.add_argument("--n", type=int)
    p.add_argument("--no-spectators", action="store_true")
    p.add_argument("--plot-script", help="also write a matplotlib script for the CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="analytic vs brute-force certification")
    _common(p)
    p.add_argument("--suite", default="default", help="default | quick")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--n-random", type=int, default=20)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("asymptotes", help="exact thresholds next to their limits")
    _common(p)
    p.add_argument("--d", default="2,3,5,10,100")
    p.add_argument("--N", default="4,8,16,64,200")
    p.add_argument("--epsilon", type=float, default=sweep.DEFAULT_EPSILON)
    p.set_defaults(func=cmd_asymptotes)
    return parser


def _apply_config(parser, argv):
    """Re-parse with defaults from ``--config`` so explicit flags still win."""
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("--config", str(exc)) from None
    if not isinstance(cfg, dict):
        raise ConfigError("--config", "expected a JSON object")
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in subparser._actions}
    defaults = {}
    for key, value in cfg.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest not in known:
            raise ConfigError("--config", f"unknown option {key!r}")
        defaults[dest] = value
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"ghzdecay: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"ghzdecay: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
