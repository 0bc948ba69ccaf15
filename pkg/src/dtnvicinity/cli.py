"""Command-line entry point.

Subcommands: ``validate``, ``gen``, ``analyze``, ``simulate``, ``overhead``.
Flags may be preloaded from a flat ``key=value`` config file via
``--config``; explicit flags override config-file values.  Exit codes:
0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .experiment import (
    DEFAULT_THRESHOLDS,
    ExperimentConfig,
    neighborhood_size_table,
    run_experiment,
    write_report,
)
from .mobility import (
    DEFAULT_COMM_RANGE,
    CommunityConfig,
    MobilityConfig,
    generate_community,
    generate_waypoint,
)
from .overhead import (
    DEFAULT_PROBE_INTERVAL,
    Strategy,
    StrategyConfig,
    run_cs,
    run_ts,
    write_ledgers_csv,
)
from .protocols import MessageSpec
from .temporal import INFINITE, TemporalGraph
from .trace import (
    TRACE_FORMATS,
    TraceFormatError,
    format_number,
    read_trace_file,
    trace_stats,
    write_trace_file,
)
from .vicinity import classify_all, write_pair_classes_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the CLI contract wants 1.
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _parse_seconds(text: str) -> float:
    value = float(text)
    if math.isnan(value):
        raise ValueError("nan is not a valid time")
    return value


def _parse_threshold_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise UsageError(f"bad threshold list {text!r}; expected e.g. 1,2,3") from None
    if not values or min(values) < 1:
        raise UsageError(f"bad threshold list {text!r}; thresholds start at 1")
    return values


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        parts = token.split("-")
        if len(parts) != 2:
            raise UsageError(f"bad pair {token!r}; expected <src>-<dst>")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise UsageError(f"bad pair {token!r}; expected integer node ids") from None
    if not pairs:
        raise UsageError("no pairs given")
    return pairs


def load_config_file(path: str) -> dict[str, str]:
    """Flat key=value file; blank lines and ``#`` comments ignored."""
    values: dict[str, str] = {}
    for line_no, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{line_no}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def build_parser() -> _Parser:
    parser = _Parser(prog="dtnvicinity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    def common(p: _Parser) -> None:
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--format", choices=TRACE_FORMATS, help="input trace format")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="deterministic seed")
        p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("validate", help="check a trace file and print summary stats")
    p.add_argument("trace")
    common(p)

    p = sub.add_parser("gen", help="generate a synthetic trace")
    p.add_argument("model", choices=("rwp", "community"))
    p.add_argument("--nodes", type=int)
    p.add_argument("--width", type=float)
    p.add_argument("--height", type=float)
    p.add_argument("--vmin", type=float)
    p.add_argument("--vmax", type=float)
    p.add_argument("--range", dest="comm_range", type=float)
    p.add_argument("--duration", type=float)
    p.add_argument("--tick", type=float)
    p.add_argument("--rows", type=int, help="home grid rows (community)")
    p.add_argument("--cols", type=int, help="home grid columns (community)")
    p.add_argument("--home-bias", type=float, help="home-cell waypoint probability")
    p.add_argument("--out-file", help="output trace path")
    common(p)

    p = sub.add_parser("analyze", help="pair classification and neighborhood sizes")
    p.add_argument("trace")
    p.add_argument("--tmax", type=int, help="largest threshold (default: node count - 1)")
    common(p)

    p = sub.add_parser("simulate", help="run the message sweep and write report CSVs")
    p.add_argument("trace")
    p.add_argument(
        "--t-values",
        type=_parse_threshold_list,
        help="comma-separated thresholds (default 1,2,3,4,5)",
    )
    p.add_argument("--messages-per-pair", type=int)
    p.add_argument("--ttl", type=_parse_seconds, help="message lifetime in seconds, or inf")
    p.add_argument("--t0", type=_parse_seconds, help="pin all creation times to this instant")
    p.add_argument("--strategy", choices=("none", "cs", "ts"))
    p.add_argument("--interval", type=float, help="probe interval in seconds")
    common(p)

    p = sub.add_parser("overhead", help="probing-cost ledgers for one strategy")
    p.add_argument("trace")
    p.add_argument("--strategy", choices=("cs", "ts"), required=True)
    p.add_argument("--t", type=int, help="neighborhood threshold (default 1)")
    p.add_argument("--interval", type=float)
    p.add_argument("--node", type=int, action="append", help="CS prober (repeatable; default all)")
    p.add_argument("--pairs", help="TS messages, e.g. 1-3,2-4")
    p.add_argument("--t0", type=_parse_seconds, help="TS message creation time (default 0)")
    p.add_argument("--ttl", type=_parse_seconds, help="TS message lifetime, or inf")
    p.add_argument("--window", type=float, help="CS probing window length from t=0")
    common(p)

    return parser


def _merged(args: argparse.Namespace, key: str, fallback, convert=None):
    """Flag value if given, else config-file value, else fallback."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    config = getattr(args, "_config_values", {})
    if key in config:
        raw = config[key]
        try:
            return convert(raw) if convert else raw
        except UsageError:
            raise
        except ValueError as exc:
            raise UsageError(f"config value {key}={raw!r}: {exc}") from None
    return fallback


def _load_trace(args: argparse.Namespace):
    fmt = _merged(args, "format", "intervals")
    try:
        return read_trace_file(args.trace, fmt)
    except OSError as exc:
        raise TraceFormatError(f"cannot read {args.trace}: {exc.strerror}") from exc


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(_merged(args, "out", "out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_validate(args: argparse.Namespace) -> int:
    trace = _load_trace(args)
    stats = trace_stats(trace)
    print(
        f"{args.trace}: {stats.node_count} nodes, {stats.interval_count} intervals, "
        f"horizon {format_number(stats.horizon)} s, "
        f"mean contact {format_number(round(stats.mean_duration, 3))} s"
    )
    return EXIT_OK


def _flag_bool(value) -> bool:
    if isinstance(value, str):
        return value.lower() in ("1", "true", "yes", "on")
    return bool(value)


def cmd_gen(args: argparse.Namespace) -> int:
    base = dict(
        node_count=int(_merged(args, "nodes", 20, int)),
        width=float(_merged(args, "width", 1000.0, float)),
        height=float(_merged(args, "height", 1000.0, float)),
        v_min=float(_merged(args, "vmin", 0.0, float)),
        v_max=float(_merged(args, "vmax", 2.0, float)),
        comm_range=float(_merged(args, "comm_range", DEFAULT_COMM_RANGE, float)),
        duration=float(_merged(args, "duration", 3600.0, float)),
        tick=float(_merged(args, "tick", 1.0, float)),
        seed=int(_merged(args, "seed", 0, int)),
    )
    try:
        if args.model == "rwp":
            config = MobilityConfig(**base)
            trace = generate_waypoint(config)
        else:
            config = CommunityConfig(
                **base,
                cell_rows=int(_merged(args, "rows", 5, int)),
                cell_cols=int(_merged(args, "cols", 5, int)),
                home_bias=float(_merged(args, "home_bias", 0.8, float)),
            )
            trace = generate_community(config)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    out_file = _merged(args, "out_file", None)
    if out_file is None:
        out_file = _out_dir(args) / f"{args.model}.trace"
    comments = [
        f"generated by dtnvicinity {__version__}",
        f"model={args.model} seed={config.seed} nodes={config.node_count}",
    ]
    write_trace_file(str(out_file), trace, comments)
    print(f"wrote {out_file}: {len(trace.intervals)} intervals, "
          f"horizon {format_number(trace.horizon)} s")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    trace = _load_trace(args)
    if trace.node_count < 2:
        raise ValueError("trace with < 2 nodes")
    g = TemporalGraph(trace)
    tmax = _merged(args, "tmax", None, int)
    if tmax is None:
        tmax = max(trace.node_count - 1, 1)
    if tmax < 1:
        raise UsageError(f"--tmax must be at least 1, got {tmax}")
    out = _out_dir(args)

    classes, fractions = classify_all(g, cap=tmax)
    with (out / "pair_classes.csv").open("w", encoding="utf-8", newline="\n") as fh:
        write_pair_classes_csv(fh, classes)

    table = neighborhood_size_table(g, list(range(1, tmax + 1)))
    with (out / "neigh_size_by_T.csv").open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("T,mean_size\n")
        for t in sorted(table):
            fh.write(f"{t},{format_number(table[t])}\n")

    for kind, fraction in sorted(fractions.items(), key=lambda kv: kv[0].value):
        print(f"{kind.value}: {fraction:.4f}")
    print(f"wrote {out / 'pair_classes.csv'} and {out / 'neigh_size_by_T.csv'}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    trace = _load_trace(args)
    thresholds = _merged(args, "t_values", DEFAULT_THRESHOLDS, _parse_threshold_list)
    strategy_name = _merged(args, "strategy", "none")
    strategy = None
    if strategy_name != "none":
        strategy = StrategyConfig(
            Strategy(strategy_name),
            threshold=1,  # per-threshold configs are derived during the run
            interval=float(_merged(args, "interval", DEFAULT_PROBE_INTERVAL, float)),
        )
    ttl = _merged(args, "ttl", INFINITE, _parse_seconds)
    t0 = _merged(args, "t0", None, _parse_seconds)

    config = ExperimentConfig(
        trace=trace,
        thresholds=thresholds,
        messages_per_pair=int(_merged(args, "messages_per_pair", 10, int)),
        seed=int(_merged(args, "seed", 0, int)),
        ttl=ttl,
        strategy=strategy,
        creation_time=t0,
    )
    result = run_experiment(config)
    out = _out_dir(args)
    written = write_report(result, out)
    if _flag_bool(getattr(args, "verbose", False)):
        for row in result.report.waiting:
            print(
                f"T={row.threshold}: delivered {row.delivered}, dropped {row.dropped}, "
                f"mean wait {format_number(row.mean_wait)}"
            )
    print(f"wrote {len(written)} report files to {out}")
    return EXIT_OK


def cmd_overhead(args: argparse.Namespace) -> int:
    trace = _load_trace(args)
    g = TemporalGraph(trace)
    threshold = int(_merged(args, "t", 1, int))
    interval = float(_merged(args, "interval", DEFAULT_PROBE_INTERVAL, float))
    strategy = Strategy(_merged(args, "strategy", "cs"))
    cfg = StrategyConfig(strategy, threshold, interval)
    out = _out_dir(args)

    ledgers = []
    if strategy is Strategy.CS:
        nodes = args.node if args.node else sorted(g.nodes)
        window_len = _merged(args, "window", None, float)
        window = (0.0, float(window_len)) if window_len is not None else None
        for node in nodes:
            ledgers.append(run_cs(g, node, cfg, window))
    else:
        if not args.pairs:
            raise UsageError("--strategy ts requires --pairs")
        t0 = _merged(args, "t0", 0.0, _parse_seconds)
        ttl = _merged(args, "ttl", INFINITE, _parse_seconds)
        for src, dst in _parse_pairs(args.pairs):
            spec = MessageSpec(src, dst, t0, ttl, threshold)
            record, ledger = run_ts(g, spec, cfg)
            ledgers.append(ledger)
            print(
                f"{src}->{dst}: {record.outcome.value}, "
                f"probed waiting {format_number(record.waiting_time)} s, "
                f"{len(ledger.events)} probes, total cost {ledger.total}"
            )

    path = out / f"ledger_{strategy.value}_T{threshold}.csv"
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        write_ledgers_csv(fh, ledgers)
    print(f"wrote {path}")
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "gen": cmd_gen,
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "overhead": cmd_overhead,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help()
            return EXIT_USAGE
        args._config_values = (
            load_config_file(args.config) if getattr(args, "config", None) else {}
        )
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TraceFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
