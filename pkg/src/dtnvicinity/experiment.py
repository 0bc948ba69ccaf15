"""Batch experiment runner and report writers.

One run draws a fixed number of messages per unordered node pair at
seeded-uniform creation times, simulates each message once per threshold
in the sweep, and aggregates waiting times, delivery fractions, pair
classes, neighborhood sizes, and overhead totals into plot-ready CSVs.

Averaged waiting times are per-message over the messages delivered at each
threshold (delivered counts are always reported alongside, since the
delivered set grows with the threshold).
"""

from __future__ import annotations

import bisect
import hashlib
import random
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .overhead import OverheadLedger, Strategy, StrategyConfig, run_cs, run_ts
from .protocols import (
    MessageRecord,
    MessageSpec,
    record_from_timeline,
    write_records_csv,
)
from .temporal import INFINITE, Pair, TemporalGraph, bfs_depths
from .trace import ContactTrace, format_number, write_trace
from .vicinity import (
    PairClass,
    PairKind,
    all_pair_timelines,
    classify_pair,
    write_pair_classes_csv,
)

DEFAULT_THRESHOLDS = (1, 2, 3, 4, 5)
DEFAULT_MESSAGES_PER_PAIR = 10


@dataclass(frozen=True)
class ExperimentConfig:
    trace: ContactTrace
    thresholds: tuple[int, ...] = DEFAULT_THRESHOLDS
    messages_per_pair: int = DEFAULT_MESSAGES_PER_PAIR
    seed: int = 0
    ttl: float = INFINITE
    strategy: StrategyConfig | None = None
    # Test hook: pin every message to one creation time instead of drawing
    # uniformly over [0, horizon).
    creation_time: float | None = None

    def __post_init__(self) -> None:
        if not self.thresholds or min(self.thresholds) < 1:
            raise ValueError("thresholds must be non-empty, each at least 1")
        if self.messages_per_pair < 1:
            raise ValueError("messages_per_pair must be at least 1")
        if self.ttl < 0:
            raise ValueError(f"negative ttl: {self.ttl}")


@dataclass(frozen=True)
class ThresholdStats:
    threshold: int
    delivered: int
    dropped: int
    mean_wait: float
    median_wait: float

    @property
    def delivery_fraction(self) -> float:
        total = self.delivered + self.dropped
        return self.delivered / total if total else 0.0


@dataclass(frozen=True)
class AggregateReport:
    waiting: tuple[ThresholdStats, ...]
    class_fractions: dict[PairKind, float]
    classes: dict[Pair, PairClass]
    neighborhood_sizes: dict[int, float]
    discovery_overhead: dict[int, int]
    data_overhead: dict[int, int]

    def stats_for(self, threshold: int) -> ThresholdStats:
        for row in self.waiting:
            if row.threshold == threshold:
                return row
        raise KeyError(threshold)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    report: AggregateReport
    records: list[MessageRecord] = field(default_factory=list)
    ledgers: list[OverheadLedger] = field(default_factory=list)


def _creation_times(cfg: ExperimentConfig, pair_count: int) -> list[list[float]]:
    if cfg.creation_time is not None:
        if not 0.0 <= cfg.creation_time <= cfg.trace.horizon:
            raise ValueError(
                f"creation time {cfg.creation_time} outside [0, {cfg.trace.horizon}]"
            )
        return [[cfg.creation_time] * cfg.messages_per_pair] * pair_count
    rng = random.Random(cfg.seed)
    return [
        sorted(rng.random() * cfg.trace.horizon for _ in range(cfg.messages_per_pair))
        for _ in range(pair_count)
    ]


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Simulate the full sweep; deterministic for a fixed config and seed.

    Pair classes are computed at a cap equal to the largest threshold in
    the sweep, so pairs reported never_connected are exactly the pairs
    whose messages drop at every swept threshold.
    """
    if cfg.trace.node_count < 2:
        raise ValueError("trace with < 2 nodes")
    g = TemporalGraph(cfg.trace)
    max_threshold = max(cfg.thresholds)
    timelines = all_pair_timelines(g, cap=max_threshold)
    pairs = sorted(timelines)
    times = _creation_times(cfg, len(pairs))

    records: list[MessageRecord] = []
    ledgers: list[OverheadLedger] = []
    waits: dict[int, list[float]] = {t: [] for t in cfg.thresholds}
    dropped: dict[int, int] = {t: 0 for t in cfg.thresholds}
    data_cost: dict[int, int] = {t: 0 for t in cfg.thresholds}
    discovery_cost: dict[int, int] = {t: 0 for t in cfg.thresholds}

    ts_mode = cfg.strategy is not None and cfg.strategy.strategy is Strategy.TS
    for pair, pair_times in zip(pairs, times):
        timeline = timelines[pair]
        for created_at in pair_times:
            for threshold in cfg.thresholds:
                spec = MessageSpec(pair[0], pair[1], created_at, cfg.ttl, threshold)
                if ts_mode:
                    probing = StrategyConfig(
                        Strategy.TS, threshold, cfg.strategy.interval
                    )
                    record, ledger = run_ts(g, spec, probing)
                    ledgers.append(ledger)
                    discovery_cost[threshold] += ledger.total
                else:
                    record = record_from_timeline(timeline, spec)
                records.append(record)
                if record.delivered:
                    waits[threshold].append(record.waiting_time)
                    data_cost[threshold] += record.delivery_hops - 1
                else:
                    dropped[threshold] += 1

    if cfg.strategy is not None and cfg.strategy.strategy is Strategy.CS:
        for threshold in cfg.thresholds:
            probing = StrategyConfig(Strategy.CS, threshold, cfg.strategy.interval)
            for node in sorted(g.nodes):
                ledger = run_cs(g, node, probing)
                ledgers.append(ledger)
                discovery_cost[threshold] += ledger.total

    waiting = tuple(
        ThresholdStats(
            threshold=t,
            delivered=len(waits[t]),
            dropped=dropped[t],
            mean_wait=statistics.fmean(waits[t]) if waits[t] else INFINITE,
            median_wait=statistics.median(waits[t]) if waits[t] else INFINITE,
        )
        for t in cfg.thresholds
    )
    classes = {pair: classify_pair(tl) for pair, tl in timelines.items()}
    counts = {kind: 0 for kind in PairKind}
    for cls in classes.values():
        counts[cls.kind] += 1
    fractions = {kind: counts[kind] / len(classes) for kind in PairKind}

    report = AggregateReport(
        waiting=waiting,
        class_fractions=fractions,
        classes=classes,
        neighborhood_sizes=neighborhood_size_table(g, cfg.thresholds),
        discovery_overhead=discovery_cost,
        data_overhead=data_cost,
    )
    return ExperimentResult(cfg, report, records, ledgers)


def neighborhood_size_table(
    g: TemporalGraph, thresholds: tuple[int, ...] | list[int]
) -> dict[int, float]:
    """Mean reachable-neighbor count per threshold, time-weighted over epochs
    and averaged over all nodes."""
    totals = {t: 0.0 for t in thresholds}
    if not g.nodes or g.horizon == 0:
        return totals
    max_threshold = max(thresholds)
    for start, end, adjacency in g.iter_epochs():
        span = end - start
        for node in adjacency:
            depths = bfs_depths(adjacency, node, max_threshold)
            if not depths:
                continue
            counts = sorted(depths.values())
            for t in thresholds:
                # counts is sorted, so members within t hops form a prefix
                totals[t] += span * bisect.bisect_right(counts, t)
    scale = len(g.nodes) * g.horizon
    return {t: totals[t] / scale for t in thresholds}


def saturation_threshold(means: dict[int, float] | list[float], epsilon: float) -> int:
    """Smallest threshold beyond which relative neighborhood growth stays
    below ``epsilon``; the largest threshold when growth never levels off.

    ``means`` covers contiguous thresholds starting at 1.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if isinstance(means, dict):
        expected = list(range(1, len(means) + 1))
        if sorted(means) != expected:
            raise ValueError("means must cover contiguous thresholds starting at 1")
        values = [means[t] for t in expected]
    else:
        values = list(means)
    if len(values) < 2:
        raise ValueError("need at least two thresholds to detect saturation")
    tiny = 1e-12
    for i in range(len(values) - 1):
        growth = (values[i + 1] - values[i]) / max(values[i], tiny)
        if growth < epsilon:
            return i + 1
    return len(values)


# ---------------------------------------------------------------------------
# Report files
# ---------------------------------------------------------------------------

WAITING_CSV = "waiting_by_T.csv"
NEIGHBORHOOD_CSV = "neigh_size_by_T.csv"
PAIR_CLASSES_CSV = "pair_classes.csv"
OVERHEAD_CSV = "overhead_by_T.csv"
MESSAGES_CSV = "messages.csv"
MANIFEST = "run_manifest.txt"


def write_report(result: ExperimentResult, out_dir: str | Path) -> list[Path]:
    """Write all report CSVs plus the run manifest; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = result.report
    written = []

    path = out / WAITING_CSV
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("T,delivered_count,dropped_count,mean_wait,median_wait\n")
        for row in report.waiting:
            fh.write(
                f"{row.threshold},{row.delivered},{row.dropped},"
                f"{format_number(row.mean_wait)},{format_number(row.median_wait)}\n"
            )
    written.append(path)

    path = out / NEIGHBORHOOD_CSV
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("T,mean_size\n")
        for t in sorted(report.neighborhood_sizes):
            fh.write(f"{t},{format_number(report.neighborhood_sizes[t])}\n")
    written.append(path)

    path = out / PAIR_CLASSES_CSV
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        write_pair_classes_csv(fh, report.classes)
    written.append(path)

    path = out / OVERHEAD_CSV
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("T,total_No,total_Do\n")
        for t in sorted(report.discovery_overhead):
            fh.write(f"{t},{report.discovery_overhead[t]},{report.data_overhead[t]}\n")
    written.append(path)

    path = out / MESSAGES_CSV
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        write_records_csv(fh, result.records)
    written.append(path)

    written.append(write_manifest(result, out / MANIFEST))
    return written


def trace_digest(trace: ContactTrace) -> str:
    """SHA-256 of the canonical serialized trace."""
    return hashlib.sha256(write_trace(trace).encode("utf-8")).hexdigest()


def write_manifest(result: ExperimentResult, path: Path) -> Path:
    cfg = result.config
    strategy = cfg.strategy
    lines = [
        f"tool_version={__version__}",
        f"input_digest=sha256:{trace_digest(cfg.trace)}",
        f"seed={cfg.seed}",
        f"thresholds={','.join(str(t) for t in cfg.thresholds)}",
        f"messages_per_pair={cfg.messages_per_pair}",
        f"ttl={format_number(cfg.ttl)}",
        f"strategy={'none' if strategy is None else strategy.strategy.value}",
        f"probe_interval={'' if strategy is None else format_number(strategy.interval)}",
        f"creation_time={'random' if cfg.creation_time is None else format_number(cfg.creation_time)}",
        "averaging=per-message, over messages delivered at each threshold",
        f"pair_class_cap={max(cfg.thresholds)}",
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
