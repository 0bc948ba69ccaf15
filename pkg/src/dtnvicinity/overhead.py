"""Message-count cost accounting for multihop delivery and neighborhood probing.

Data overhead: delivering over an n-hop path costs n - 1 extra
transmissions beyond the direct-contact case.

Discovery overhead: one probing wave from a node floods a discovery
message outward with a decrementing hop budget; every node reached with
budget left rebroadcasts once and later sends one aggregated reply, while
nodes reached at the budget edge reply once without rebroadcasting.
Counting the initiator's single broadcast, a wave bounded at depth T costs

    2 * (members at hop distance < T) + (members at hop distance = T) + 1

messages.  Two probing schedules are provided: continuous probing at a
fixed interval (CS) and probing only while a message is pending (TS).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable

from .protocols import MessageRecord, MessageSpec, Outcome
from .temporal import INFINITE, Hops, TemporalGraph, bfs_distance
from .trace import format_number


class Strategy(Enum):
    CS = "cs"
    TS = "ts"


DEFAULT_PROBE_INTERVAL = 30.0


@dataclass(frozen=True)
class StrategyConfig:
    strategy: Strategy
    threshold: int
    interval: float = DEFAULT_PROBE_INTERVAL

    def __post_init__(self) -> None:
        if self.interval <= 0:
            raise ValueError(f"probe interval must be positive, got {self.interval}")
        if self.threshold < 1:
            raise ValueError(f"threshold must be at least 1, got {self.threshold}")


@dataclass(frozen=True)
class ProbeEvent:
    node: int
    time: float
    threshold: int
    cost: int

    def __post_init__(self) -> None:
        if self.cost < 1:
            raise ValueError("a probe always costs at least the initial broadcast")


@dataclass(frozen=True)
class OverheadLedger:
    node: int
    strategy: Strategy
    interval: float
    events: tuple[ProbeEvent, ...]
    cumulative: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        total = 0
        sums = []
        prev_time = None
        for event in self.events:
            if prev_time is not None and event.time <= prev_time:
                raise ValueError("probe events must be strictly increasing in time")
            prev_time = event.time
            total += event.cost
            sums.append(total)
        object.__setattr__(self, "cumulative", tuple(sums))

    @property
    def total(self) -> int:
        return self.cumulative[-1] if self.cumulative else 0


def data_overhead(hops: Hops) -> int:
    """Extra transmissions to deliver over an n-hop path: n - 1."""
    if math.isinf(hops):
        raise ValueError("no path: data overhead undefined for INFINITE hops")
    if hops < 1:
        raise ValueError(f"hop count must be at least 1, got {hops}")
    return int(hops) - 1


def probe_cost(g: TemporalGraph, t: float, center: int, threshold: int) -> int:
    """Messages sent by one discovery wave from ``center`` at instant ``t``."""
    n_lt, n_eq = g.component_histogram(t, center, threshold)
    return 2 * n_lt + n_eq + 1


def run_cs(
    g: TemporalGraph,
    node: int,
    cfg: StrategyConfig,
    window: tuple[float, float] | None = None,
) -> OverheadLedger:
    """Continuous probing: one wave every ``cfg.interval`` seconds over ``window``.

    The window defaults to the full horizon; both endpoints must lie within
    it.  A window of length W yields floor(W / interval) + 1 probes.
    """
    begin, end = window if window is not None else (0.0, g.horizon)
    if not 0.0 <= begin <= end <= g.horizon:
        raise ValueError(f"window [{begin}, {end}] outside [0, {g.horizon}]")
    events = []
    step = 0
    while True:
        at = begin + step * cfg.interval
        if at > end:
            break
        events.append(ProbeEvent(node, at, cfg.threshold, probe_cost(g, at, node, cfg.threshold)))
        step += 1
    return OverheadLedger(node, Strategy.CS, cfg.interval, tuple(events))


def run_ts(
    g: TemporalGraph, spec: MessageSpec, cfg: StrategyConfig
) -> tuple[MessageRecord, OverheadLedger]:
    """Probing while a message is pending, from creation until delivery,
    TTL expiry, or the horizon.

    Delivery happens at the first probe instant where the destination lies
    within the threshold, so the reported waiting time is the exact one
    rounded up to the probing grid.
    """
    if cfg.threshold != spec.threshold:
        raise ValueError(
            f"strategy threshold {cfg.threshold} != message threshold {spec.threshold}"
        )
    g._check_node(spec.src)
    g._check_node(spec.dst)
    if spec.created_at > g.horizon:
        raise ValueError(f"creation time {spec.created_at} beyond horizon {g.horizon}")

    stop = min(spec.created_at + spec.ttl, g.horizon)
    events = []
    record: MessageRecord | None = None
    step = 0
    while True:
        at = spec.created_at + step * cfg.interval
        if at > stop:
            break
        step += 1
        adjacency = g.adjacency_at(at)
        events.append(
            ProbeEvent(spec.src, at, cfg.threshold, probe_cost(g, at, spec.src, cfg.threshold))
        )
        hops = bfs_distance(adjacency, spec.src, spec.dst, cfg.threshold)
        if hops <= cfg.threshold:
            record = MessageRecord(spec, Outcome.DELIVERED, at - spec.created_at, int(hops))
            break
    if record is None:
        record = MessageRecord(spec, Outcome.DROPPED, INFINITE, None)
    return record, OverheadLedger(spec.src, Strategy.TS, cfg.interval, tuple(events))


LEDGER_CSV_COLUMNS = ("node", "strategy", "T", "time", "probe_cost", "cumulative")


def write_ledgers_csv(out: IO[str], ledgers: Iterable[OverheadLedger]) -> None:
    """CSV export: ``node,strategy,T,time,probe_cost,cumulative``."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(LEDGER_CSV_COLUMNS)
    for ledger in ledgers:
        for event, running in zip(ledger.events, ledger.cumulative):
            writer.writerow(
                [
                    event.node,
                    ledger.strategy.value,
                    event.threshold,
                    format_number(event.time),
                    event.cost,
                    running,
                ]
            )
