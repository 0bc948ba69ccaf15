"""Store-and-wait forwarding with bounded neighborhood awareness.

The baseline protocol keeps a message at its source until the source meets
the destination (threshold 1).  The vicinity-aware variant hands the
message over as soon as the destination appears within ``threshold`` hops
of the source over a contemporaneous end-to-end path; the multihop
transfer itself is instantaneous (no sizes or throughputs are modeled).

Waiting times here are exact: topology is piecewise constant, so the first
delivery opportunity is attained either at the creation instant or at an
epoch start.  Probing-quantized delivery lives in :mod:`.overhead`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable, Sequence

from .temporal import INFINITE, Pair, TemporalGraph, bfs_distance
from .trace import format_number
from .vicinity import PairTimeline, pair_timeline

UNBOUNDED: float = math.inf


class Outcome(Enum):
    DELIVERED = "delivered"
    DROPPED = "dropped"


@dataclass(frozen=True)
class MessageSpec:
    src: int
    dst: int
    created_at: float
    ttl: float = UNBOUNDED
    threshold: int = 1

    def __post_init__(self) -> None:
        if self.src == self.dst:
            raise ValueError("message source and destination must differ")
        if self.created_at < 0:
            raise ValueError(f"negative creation time: {self.created_at}")
        if self.ttl < 0:
            raise ValueError(f"negative ttl: {self.ttl}")
        if self.threshold < 1:
            raise ValueError(f"threshold must be at least 1, got {self.threshold}")


@dataclass(frozen=True)
class MessageRecord:
    spec: MessageSpec
    outcome: Outcome
    waiting_time: float
    delivery_hops: int | None

    @property
    def delivered(self) -> bool:
        return self.outcome is Outcome.DELIVERED


def simulate_message(g: TemporalGraph, spec: MessageSpec) -> MessageRecord:
    """Deliver at the first instant the destination is within ``threshold`` hops.

    The epoch sequence is scanned from the creation instant; the scan stops
    early once the TTL can no longer be met.  A dropped message has
    INFINITE waiting time.
    """
    g._check_node(spec.src)
    g._check_node(spec.dst)
    if spec.created_at > g.horizon:
        raise ValueError(
            f"creation time {spec.created_at} beyond horizon {g.horizon}"
        )
    start_idx = g.epoch_index(spec.created_at)
    if start_idx is not None:
        deadline = spec.created_at + spec.ttl
        for idx in range(start_idx, g.epoch_count):
            at = max(g.breakpoints[idx], spec.created_at)
            if at > deadline:
                break
            hops = bfs_distance(
                g.epoch_adjacency(idx), spec.src, spec.dst, spec.threshold
            )
            if hops <= spec.threshold:
                return MessageRecord(spec, Outcome.DELIVERED, at - spec.created_at, int(hops))
    return MessageRecord(spec, Outcome.DROPPED, INFINITE, None)


def record_from_timeline(timeline: PairTimeline, spec: MessageSpec) -> MessageRecord:
    """Same outcome as :func:`simulate_message`, answered from a pair timeline.

    The timeline must belong to the message's pair and must have been built
    with a cap of at least the message threshold.
    """
    if timeline.pair != (min(spec.src, spec.dst), max(spec.src, spec.dst)):
        raise ValueError(f"timeline pair {timeline.pair} does not match message")
    hit = timeline.first_time_within(spec.created_at, spec.threshold)
    if hit is not None:
        at, hops = hit
        waiting = at - spec.created_at
        if waiting <= spec.ttl:
            return MessageRecord(spec, Outcome.DELIVERED, waiting, int(hops))
    return MessageRecord(spec, Outcome.DROPPED, INFINITE, None)


def waiting_time_profile(
    g: TemporalGraph,
    pair: Pair,
    created_at: float,
    thresholds: Sequence[int],
) -> dict[int, float]:
    """Waiting time per threshold for one message, sharing a single traversal.

    Values are non-increasing in the threshold; INFINITE means the pair
    never comes within reach after ``created_at``.
    """
    if not thresholds:
        raise ValueError("thresholds must be non-empty")
    if min(thresholds) < 1:
        raise ValueError("thresholds must all be at least 1")
    if not 0.0 <= created_at <= g.horizon:
        raise ValueError(f"creation time {created_at} outside [0, {g.horizon}]")
    timeline = pair_timeline(g, pair, cap=max(thresholds))
    profile: dict[int, float] = {}
    for threshold in thresholds:
        hit = timeline.first_time_within(created_at, threshold)
        profile[threshold] = INFINITE if hit is None else hit[0] - created_at
    return profile


RECORD_CSV_COLUMNS = ("src", "dst", "t0", "T", "outcome", "waiting_time", "hops")


def write_records_csv(out: IO[str], records: Iterable[MessageRecord]) -> None:
    """CSV export: ``src,dst,t0,T,outcome,waiting_time,hops`` (inf literal)."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RECORD_CSV_COLUMNS)
    for rec in records:
        writer.writerow(
            [
                rec.spec.src,
                rec.spec.dst,
                format_number(rec.spec.created_at),
                rec.spec.threshold,
                rec.outcome.value,
                format_number(rec.waiting_time),
                "" if rec.delivery_hops is None else rec.delivery_hops,
            ]
        )
