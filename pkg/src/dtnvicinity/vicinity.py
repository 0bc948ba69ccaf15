"""Per-pair intercontact timelines and pair classification.

For every node pair the shortest contemporaneous path length n(t) is a
piecewise-constant function of time: n = 1 while the pair is in contact,
2 <= n < INFINITE while an end-to-end path exists through other nodes,
and INFINITE while the pair sits in different connected components.

A pair is *contact_reachable* if n is ever 1, *vicinity_only* if n is
never 1 but sometimes finite, and *never_connected* otherwise.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from typing import IO, Mapping

from .temporal import INFINITE, Hops, Pair, TemporalGraph, bfs_depths, bfs_distance
from .trace import format_number


@dataclass(frozen=True)
class TimelineSegment:
    start: float
    end: float
    hops: Hops


@dataclass(frozen=True)
class PairTimeline:
    """Maximal constant-n segments covering [0, horizon] for one pair."""

    pair: Pair
    horizon: float
    segments: tuple[TimelineSegment, ...]

    def hops_at(self, t: float) -> Hops:
        if not 0.0 <= t <= self.horizon:
            raise ValueError(f"time {t} outside [0, {self.horizon}]")
        for seg in self.segments:
            if seg.start <= t < seg.end:
                return seg.hops
        return INFINITE

    def first_time_within(self, t0: float, threshold: Hops) -> tuple[float, Hops] | None:
        """Earliest ``t >= t0`` with ``n(t) <= threshold``, with n there.

        Returns None when the pair never comes within ``threshold`` hops
        at or after ``t0``.
        """
        for seg in self.segments:
            if seg.end <= t0:
                continue
            if seg.hops <= threshold:
                return max(seg.start, t0), seg.hops
        return None

    def min_hops(self) -> Hops:
        finite = [seg.hops for seg in self.segments if not math.isinf(seg.hops)]
        return min(finite) if finite else INFINITE


class PairKind(Enum):
    CONTACT_REACHABLE = "contact_reachable"
    VICINITY_ONLY = "vicinity_only"
    NEVER_CONNECTED = "never_connected"


@dataclass(frozen=True)
class PairClass:
    kind: PairKind
    min_hops: Hops


class _TimelineBuilder:
    """Accumulates per-epoch hop values, merging equal runs and INFINITE gaps."""

    def __init__(self, pair: Pair, horizon: float) -> None:
        self.pair = pair
        self.horizon = horizon
        self.segments: list[TimelineSegment] = []
        self._cursor = 0.0

    def add(self, start: float, end: float, hops: Hops) -> None:
        if start > self._cursor:
            self._fill(self._cursor, start, INFINITE)
        self._fill(start, end, hops)
        self._cursor = end

    def _fill(self, start: float, end: float, hops: Hops) -> None:
        last = self.segments[-1] if self.segments else None
        if last is not None and last.hops == hops and last.end == start:
            self.segments[-1] = TimelineSegment(last.start, end, hops)
        else:
            self.segments.append(TimelineSegment(start, end, hops))

    def finish(self) -> PairTimeline:
        if self._cursor < self.horizon or not self.segments:
            self._fill(self._cursor, self.horizon, INFINITE)
        return PairTimeline(self.pair, self.horizon, tuple(self.segments))


def pair_timeline(g: TemporalGraph, pair: Pair, cap: Hops = INFINITE) -> PairTimeline:
    """Timeline of n(t) for one pair, with values above ``cap`` as INFINITE."""
    a, b = pair
    g._check_node(a)
    g._check_node(b)
    if a == b:
        raise ValueError("pair must contain distinct nodes")
    if cap < 1:
        raise ValueError(f"cap must be at least 1, got {cap}")
    key = (min(a, b), max(a, b))
    builder = _TimelineBuilder(key, g.horizon)
    for start, end, adjacency in g.iter_epochs():
        hops = bfs_distance(adjacency, key[0], key[1], cap)
        if not math.isinf(hops):
            builder.add(start, end, hops)
    return builder.finish()


def all_pair_timelines(
    g: TemporalGraph, cap: Hops = INFINITE
) -> dict[Pair, PairTimeline]:
    """Timelines for every unordered node pair in one sweep over the epochs.

    Equivalent to calling :func:`pair_timeline` per pair but runs one BFS
    per (epoch, active node) instead of one per (epoch, pair).
    """
    if cap < 1:
        raise ValueError(f"cap must be at least 1, got {cap}")
    nodes = sorted(g.nodes)
    builders = {
        (a, b): _TimelineBuilder((a, b), g.horizon)
        for i, a in enumerate(nodes)
        for b in nodes[i + 1 :]
    }
    for start, end, adjacency in g.iter_epochs():
        for src in nodes:
            if src not in adjacency:
                continue
            for dst, hops in bfs_depths(adjacency, src, cap).items():
                if src < dst:
                    builders[(src, dst)].add(start, end, hops)
    return {pair: builder.finish() for pair, builder in builders.items()}


def classify_pair(timeline: PairTimeline) -> PairClass:
    """Classify a pair from its timeline; min_hops is the smallest finite n."""
    min_hops = timeline.min_hops()
    if min_hops == 1:
        kind = PairKind.CONTACT_REACHABLE
    elif math.isinf(min_hops):
        kind = PairKind.NEVER_CONNECTED
    else:
        kind = PairKind.VICINITY_ONLY
    return PairClass(kind, min_hops)


def classify_all(
    g: TemporalGraph, cap: Hops = INFINITE
) -> tuple[dict[Pair, PairClass], dict[PairKind, float]]:
    """Classification of every unordered pair plus the per-kind fractions."""
    classes = {
        pair: classify_pair(tl) for pair, tl in all_pair_timelines(g, cap).items()
    }
    counts = {kind: 0 for kind in PairKind}
    for cls in classes.values():
        counts[cls.kind] += 1
    total = len(classes)
    fractions = {
        kind: (count / total if total else 0.0) for kind, count in counts.items()
    }
    return classes, fractions


def write_pair_classes_csv(
    out: IO[str], classes: Mapping[Pair, PairClass]
) -> None:
    """CSV export: ``a,b,kind,min_n`` (INFINITE serialized as ``inf``)."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["a", "b", "kind", "min_n"])
    for (a, b) in sorted(classes):
        cls = classes[(a, b)]
        writer.writerow([a, b, cls.kind.value, format_number(cls.min_hops)])
