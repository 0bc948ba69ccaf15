"""Event-indexed time-varying graph over a contact trace.

Topology is piecewise constant: it only changes at interval endpoints
("breakpoints").  Each maximal span of constant topology is an *epoch*
``[breakpoint_i, breakpoint_{i+1})``.  Epochs are right-open: an edge
exists at its interval's start instant but not at its end instant.

Hop distances are positive integers; :data:`INFINITE` (``math.inf``)
encodes the absence of a contemporaneous path.
"""

from __future__ import annotations

import bisect
import math
from typing import Iterator

from .trace import ContactTrace

INFINITE: float = math.inf

Hops = int | float
Pair = tuple[int, int]


def is_finite_hops(n: Hops) -> bool:
    return not math.isinf(n)


class TemporalGraph:
    """Immutable snapshot/distance query structure for a :class:`ContactTrace`.

    Per-epoch adjacency is materialized lazily and cached; queries at an
    instant are answered by binary search over the breakpoints.
    """

    def __init__(self, trace: ContactTrace) -> None:
        self.trace = trace
        self.horizon = trace.horizon
        self.nodes: frozenset[int] = trace.nodes
        self._pair_intervals = trace.pair_intervals()
        self._pair_starts = {
            pair: [s for s, _ in spans] for pair, spans in self._pair_intervals.items()
        }

        points = {0.0, trace.horizon}
        for iv in trace.intervals:
            points.add(iv.start)
            points.add(iv.end)
        self.breakpoints: list[float] = sorted(points)
        if not trace.intervals and trace.horizon == 0.0:
            self.breakpoints = [0.0]
        self._index = {t: i for i, t in enumerate(self.breakpoints)}

        # Edge diffs applied when a sweep enters breakpoint i.
        self._added: list[list[Pair]] = [[] for _ in self.breakpoints]
        self._removed: list[list[Pair]] = [[] for _ in self.breakpoints]
        for iv in trace.intervals:
            self._added[self._index[iv.start]].append(iv.pair)
            self._removed[self._index[iv.end]].append(iv.pair)

        self._adjacency_cache: dict[int, dict[int, tuple[int, ...]]] = {}

    @property
    def epoch_count(self) -> int:
        return max(len(self.breakpoints) - 1, 0)

    def _check_time(self, t: float) -> None:
        if not 0.0 <= t <= self.horizon:
            raise ValueError(f"time {t} outside [0, {self.horizon}]")

    def _check_node(self, node: int) -> None:
        if node not in self.nodes:
            raise ValueError(f"unknown node id {node}")

    def epoch_index(self, t: float) -> int | None:
        """Index of the epoch containing ``t``; None at/after the horizon."""
        self._check_time(t)
        idx = bisect.bisect_right(self.breakpoints, t) - 1
        if idx >= self.epoch_count:
            return None
        return idx

    def epoch_adjacency(self, index: int) -> dict[int, tuple[int, ...]]:
        """Cached adjacency of epoch ``index`` (idempotent fill)."""
        cached = self._adjacency_cache.get(index)
        if cached is not None:
            return cached
        start = self.breakpoints[index]
        adjacency: dict[int, list[int]] = {}
        for pair, starts in self._pair_starts.items():
            pos = bisect.bisect_right(starts, start) - 1
            if pos >= 0 and self._pair_intervals[pair][pos][1] > start:
                adjacency.setdefault(pair[0], []).append(pair[1])
                adjacency.setdefault(pair[1], []).append(pair[0])
        frozen = {node: tuple(sorted(nbrs)) for node, nbrs in adjacency.items()}
        self._adjacency_cache[index] = frozen
        return frozen

    def adjacency_at(self, t: float) -> dict[int, tuple[int, ...]]:
        idx = self.epoch_index(t)
        if idx is None:
            return {}
        return self.epoch_adjacency(idx)

    def snapshot(self, t: float) -> frozenset[Pair]:
        """Edge set at instant ``t`` (right-open epoch convention)."""
        adjacency = self.adjacency_at(t)
        return frozenset(
            (a, b) for a, nbrs in adjacency.items() for b in nbrs if a < b
        )

    def iter_epochs(self) -> Iterator[tuple[float, float, dict[int, set[int]]]]:
        """Yield ``(start, end, adjacency)`` per epoch via an event sweep.

        The adjacency mapping is mutated in place between steps; treat it as
        read-only and do not retain it past the current iteration step.
        """
        adjacency: dict[int, set[int]] = {}
        for i in range(self.epoch_count):
            for a, b in self._removed[i]:
                adjacency[a].discard(b)
                adjacency[b].discard(a)
            for a, b in self._added[i]:
                adjacency.setdefault(a, set()).add(b)
                adjacency.setdefault(b, set()).add(a)
            yield self.breakpoints[i], self.breakpoints[i + 1], adjacency

    def distance(self, t: float, src: int, dst: int, cap: Hops = INFINITE) -> Hops:
        """Truncated-BFS shortest path length at ``t``; INFINITE beyond ``cap``."""
        self._check_node(src)
        self._check_node(dst)
        if src == dst:
            raise ValueError("distance requires distinct nodes")
        if cap < 1:
            raise ValueError(f"cap must be at least 1, got {cap}")
        return bfs_distance(self.adjacency_at(t), src, dst, cap)

    def neighborhood(self, t: float, center: int, depth: int) -> dict[int, int]:
        """Nodes within ``depth`` hops of ``center`` at ``t``, mapped to hop count."""
        self._check_node(center)
        if depth < 1:
            raise ValueError(f"neighborhood depth must be at least 1, got {depth}")
        return bfs_depths(self.adjacency_at(t), center, depth)

    def component_histogram(self, t: float, center: int, depth: int) -> tuple[int, int]:
        """Counts ``(n_lt, n_eq)``: members strictly closer than ``depth`` vs at it."""
        reached = self.neighborhood(t, center, depth)
        n_eq = sum(1 for d in reached.values() if d == depth)
        return len(reached) - n_eq, n_eq


def bfs_distance(
    adjacency: dict[int, tuple[int, ...]] | dict[int, set[int]],
    src: int,
    dst: int,
    cap: Hops = INFINITE,
) -> Hops:
    """Breadth-first distance from src to dst, truncated at depth ``cap``."""
    if src not in adjacency:
        return INFINITE
    frontier = [src]
    seen = {src}
    depth = 0
    while frontier and depth < cap:
        depth += 1
        next_frontier: list[int] = []
        for node in frontier:
            for nbr in adjacency.get(node, ()):
                if nbr in seen:
                    continue
                if nbr == dst:
                    return depth
                seen.add(nbr)
                next_frontier.append(nbr)
        frontier = next_frontier
    return INFINITE


def bfs_depths(
    adjacency: dict[int, tuple[int, ...]] | dict[int, set[int]],
    center: int,
    cap: Hops = INFINITE,
) -> dict[int, int]:
    """Hop count of every node reachable from ``center`` within ``cap`` hops."""
    depths: dict[int, int] = {}
    if center not in adjacency:
        return depths
    frontier = [center]
    seen = {center}
    depth = 0
    while frontier and depth < cap:
        depth += 1
        next_frontier: list[int] = []
        for node in frontier:
            for nbr in adjacency.get(node, ()):
                if nbr not in seen:
                    seen.add(nbr)
                    depths[nbr] = depth
                    next_frontier.append(nbr)
        frontier = next_frontier
    return depths
