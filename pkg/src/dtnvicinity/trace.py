"""Contact trace model and file I/O.

A contact trace is a set of undirected pairwise contact intervals over a
finite time horizon.  Two on-disk formats are supported:

* ``intervals`` -- one contact per line: ``<a> <b> <start> <end>``.
  Optional ``#`` comment lines and an optional ``%horizon <seconds>``
  header.  This is the canonical format; :func:`write_trace` emits it.

* ``events`` -- link up/down log: ``<time> CONN <a> <b> up|down``.
  Every ``up`` must either be closed by a matching ``down`` or it is
  auto-closed at the horizon (the ``%horizon`` header value, or the last
  event time when absent).  ``#`` comments and ``%horizon`` are accepted
  here too.

On load, intervals of the same pair that overlap or abut are merged, node
order is canonicalized to ``a < b``, and intervals are sorted by
``(start, a, b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Literal

TraceFormat = Literal["intervals", "events"]

TRACE_FORMATS: tuple[str, ...] = ("intervals", "events")


class TraceFormatError(ValueError):
    """Malformed trace input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def format_number(value: float) -> str:
    """Canonical text form for a numeric value (``inf`` for unbounded)."""
    if math.isinf(value):
        return "inf"
    if value == int(value):
        return str(int(value))
    return repr(float(value))


@dataclass(frozen=True)
class ContactInterval:
    """One undirected contact: nodes ``a < b`` in range during [start, end)."""

    a: int
    b: int
    start: float
    end: float

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < 0:
            raise ValueError(f"node ids must be non-negative: ({self.a}, {self.b})")
        if self.a == self.b:
            raise ValueError(f"self-contact on node {self.a}")
        if self.a > self.b:
            raise ValueError(f"interval nodes not in canonical order: ({self.a}, {self.b})")
        if not self.start < self.end:
            raise ValueError(
                f"interval start must precede end: [{self.start}, {self.end}]"
            )
        if self.start < 0:
            raise ValueError(f"negative interval start: {self.start}")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.a, self.b)

    @property
    def duration(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class ContactTrace:
    """Canonical contact trace: merged, sorted intervals within a horizon."""

    intervals: tuple[ContactInterval, ...]
    horizon: float

    def __post_init__(self) -> None:
        if self.horizon < 0:
            raise ValueError(f"negative horizon: {self.horizon}")
        prev_key: tuple[float, int, int] | None = None
        last_end: dict[tuple[int, int], float] = {}
        for iv in self.intervals:
            if iv.end > self.horizon:
                raise ValueError(
                    f"interval [{iv.start}, {iv.end}] exceeds horizon {self.horizon}"
                )
            key = (iv.start, iv.a, iv.b)
            if prev_key is not None and key < prev_key:
                raise ValueError("intervals not sorted by (start, a, b)")
            prev_key = key
            if iv.pair in last_end and iv.start <= last_end[iv.pair]:
                raise ValueError(
                    f"pair {iv.pair} has overlapping or abutting intervals"
                )
            last_end[iv.pair] = iv.end

    @classmethod
    def build(
        cls,
        intervals: Iterable[tuple[int, int, float, float]],
        horizon: float | None = None,
    ) -> "ContactTrace":
        """Canonicalize raw ``(a, b, start, end)`` tuples into a trace.

        Node order is normalized, per-pair overlapping/abutting intervals are
        merged, and the horizon defaults to the maximum end time.
        """
        by_pair: dict[tuple[int, int], list[tuple[float, float]]] = {}
        for a, b, start, end in intervals:
            if a == b:
                raise ValueError(f"self-contact on node {a}")
            if a > b:
                a, b = b, a
            by_pair.setdefault((a, b), []).append((float(start), float(end)))

        merged: list[ContactInterval] = []
        max_end = 0.0
        for (a, b), spans in by_pair.items():
            spans.sort()
            cur_start, cur_end = spans[0]
            for start, end in spans[1:]:
                if start <= cur_end:
                    cur_end = max(cur_end, end)
                else:
                    merged.append(ContactInterval(a, b, cur_start, cur_end))
                    cur_start, cur_end = start, end
            merged.append(ContactInterval(a, b, cur_start, cur_end))
            max_end = max(max_end, cur_end)

        merged.sort(key=lambda iv: (iv.start, iv.a, iv.b))
        if horizon is None:
            horizon = max_end
        return cls(tuple(merged), float(horizon))

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(n for iv in self.intervals for n in (iv.a, iv.b))

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def pair_intervals(self) -> dict[tuple[int, int], list[tuple[float, float]]]:
        """Per-pair (start, end) spans, sorted by start."""
        out: dict[tuple[int, int], list[tuple[float, float]]] = {}
        for iv in self.intervals:
            out.setdefault(iv.pair, []).append((iv.start, iv.end))
        return out


@dataclass(frozen=True)
class TraceStats:
    node_count: int
    interval_count: int
    horizon: float
    mean_duration: float


def trace_stats(trace: ContactTrace) -> TraceStats:
    """Summary counts plus mean contact duration (0 for an empty trace)."""
    count = len(trace.intervals)
    total = sum(iv.duration for iv in trace.intervals)
    mean = total / count if count else 0.0
    return TraceStats(trace.node_count, count, trace.horizon, mean)


def _iter_lines(source: str | bytes | IO[str] | IO[bytes]) -> Iterator[str]:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        yield from source.splitlines()
        return
    for line in source:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        yield line.rstrip("\n")


def _parse_node(token: str, line_no: int) -> int:
    try:
        node = int(token)
    except ValueError:
        raise TraceFormatError(f"bad node id {token!r}", line_no) from None
    if node < 0:
        raise TraceFormatError(f"negative node id {node}", line_no)
    return node


def _parse_time(token: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise TraceFormatError(f"bad time value {token!r}", line_no) from None
    if math.isnan(value) or math.isinf(value) or value < 0:
        raise TraceFormatError(f"time out of range: {token}", line_no)
    return value


def parse_trace(
    source: str | bytes | IO[str] | IO[bytes],
    fmt: TraceFormat = "intervals",
) -> ContactTrace:
    """Parse a trace from text, bytes, or a line-oriented stream."""
    if fmt not in TRACE_FORMATS:
        raise ValueError(f"unknown trace format {fmt!r}; expected one of {TRACE_FORMATS}")

    header_horizon: float | None = None
    raw: list[tuple[int, int, float, float]] = []
    open_contacts: dict[tuple[int, int], tuple[float, int]] = {}
    last_event_time = 0.0

    for line_no, line in enumerate(_iter_lines(source), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("%"):
            fields = stripped[1:].split()
            if len(fields) != 2 or fields[0] != "horizon":
                raise TraceFormatError(f"unknown header {stripped!r}", line_no)
            header_horizon = _parse_time(fields[1], line_no)
            continue

        fields = stripped.split()
        if fmt == "intervals":
            if len(fields) != 4:
                raise TraceFormatError(
                    f"expected '<a> <b> <start> <end>', got {stripped!r}", line_no
                )
            a = _parse_node(fields[0], line_no)
            b = _parse_node(fields[1], line_no)
            start = _parse_time(fields[2], line_no)
            end = _parse_time(fields[3], line_no)
            if a == b:
                raise TraceFormatError(f"self-contact on node {a}", line_no)
            if start >= end:
                raise TraceFormatError(
                    f"start {format_number(start)} not before end {format_number(end)}",
                    line_no,
                )
            raw.append((a, b, start, end))
        else:
            if len(fields) != 5 or fields[1] != "CONN" or fields[4] not in ("up", "down"):
                raise TraceFormatError(
                    f"expected '<time> CONN <a> <b> up|down', got {stripped!r}", line_no
                )
            time = _parse_time(fields[0], line_no)
            a = _parse_node(fields[2], line_no)
            b = _parse_node(fields[3], line_no)
            if a == b:
                raise TraceFormatError(f"self-contact on node {a}", line_no)
            pair = (min(a, b), max(a, b))
            last_event_time = max(last_event_time, time)
            if fields[4] == "up":
                if pair in open_contacts:
                    raise TraceFormatError(
                        f"pair {pair} already up (opened on line {open_contacts[pair][1]})",
                        line_no,
                    )
                open_contacts[pair] = (time, line_no)
            else:
                if pair not in open_contacts:
                    raise TraceFormatError(f"down without up for pair {pair}", line_no)
                start, _ = open_contacts.pop(pair)
                if start >= time:
                    raise TraceFormatError(
                        f"contact for pair {pair} closes at {format_number(time)}, "
                        f"not after its start {format_number(start)}",
                        line_no,
                    )
                raw.append((pair[0], pair[1], start, time))

    if fmt == "events" and open_contacts:
        # Auto-close dangling contacts at the horizon; degenerate zero-length
        # contacts opened exactly at the horizon are dropped.
        close_at = header_horizon if header_horizon is not None else last_event_time
        for pair, (start, line_no) in sorted(open_contacts.items()):
            if start > close_at:
                raise TraceFormatError(
                    f"pair {pair} opens at {format_number(start)} after horizon "
                    f"{format_number(close_at)}",
                    line_no,
                )
            if start < close_at:
                raw.append((pair[0], pair[1], start, close_at))

    try:
        return ContactTrace.build(raw, horizon=header_horizon)
    except ValueError as exc:
        raise TraceFormatError(str(exc)) from exc


def write_trace(trace: ContactTrace, comments: Iterable[str] = ()) -> str:
    """Serialize to the intervals format; ``parse_trace(write_trace(t)) == t``."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"%horizon {format_number(trace.horizon)}")
    for iv in trace.intervals:
        lines.append(
            f"{iv.a} {iv.b} {format_number(iv.start)} {format_number(iv.end)}"
        )
    return "\n".join(lines) + "\n"


def read_trace_file(path: str, fmt: TraceFormat = "intervals") -> ContactTrace:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_trace(handle, fmt)


def write_trace_file(path: str, trace: ContactTrace, comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(write_trace(trace, comments))
