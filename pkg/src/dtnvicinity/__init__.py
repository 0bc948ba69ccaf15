"""Contact-trace toolkit for vicinity-aware store-and-wait forwarding in
disruption-tolerant networks."""

__version__ = "0.1.0"

from .temporal import INFINITE, TemporalGraph
from .trace import (
    ContactInterval,
    ContactTrace,
    TraceFormatError,
    TraceStats,
    parse_trace,
    read_trace_file,
    trace_stats,
    write_trace,
    write_trace_file,
)

__all__ = [
    "INFINITE",
    "ContactInterval",
    "ContactTrace",
    "TemporalGraph",
    "TraceFormatError",
    "TraceStats",
    "parse_trace",
    "read_trace_file",
    "trace_stats",
    "write_trace",
    "write_trace_file",
    "__version__",
]
