from __future__ import annotations

import io
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtnvicinity.temporal import INFINITE, TemporalGraph
from dtnvicinity.trace import ContactTrace
from dtnvicinity.vicinity import (
    PairKind,
    all_pair_timelines,
    classify_all,
    classify_pair,
    pair_timeline,
    write_pair_classes_csv,
)

from .conftest import make_random_trace


def segments(timeline):
    return [(s.start, s.end, s.hops) for s in timeline.segments]


def test_timeline_vicinity_pair(trace_x):
    g = TemporalGraph(trace_x)
    assert segments(pair_timeline(g, (1, 3))) == [
        (0.0, 50.0, INFINITE),
        (50.0, 100.0, 2),
        (100.0, 200.0, INFINITE),
    ]


def test_timeline_contact_pair(trace_x):
    g = TemporalGraph(trace_x)
    assert segments(pair_timeline(g, (1, 2))) == [
        (0.0, 100.0, 1),
        (100.0, 200.0, INFINITE),
    ]


def test_timeline_never_connected_pair_is_single_segment(trace_x):
    g = TemporalGraph(trace_x)
    assert segments(pair_timeline(g, (1, 4))) == [(0.0, 200.0, INFINITE)]


def test_timeline_pair_order_is_irrelevant(trace_x):
    g = TemporalGraph(trace_x)
    assert pair_timeline(g, (3, 1)) == pair_timeline(g, (1, 3))


def test_classify_trace_x_pairs(trace_x):
    g = TemporalGraph(trace_x)
    tl = all_pair_timelines(g)
    assert classify_pair(tl[(1, 3)]).kind is PairKind.VICINITY_ONLY
    assert classify_pair(tl[(1, 3)]).min_hops == 2
    assert classify_pair(tl[(1, 2)]).kind is PairKind.CONTACT_REACHABLE
    assert classify_pair(tl[(1, 2)]).min_hops == 1
    assert classify_pair(tl[(1, 4)]).kind is PairKind.NEVER_CONNECTED
    assert math.isinf(classify_pair(tl[(1, 4)]).min_hops)


def test_classify_all_trace_x_fractions(trace_x):
    # (2,4) reaches hop distance 2 during [120, 150) through node 3, so the
    # vicinity-only class holds two of the six pairs.
    g = TemporalGraph(trace_x)
    classes, fractions = classify_all(g)
    kinds = {pair: cls.kind for pair, cls in classes.items()}
    assert kinds == {
        (1, 2): PairKind.CONTACT_REACHABLE,
        (2, 3): PairKind.CONTACT_REACHABLE,
        (3, 4): PairKind.CONTACT_REACHABLE,
        (1, 3): PairKind.VICINITY_ONLY,
        (2, 4): PairKind.VICINITY_ONLY,
        (1, 4): PairKind.NEVER_CONNECTED,
    }
    assert fractions[PairKind.CONTACT_REACHABLE] == 3 / 6
    assert fractions[PairKind.VICINITY_ONLY] == 2 / 6
    assert fractions[PairKind.NEVER_CONNECTED] == 1 / 6


def test_fully_connected_static_trace_is_all_contact():
    trace = ContactTrace.build(
        [(a, b, 0, 10) for a in range(4) for b in range(a + 1, 4)]
    )
    _, fractions = classify_all(TemporalGraph(trace))
    assert fractions[PairKind.CONTACT_REACHABLE] == 1.0


def test_timeline_invariants_and_bulk_equivalence(trace_x):
    g = TemporalGraph(trace_x)
    bulk = all_pair_timelines(g)
    for pair, timeline in bulk.items():
        assert timeline == pair_timeline(g, pair)
        assert timeline.segments[0].start == 0.0
        assert timeline.segments[-1].end == g.horizon
        for first, second in zip(timeline.segments, timeline.segments[1:]):
            assert first.end == second.start  # contiguous cover
            assert first.hops != second.hops  # maximal segments


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_contact_segments_reconstruct_contact_intervals(seed):
    trace = make_random_trace(random.Random(seed), max_nodes=7, max_intervals=20)
    g = TemporalGraph(trace)
    spans = trace.pair_intervals()
    for pair, timeline in all_pair_timelines(g).items():
        in_contact = [(s.start, s.end) for s in timeline.segments if s.hops == 1]
        assert in_contact == spans.get(pair, [])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_raising_cap_never_raises_hops(seed):
    trace = make_random_trace(random.Random(seed), max_nodes=7, max_intervals=20)
    g = TemporalGraph(trace)
    low = all_pair_timelines(g, cap=2)
    high = all_pair_timelines(g, cap=6)
    for pair in low:
        for t in [s.start for s in low[pair].segments]:
            assert high[pair].hops_at(t) <= low[pair].hops_at(t)
        cls_low = classify_pair(low[pair])
        cls_high = classify_pair(high[pair])
        if not math.isinf(cls_low.min_hops):
            assert cls_high.min_hops <= cls_low.min_hops


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_fractions_partition_all_pairs(seed):
    trace = make_random_trace(random.Random(seed), max_nodes=7, max_intervals=15)
    classes, fractions = classify_all(TemporalGraph(trace))
    n = trace.node_count
    assert len(classes) == n * (n - 1) // 2
    assert sum(fractions.values()) == pytest.approx(1.0, abs=1e-12)


def test_classification_csv_schema(trace_x):
    classes, _ = classify_all(TemporalGraph(trace_x))
    out = io.StringIO()
    write_pair_classes_csv(out, classes)
    lines = out.getvalue().splitlines()
    assert lines[0] == "a,b,kind,min_n"
    assert "1,3,vicinity_only,2" in lines
    assert "1,4,never_connected,inf" in lines


def test_hops_at_covers_whole_horizon(trace_x):
    g = TemporalGraph(trace_x)
    timeline = pair_timeline(g, (1, 3))
    assert timeline.hops_at(0.0) == INFINITE
    assert timeline.hops_at(75.0) == 2
    assert timeline.hops_at(200.0) == INFINITE  # horizon instant: no open epoch
    with pytest.raises(ValueError):
        timeline.hops_at(200.5)
