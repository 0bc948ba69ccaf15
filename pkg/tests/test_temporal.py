from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtnvicinity.temporal import INFINITE, TemporalGraph
from dtnvicinity.trace import ContactTrace

from .conftest import make_random_trace
from .oracles import floyd_warshall_distances


def test_empty_trace_has_zero_epochs():
    g = TemporalGraph(ContactTrace.build([]))
    assert g.epoch_count == 0
    assert g.snapshot(0.0) == frozenset()


def test_trace_x_breakpoints(trace_x):
    g = TemporalGraph(trace_x)
    assert g.breakpoints == [0.0, 50.0, 100.0, 120.0, 150.0, 200.0]
    assert g.snapshot(60.0) == frozenset({(1, 2), (2, 3)})


def test_edge_present_iff_interval_covers_epoch_start(trace_x):
    g = TemporalGraph(trace_x)
    spans = trace_x.pair_intervals()
    for i in range(g.epoch_count):
        start = g.breakpoints[i]
        expected = frozenset(
            pair
            for pair, ivs in spans.items()
            if any(s <= start < e for s, e in ivs)
        )
        assert g.snapshot(start) == expected


@pytest.mark.parametrize(
    "t,edges",
    [
        (60.0, {(1, 2), (2, 3)}),
        (100.0, {(2, 3)}),  # edge 1-2 just closed; epochs are right-open
        (130.0, {(2, 3), (3, 4)}),
    ],
)
def test_trace_x_snapshots(trace_x, t, edges):
    assert TemporalGraph(trace_x).snapshot(t) == frozenset(edges)


def test_snapshot_rejects_times_outside_horizon(trace_x):
    g = TemporalGraph(trace_x)
    with pytest.raises(ValueError, match="outside"):
        g.snapshot(-1.0)
    with pytest.raises(ValueError, match="outside"):
        g.snapshot(201.0)


def test_trace_x_distances(trace_x):
    g = TemporalGraph(trace_x)
    assert g.distance(60.0, 1, 3, 5) == 2
    assert g.distance(60.0, 1, 4, 99) == INFINITE
    with pytest.raises(ValueError, match="unknown node"):
        g.distance(60.0, 1, 9)


def test_parallel_three_hop_paths():
    # two disjoint 3-hop routes between 0 and 5, plus a bystander contact
    trace = ContactTrace.build(
        [
            (0, 1, 0, 10),
            (1, 2, 0, 10),
            (2, 5, 0, 10),
            (0, 3, 0, 10),
            (3, 4, 0, 10),
            (4, 5, 0, 10),
            (1, 6, 0, 10),
        ]
    )
    g = TemporalGraph(trace)
    assert g.distance(0.0, 0, 5, 3) == 3
    assert g.distance(0.0, 0, 5, 2) == INFINITE


def test_neighborhood_chain(chain5):
    g = TemporalGraph(chain5)
    assert g.neighborhood(0.0, 0, 2) == {1: 1, 2: 2}
    assert g.neighborhood(0.0, 0, 1) == {1: 1}


def test_neighborhood_depth_one_is_exactly_contacts(fig_square):
    g = TemporalGraph(fig_square)
    adjacency = g.adjacency_at(0.0)
    for node in sorted(g.nodes):
        assert set(g.neighborhood(0.0, node, 1)) == set(adjacency[node])


def test_neighborhood_exhausts_component_at_node_count(chain5):
    g = TemporalGraph(chain5)
    full = g.neighborhood(0.0, 0, len(g.nodes) - 1)
    assert full == {1: 1, 2: 2, 3: 3, 4: 4}


def test_component_histogram_square(fig_square):
    g = TemporalGraph(fig_square)
    assert g.component_histogram(0.0, 0, 2) == (2, 1)


def test_component_histogram_isolated(trace_x):
    g = TemporalGraph(trace_x)
    # node 4 has no contacts during [0, 50)
    assert g.component_histogram(10.0, 4, 3) == (0, 0)


def test_component_histogram_chain(chain5):
    g = TemporalGraph(chain5)
    assert g.component_histogram(0.0, 0, 3) == (2, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_distance_matches_exhaustive_oracle(seed):
    trace = make_random_trace(random.Random(seed), max_nodes=8, max_intervals=25)
    g = TemporalGraph(trace)
    nodes = sorted(g.nodes)
    for i in range(g.epoch_count):
        mid = (g.breakpoints[i] + g.breakpoints[i + 1]) / 2
        oracle = floyd_warshall_distances(nodes, g.snapshot(mid))
        for (a, b), true_dist in oracle.items():
            full = g.distance(mid, a, b, cap=len(nodes))
            assert full == true_dist
            for cap in (1, 2, len(nodes)):
                capped = g.distance(mid, a, b, cap=cap)
                assert capped == (true_dist if true_dist <= cap else INFINITE)
            assert g.distance(mid, b, a, cap=len(nodes)) == full  # symmetry


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_neighborhood_monotone_in_depth(seed):
    trace = make_random_trace(random.Random(seed), max_nodes=8, max_intervals=20)
    g = TemporalGraph(trace)
    for i in range(min(g.epoch_count, 6)):
        t = g.breakpoints[i]
        for node in sorted(g.nodes):
            smaller = g.neighborhood(t, node, 2)
            larger = g.neighborhood(t, node, 3)
            assert set(smaller) <= set(larger)
            for member, hops in smaller.items():
                assert larger[member] == hops
