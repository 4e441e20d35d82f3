"""Shared timestamped graph: stamps, snapshots, nesting, and error cases."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from dyntr import oracle
from dyntr.errors import CycleCreated, DuplicateEdge, MissingEdge, NotIncident
from dyntr.graph_core import DeleteSet, InsertCentered, TimestampedGraph

PROPERTY_SETTINGS = settings(
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


def build_d3() -> TimestampedGraph:
    g = TimestampedGraph(3, acyclic=True)
    g.apply_insert_centered(1, [(1, 2), (1, 3)])
    g.apply_insert_centered(3, [(3, 2)])
    return g


def test_first_insertion_stamps():
    g = TimestampedGraph(3)
    ts = g.apply_insert_centered(1, [(1, 2), (1, 3)])
    assert ts == 1
    assert g.m == 2
    assert g.center_ts[1] == 1


def test_second_insertion_extends_chain():
    g = build_d3()
    assert g.last_ts == 2
    assert g.center_ts[2] == 0
    assert g.center_ts[1] == 1
    assert g.center_ts[3] == 2
    snap = lambda r: {e for v in range(1, 4) for e in g.snapshot_adjacency(v, r)}
    assert snap(2) <= snap(1) <= snap(3)
    assert snap(3) == {(1, 2), (1, 3), (3, 2)}


def test_insert_not_incident():
    g = TimestampedGraph(3)
    with pytest.raises(NotIncident):
        g.apply_insert_centered(1, [(2, 3)])


def test_insert_duplicate():
    g = TimestampedGraph(3)
    g.apply_insert_centered(1, [(1, 2)])
    with pytest.raises(DuplicateEdge):
        g.apply_insert_centered(1, [(1, 2)])
    with pytest.raises(DuplicateEdge):
        g.apply_insert_centered(1, [(1, 3), (1, 3)])


def test_cycle_probe_rejects_and_rolls_back():
    g = TimestampedGraph(3, acyclic=True)
    g.apply_insert_centered(1, [(1, 2)])
    g.apply_insert_centered(2, [(2, 3)])
    before = g.edge_list()
    with pytest.raises(CycleCreated):
        g.apply_insert_centered(3, [(3, 1)])
    assert g.edge_list() == before
    assert g.last_ts == 2
    assert g.center_ts[3] == 0
    # a batch that closes a cycle through two fresh edges is also caught
    g3 = TimestampedGraph(3, acyclic=True)
    g3.apply_insert_centered(1, [(1, 2)])
    with pytest.raises(CycleCreated):
        g3.apply_insert_centered(3, [(2, 3), (3, 1)])
    assert g3.edge_list() == [(1, 2)]
    # general mode accepts the same batch
    h = TimestampedGraph(3)
    h.apply_insert_centered(1, [(1, 2)])
    h.apply_insert_centered(2, [(2, 3)])
    h.apply_insert_centered(3, [(3, 1)])
    assert h.m == 3


def test_delete_examples():
    g = build_d3()
    g.apply_delete([(1, 2)])
    assert g.m == 2
    with pytest.raises(MissingEdge):
        g.apply_delete([(9, 9)])
    g2 = build_d3()
    g2.apply_delete([(1, 2), (3, 2)])
    assert g2.m == 1
    reach = oracle.transitive_closure(3, g2.edge_list())
    assert not reach[1] >> 2 & 1


def test_snapshot_adjacency_examples():
    g = build_d3()
    assert list(g.snapshot_adjacency(1, 1, "out")) == [(1, 2), (1, 3)]
    assert list(g.snapshot_adjacency(3, 3, "out")) == [(3, 2)]
    assert list(g.snapshot_adjacency(3, 1, "out")) == []
    assert list(g.snapshot_adjacency(2, 2, "in")) == []
    assert list(g.snapshot_adjacency(2, 3, "in")) == [(1, 2), (3, 2)]


def test_snapshots_observe_deletions():
    g = build_d3()
    g.apply_delete([(1, 2)])
    assert list(g.snapshot_adjacency(1, 1, "out")) == [(1, 3)]
    assert sorted(oracle.snapshot_edges_of(g, 1)) == [(1, 3)]


def _apply_stream(g: TimestampedGraph, updates) -> None:
    for upd in updates:
        if isinstance(upd, InsertCentered):
            g.apply_insert_centered(upd.center, upd.edges)
        else:
            g.apply_delete(upd.edges)


@given(
    st.integers(min_value=2, max_value=10),
    st.integers(min_value=0, max_value=2**32),
    st.sampled_from(["dag", "general"]),
)
@PROPERTY_SETTINGS
def test_snapshot_nesting_on_random_histories(n, seed, mode):
    g = TimestampedGraph(n, acyclic=(mode == "dag"))
    updates = oracle.random_update_stream(n, 25, mode, 0.45, seed=seed)
    _apply_stream(g, updates)
    assert sorted(g.eid) == sorted(oracle.replay(n, updates))
    snaps = {r: set(oracle.snapshot_edges_of(g, r)) for r in range(1, n + 1)}
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if g.center_ts[u] <= g.center_ts[v]:
                assert snaps[u] <= snaps[v] or g.center_ts[u] == 0
        if g.center_ts[u] == 0:
            assert snaps[u] == set()
    if any(g.center_ts[r] for r in range(1, n + 1)):
        newest = max(range(1, n + 1), key=lambda r: g.center_ts[r])
        assert snaps[newest] == set(g.eid)


@given(
    st.integers(min_value=2, max_value=10),
    st.integers(min_value=0, max_value=2**32),
)
@PROPERTY_SETTINGS
def test_adjacency_stays_ts_sorted(n, seed):
    g = TimestampedGraph(n)
    updates = oracle.random_update_stream(n, 30, "general", 0.4, seed=seed)
    _apply_stream(g, updates)
    for v in range(1, n + 1):
        for direction in ("out", "in"):
            stamps = [g.ts_of(t, h) for t, h in g.snapshot_adjacency(v, v, direction)]
            assert stamps == sorted(stamps)
    # full lists via the newest snapshot
    if any(g.center_ts[r] for r in range(1, n + 1)):
        newest = max(range(1, n + 1), key=lambda r: g.center_ts[r])
        for v in range(1, n + 1):
            stamps = [
                g.ts_of(t, h) for t, h in g.snapshot_adjacency(v, newest, "out")
            ]
            assert stamps == sorted(stamps)
