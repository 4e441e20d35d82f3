"""General-digraph reduction engine: fixtures, minimality, oracle checks."""

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from dyntr import DeleteSet, InsertCentered, TrDag, TrGeneral, minimal_scss
from dyntr.errors import MissingEdge, NotStronglyConnected
from dyntr.oracle import (
    brute_redundant,
    brute_tr_dag,
    random_update_stream,
    recompute_general_ledgers,
    validity_triple,
)

PROPERTY_SETTINGS = settings(
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


class TestMinimalScss:
    def test_triangle_is_kept_whole(self):
        cycle = [(1, 2), (2, 3), (3, 1)]
        assert minimal_scss([1, 2, 3], cycle) == set(cycle)

    def test_chord_is_dropped(self):
        edges = [(1, 2), (2, 3), (3, 1), (1, 3)]
        assert minimal_scss([1, 2, 3], edges) == {(1, 2), (2, 3), (3, 1)}

    def test_single_vertex(self):
        assert minimal_scss([4], []) == set()

    def test_disconnected_input_rejected(self):
        with pytest.raises(NotStronglyConnected):
            minimal_scss([1, 2], [(1, 2)])

    def test_probe_order_decides_survivors(self):
        # the direct two-cycle is probed first and dropped; the four-cycle
        # probed afterwards has become irreplaceable and survives
        edges = [(1, 3), (3, 2), (2, 4), (4, 1)]
        extra = [(1, 2), (2, 1)]
        kept = minimal_scss([1, 2, 3, 4], extra + edges)
        assert kept == set(edges)


def two_cycle_engine():
    eng = TrGeneral(5)
    eng.insert_centered(1, [(1, 2), (2, 1)])
    eng.insert_centered(3, [(3, 4), (4, 3)])
    eng.insert_centered(1, [(1, 3)])
    eng.insert_centered(2, [(2, 4)])
    return eng


class TestInsert:
    def test_marked_edge_represents_its_group(self):
        eng = two_cycle_engine()
        group = eng.scc.parallel_group(1, 3)
        assert group.marked == (1, 3)
        tr = eng.tr_edges()
        assert tr == [(1, 2), (1, 3), (2, 1), (3, 4), (4, 3)]
        assert (2, 4) not in tr
        live = eng.g.edge_list()
        assert validity_triple(eng.g.n, live, tr) is None

    def test_middle_component_starves_the_marked_edge(self):
        eng = two_cycle_engine()
        eng.insert_centered(5, [(1, 5), (5, 3)])
        count, _, _ = eng.ledgers()
        assert count[(1, 3)] >= 1
        tr = eng.tr_edges()
        assert (1, 3) not in tr
        assert (2, 4) not in tr
        assert validity_triple(eng.g.n, eng.g.edge_list(), tr) is None

    def test_cycle_from_empty(self):
        eng = TrGeneral(3)
        eng.insert_centered(1, [(1, 2)])
        eng.insert_centered(2, [(2, 3)])
        eng.insert_centered(3, [(3, 1)])
        assert eng.tr_edges() == [(1, 2), (2, 3), (3, 1)]


class TestDelete:
    def test_surviving_sibling_is_promoted(self):
        eng = two_cycle_engine()
        eng.delete_edges([(1, 3)])
        group = eng.scc.parallel_group(2, 4)
        assert group.marked == (2, 4)
        tr = eng.tr_edges()
        assert (2, 4) in tr
        assert validity_triple(eng.g.n, eng.g.edge_list(), tr) is None

    def test_component_split_updates_condensation(self):
        eng = two_cycle_engine()
        eng.delete_edges([(1, 2)])
        group = eng.scc.parallel_group(2, 1)
        assert group.size == 1
        tr = eng.tr_edges()
        assert validity_triple(eng.g.n, eng.g.edge_list(), tr) is None

    def test_down_to_empty(self):
        eng = TrGeneral(3)
        eng.insert_centered(1, [(1, 2), (2, 1)])
        eng.delete_edges([(1, 2), (2, 1)])
        assert eng.tr_edges() == []

    def test_missing_edge_rejected(self):
        eng = two_cycle_engine()
        with pytest.raises(MissingEdge):
            eng.delete_edges([(4, 2)])
        assert validity_triple(
            eng.g.n, eng.g.edge_list(), eng.tr_edges()
        ) is None


def test_acyclic_history_matches_dag_engine():
    general = TrGeneral(3)
    dag = TrDag(3)
    for center, batch in [(1, [(1, 2), (1, 3)]), (3, [(3, 2)])]:
        general.insert_centered(center, batch)
        dag.insert_centered(center, batch)
    assert general.tr_edges() == dag.tr_edges() == [(1, 3), (3, 2)]
    general.delete_edges([(1, 3)])
    dag.delete_edges([(1, 3)])
    assert general.tr_edges() == dag.tr_edges() == [(1, 2), (3, 2)]


@st.composite
def general_streams(draw):
    n = draw(st.integers(min_value=2, max_value=10))
    steps = draw(st.integers(min_value=5, max_value=40))
    density = draw(st.sampled_from([0.0, 0.25, 0.45]))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    stream = random_update_stream(
        n, steps, mode="general", density=density, seed=seed
    )
    return n, stream


def drive(eng, upd):
    if isinstance(upd, InsertCentered):
        eng.insert_centered(upd.center, upd.edges)
    else:
        assert isinstance(upd, DeleteSet)
        eng.delete_edges(upd.edges)


@given(general_streams())
@PROPERTY_SETTINGS
def test_validity_triple_after_every_update(case):
    n, updates = case
    eng = TrGeneral(n)
    for upd in updates:
        drive(eng, upd)
        tr = eng.tr_edges()
        assert validity_triple(n, eng.g.edge_list(), tr) is None


@given(general_streams())
@PROPERTY_SETTINGS
def test_group_exclusivity(case):
    n, updates = case
    eng = TrGeneral(n)
    for upd in updates:
        drive(eng, upd)
        tr = set(eng.tr_edges())
        for group in eng.scc.groups.values():
            assert len(tr.intersection(group.members)) <= 1


@given(general_streams())
@PROPERTY_SETTINGS
def test_ledgers_match_definitional_recomputation(case):
    n, updates = case
    eng = TrGeneral(n)
    for upd in updates:
        drive(eng, upd)
        count, tx, ty = eng.ledgers()
        want_count, want_tx, want_ty = recompute_general_ledgers(eng.g)
        assert count == want_count
        assert tx == want_tx
        assert ty == want_ty


@given(general_streams())
@PROPERTY_SETTINGS
def test_redundancy_query_matches_brute_force(case):
    n, updates = case
    eng = TrGeneral(n)
    for upd in updates:
        drive(eng, upd)
        live = eng.g.edge_list()
        for x, y in live:
            assert eng.is_redundant(x, y) == brute_redundant(n, live, x, y)


@st.composite
def dag_cases(draw):
    n = draw(st.integers(min_value=2, max_value=10))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return n, random_update_stream(n, 30, mode="dag", seed=seed)


@given(dag_cases())
@PROPERTY_SETTINGS
def test_dag_streams_through_general_engine(case):
    n, updates = case
    eng = TrGeneral(n)
    for upd in updates:
        drive(eng, upd)
        assert eng.tr_edges() == sorted(brute_tr_dag(n, eng.g.edge_list()))
