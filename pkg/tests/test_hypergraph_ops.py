import pytest

from conftest import make_k3
from core.services.hypergraph_ops import (
    check_packing, count_conflicts, enumerate_conflicts, induced_subhypergraph,
    minimum_capacity, relax_capacities,
)
from domain.entities import Conflict, Hyperedge, Hypergraph
from domain.exceptions import ConflictBudgetExceeded, InvalidInstanceError

def test_minimum_capacity(k3) -> None:
    assert minimum_capacity(k3) == 1
    H = Hypergraph((1.0,) * 4, (Hyperedge((0, 1), 2), Hyperedge((1, 2), 5), Hyperedge((2, 3), 3)))
    assert minimum_capacity(H) == 2
    assert minimum_capacity(Hypergraph((1.0, 1.0))) is None

def test_induced_keeps_shrunken_edges(k3) -> None:
    sub = induced_subhypergraph(k3, {0, 1})
    assert sub.num_vertices == 2
    assert frozenset({0, 1}) in sub.edge_sets
    # {1,2} 과 {0,2} 는 한 점 간선으로 남음
    assert sorted(len(e) for e in sub.edges) == [1, 1, 2]
    assert all(e.capacity == 1 for e in sub.edges)
    assert sub.index_map == (0, 1)

def test_induced_identity_and_empty(k3) -> None:
    full = induced_subhypergraph(k3, range(3))
    assert full.edge_sets == k3.edge_sets
    assert full.index_map == (0, 1, 2)
    empty = induced_subhypergraph(k3, set())
    assert empty.num_vertices == 0
    assert empty.num_edges == 0

def test_induced_reindexes_and_composes_index_map() -> None:
    H = Hypergraph((1.0, 2.0, 3.0, 4.0), (Hyperedge((1, 3), 1),), vertex_labels=("a", "b", "c", "d"))
    sub = induced_subhypergraph(H, {1, 3})
    assert sub.vertex_weights == (2.0, 4.0)
    assert sub.vertex_labels == ("b", "d")
    assert sub.edges[0].vertices == (0, 1)
    nested = induced_subhypergraph(sub, {1})
    assert nested.index_map == (3,)

def test_induced_rejects_out_of_range(k3) -> None:
    with pytest.raises(InvalidInstanceError):
        induced_subhypergraph(k3, {0, 5})

def test_check_packing_examples(k3) -> None:
    single = check_packing(k3, {0})
    assert single.feasible
    assert single.weight == 1.0
    assert not check_packing(k3, {0, 1}).feasible
    relaxed = check_packing(k3, {0, 1}, beta=2)
    assert relaxed.feasible
    assert relaxed.bicriteria_bound == 2
    assert relaxed.edge_loads == (2, 1, 1)

def test_check_packing_validation(k3) -> None:
    with pytest.raises(InvalidInstanceError):
        check_packing(k3, {3})
    with pytest.raises(InvalidInstanceError):
        check_packing(k3, {0}, beta=0)

def test_enumerate_conflicts_examples(k3) -> None:
    conflicts = enumerate_conflicts(k3).collect()
    assert [c.vertices for c in conflicts] == [(0, 1), (1, 2), (0, 2)]
    assert all(c.order == 1 for c in conflicts)

    triple = Hypergraph((1.0,) * 3, (Hyperedge((0, 1, 2), 2),))
    assert [c.vertices for c in enumerate_conflicts(triple)] == [(0, 1, 2)]

    quad = Hypergraph((1.0,) * 4, (Hyperedge((0, 1, 2, 3), 2),))
    found = enumerate_conflicts(quad).collect()
    assert len(found) == 4
    assert count_conflicts(quad) == 4

def test_enumerate_conflicts_restricted_to_subset(k3) -> None:
    conflicts = enumerate_conflicts(k3, {0, 1}).collect()
    assert [c.vertices for c in conflicts] == [(0, 1)]
    assert count_conflicts(k3, {0, 1}) == 1
    assert count_conflicts(k3, {0}) == 0

def test_conflict_budget_truncates(k3) -> None:
    stream = enumerate_conflicts(k3, budget=2)
    assert len(list(stream)) == 2
    assert stream.truncated
    with pytest.raises(ConflictBudgetExceeded) as info:
        enumerate_conflicts(k3, budget=2).collect(require_complete=True)
    assert info.value.seen == 2

def test_conflict_size_must_match_order() -> None:
    with pytest.raises(InvalidInstanceError):
        Conflict((0, 1, 2), witness_edge=0, order=1)

def test_relax_capacities() -> None:
    H = Hypergraph((1.0,) * 4, (Hyperedge((0, 1), 1), Hyperedge((1, 2), 3), Hyperedge((2, 3), 2)))
    assert [e.capacity for e in relax_capacities(H, 2).edges] == [2, 3, 2]
    assert relax_capacities(H, 1).edges == H.edges
    assert [e.capacity for e in relax_capacities(H, 7).edges] == [7, 7, 7]
    with pytest.raises(InvalidInstanceError):
        relax_capacities(H, 0)

def test_hypergraph_validation() -> None:
    with pytest.raises(InvalidInstanceError):
        Hyperedge((0, 0), 1)
    with pytest.raises(InvalidInstanceError):
        Hyperedge((0, 1), 0)
    with pytest.raises(InvalidInstanceError):
        Hypergraph((1.0, -1.0))
    with pytest.raises(InvalidInstanceError):
        Hypergraph((1.0,), (Hyperedge((0, 1), 1),))

def test_hypergraph_dict_round_trip() -> None:
    H = make_k3(capacity=2)
    again = Hypergraph.from_dict(H.to_dict())
    assert again.vertex_weights == H.vertex_weights
    assert again.edges == H.edges
    with pytest.raises(InvalidInstanceError):
        Hypergraph.from_dict({"vertices": [{"weight": 1}]})
