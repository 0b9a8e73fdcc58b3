import networkx as nx
import pytest

from app.schemas import GeneratorSpec
from core.services.exact_oracle import exact_pack
from core.services.instance_compiler import build_hypergraph
from core.services.instance_generator import generate_instance
from core.services.local_search import (
    exchange_graph, local_search_disks, prune_dominated, verify_b_local_optimality,
)
from domain.exceptions import InvalidInstanceError, SearchBudgetExceeded
from domain.regions import Direction, Disk, GeometricInstance, InstancePoint, InstanceRegion

def _disks(centers, points, radius=1.0) -> GeometricInstance:
    return GeometricInstance(
        Direction.PACK_REGIONS,
        tuple(InstancePoint(p, 1) for p in points),
        tuple(InstanceRegion(Disk(c, radius), 1.0) for c in centers),
        class_tag="disk",
    )

@pytest.fixture
def bridge() -> GeometricInstance:
    # 가운데 원판이 양쪽 점을 모두 덮음
    return _disks([(0.0, 0.0), (-1.5, 0.0), (1.5, 0.0)], [(-0.75, 0.0), (0.75, 0.0)])

def test_disjoint_disks_are_both_kept() -> None:
    inst = _disks([(0.0, 0.0), (5.0, 0.0)], [(0.0, 0.0), (5.0, 0.0)])
    assert local_search_disks(inst).size == 2

def test_disks_through_one_point() -> None:
    inst = _disks([(0.5, 0.0), (-0.5, 0.0), (0.0, 0.5)], [(0.0, 0.0)])
    solution = local_search_disks(inst)
    assert solution.size == 1
    assert solution.feasible

def test_bridge_disk_is_replaced(bridge) -> None:
    assert local_search_disks(bridge).chosen == (1, 2)

def test_verify_returns_improving_swap(bridge) -> None:
    assert verify_b_local_optimality(bridge, [1, 2]) == (True, None)
    optimal, witness = verify_b_local_optimality(bridge, [0])
    assert not optimal
    assert witness == ((1, 2), (0,))

def test_verify_budget_and_feasibility(bridge) -> None:
    with pytest.raises(SearchBudgetExceeded):
        verify_b_local_optimality(bridge, [1, 2], b=5)
    with pytest.raises(InvalidInstanceError):
        verify_b_local_optimality(bridge, [0, 1])

def test_local_search_preconditions(bridge) -> None:
    with pytest.raises(InvalidInstanceError):
        local_search_disks(bridge, b=0)
    heavy = GeometricInstance(
        Direction.PACK_REGIONS,
        bridge.points,
        tuple(InstanceRegion(r.region, 2.0) for r in bridge.regions),
        class_tag="disk",
    )
    with pytest.raises(InvalidInstanceError):
        local_search_disks(heavy)

def test_prune_dominated() -> None:
    sets = [frozenset({0, 1}), frozenset({0}), frozenset({1}), frozenset({0}), frozenset()]
    assert prune_dominated(sets) == [1, 2, 4]

def test_exchange_graph_is_bipartite(bridge) -> None:
    graph = exchange_graph(bridge, [1, 2], [0])
    assert nx.is_bipartite(graph)
    assert set(graph.edges) == {(("first", 1), ("second", 0)), (("first", 2), ("second", 0))}

@pytest.mark.parametrize("seed", range(4))
def test_random_output_is_locally_optimal(seed) -> None:
    spec = GeneratorSpec(kind="random_disks", seed=seed, n_regions=12, n_points=25, radius_range=(0.1, 0.3))
    inst = generate_instance(spec)
    solution = local_search_disks(inst, b=2)
    assert solution.feasible
    optimal, witness = verify_b_local_optimality(inst, solution.chosen, b=2)
    assert optimal, witness

def test_three_disks_with_lens_points() -> None:
    centers = [(0.0, 0.0), (1.0, 0.0), (0.5, 0.8)]
    lenses = [(0.5, 0.0), (0.75, 0.4), (0.25, 0.4)]
    solution = local_search_disks(_disks(centers, lenses, radius=0.7))
    assert solution.size == 1

@pytest.mark.slow
def test_local_search_is_near_optimal_on_average() -> None:
    ratios = []
    for seed in range(50):
        spec = GeneratorSpec(kind="random_disks", seed=seed, n_regions=12, n_points=20,
                             radius_range=(0.1, 0.3))
        inst = generate_instance(spec)
        solution = local_search_disks(inst, b=3)
        optimal, witness = verify_b_local_optimality(inst, solution.chosen, b=3)
        assert optimal, witness
        H, _ = build_hypergraph(inst)
        ratios.append(solution.size / exact_pack(H).optimal_weight)
    assert sum(ratios) / len(ratios) >= 0.75
