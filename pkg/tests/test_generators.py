import numpy as np
import pytest
from pydantic import ValidationError

from app.schemas import GeneratorSpec
from core.services.exact_oracle import exact_pack
from core.services.instance_compiler import build_hypergraph
from core.services.instance_generator import generate_instance
from domain.exceptions import InvalidInstanceError
from domain.regions import ClassTag, Direction

def _optimum(spec: GeneratorSpec) -> float:
    H, _ = build_hypergraph(generate_instance(spec))
    result = exact_pack(H)
    assert result.proven_optimal
    return result.optimal_weight

def test_flower_fits_both_disks(flower) -> None:
    assert flower.direction == Direction.PACK_REGIONS
    assert len(flower.regions) == 2
    assert _optimum(GeneratorSpec(kind="flower", seed=0)) == 2.0

def test_graph_reduction_single_edge() -> None:
    spec = GeneratorSpec(kind="graph_is_hard", seed=0, graph_vertices=2, graph_edges=[(0, 1)])
    inst = generate_instance(spec)
    assert inst.direction == Direction.PACK_POINTS
    assert inst.class_tag == ClassTag.FAT_TRIANGLE
    assert all(type(r.value) is int for r in inst.regions)
    assert all(type(p.value) is float for p in inst.points)
    assert _optimum(spec) == 1.0

@pytest.mark.parametrize("edges, expected", [
    ([(0, 1), (1, 2), (2, 3)], 2.0),
    ([(0, 1), (1, 2), (0, 2)], 2.0),
    ([(0, 1), (1, 2), (2, 3), (3, 0)], 2.0),
    ([], 4.0),
])
def test_graph_reduction_matches_independence_number(edges, expected) -> None:
    spec = GeneratorSpec(kind="graph_is_hard", seed=1, graph_vertices=4, graph_edges=edges)
    assert _optimum(spec) == expected

def test_graph_reduction_triangles_hold_only_their_endpoints() -> None:
    spec = GeneratorSpec(kind="graph_is_hard", seed=2, graph_vertices=6, graph_edges=[(0, 3), (1, 2), (4, 5)])
    H, _ = build_hypergraph(generate_instance(spec))
    assert sorted(tuple(sorted(e.vertices)) for e in H.edges) == [(0, 3), (1, 2), (4, 5)]

def test_matching_reduction_shares_one_point() -> None:
    spec = GeneratorSpec(kind="tri_matching_hard", seed=0, triples=[(0, 0, 0), (0, 1, 1)])
    inst = generate_instance(spec)
    assert len(inst.points) == 5
    assert _optimum(spec) == 1.0

def test_matching_reduction_disjoint_triples() -> None:
    spec = GeneratorSpec(kind="tri_matching_hard", seed=0, triples=[(0, 0, 0), (1, 1, 1), (0, 1, 1)])
    assert _optimum(spec) == 2.0

def test_same_spec_same_instance() -> None:
    spec = GeneratorSpec(kind="random_disks", seed=11, n_regions=5, n_points=9, cap_range=(1, 3))
    assert generate_instance(spec) == generate_instance(spec)
    other = generate_instance(GeneratorSpec(kind="random_disks", seed=12, n_regions=5, n_points=9))
    assert other != generate_instance(spec)

def test_random_values_follow_direction() -> None:
    spec = GeneratorSpec(kind="random_rects", seed=3, direction="pack_points", n_regions=4, n_points=6,
                         cap_range=(2, 5), weight_range=(0.5, 1.5))
    inst = generate_instance(spec)
    assert all(2 <= r.value <= 5 and isinstance(r.value, int) for r in inst.regions)
    assert all(0.5 <= p.value <= 1.5 for p in inst.points)

@pytest.mark.parametrize("fields", [
    {"kind": "tri_matching_hard", "triples": []},
    {"kind": "tri_matching_hard", "triples": [(0, 0, -1)]},
    {"kind": "tri_matching_hard", "triples": [(0, 1, 2), (0, 1, 2)]},
    {"kind": "graph_is_hard", "graph_vertices": 2, "graph_edges": [(0, 0)]},
    {"kind": "graph_is_hard", "graph_vertices": 2, "graph_edges": [(0, 5)]},
    {"kind": "graph_is_hard", "graph_vertices": 0},
])
def test_invalid_reduction_input(fields) -> None:
    with pytest.raises(InvalidInstanceError):
        generate_instance(GeneratorSpec(seed=0, **fields))

@pytest.mark.parametrize("fields", [
    {"cap_range": (0, 1)},
    {"weight_range": (2.0, 1.0)},
    {"radius_range": (0.0, 0.1)},
    {"seed": -1},
    {"kind": "spiral"},
])
def test_spec_validation(fields) -> None:
    values = {"kind": "random_disks", "seed": 0, **fields}
    with pytest.raises(ValidationError):
        GeneratorSpec(**values)

def _max_matching(triples) -> int:
    best = 0
    for mask in range(1 << len(triples)):
        chosen = [t for i, t in enumerate(triples) if mask >> i & 1]
        if len(chosen) > best and all(len({t[c] for t in chosen}) == len(chosen) for c in range(3)):
            best = len(chosen)
    return best

def _max_independent_set(n: int, edges) -> int:
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size > best and not any(mask >> u & 1 and mask >> v & 1 for u, v in edges):
            best = size
    return best

@pytest.mark.slow
def test_matching_reduction_matches_brute_force() -> None:
    rng = np.random.default_rng(21)
    for index in range(60):
        count = int(rng.integers(1, 13))
        triples = sorted({tuple(int(c) for c in rng.integers(0, 5, 3)) for _ in range(count)})
        spec = GeneratorSpec(kind="tri_matching_hard", seed=index, triples=triples)
        assert _optimum(spec) == _max_matching(triples)

@pytest.mark.slow
def test_graph_reduction_matches_brute_force() -> None:
    rng = np.random.default_rng(22)
    for index in range(60):
        n = int(rng.integers(1, 13))
        density = float(rng.uniform(0.1, 0.6))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density]
        spec = GeneratorSpec(kind="graph_is_hard", seed=index, graph_vertices=n, graph_edges=edges)
        assert _optimum(spec) == _max_independent_set(n, edges)
