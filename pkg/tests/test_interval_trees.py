import math

import numpy as np
import pytest

from app.config import SolverConfig
from app.schemas import GeneratorSpec
from core.services.exact_oracle import exact_pack
from core.services.hypergraph_ops import check_packing
from core.services.instance_compiler import build_hypergraph
from core.services.instance_generator import generate_instance
from core.services.interval_tree_packing import (
    _Extent, augment_greedily, build_interval_tree, levels_of, pack_boxes_into_points,
    pack_rects_into_points,
)
from domain.entities import Hyperedge, Hypergraph
from domain.exceptions import InvalidInstanceError
from domain.regions import Box, Direction, Disk, GeometricInstance, InstancePoint, InstanceRegion, Rect

def _rect_instance(rects, points, weights=None) -> GeometricInstance:
    weights = weights or [1.0] * len(rects)
    return GeometricInstance(
        Direction.PACK_REGIONS,
        tuple(InstancePoint(p, cap) for p, cap in points),
        tuple(InstanceRegion(Rect(lo, hi), w) for (lo, hi), w in zip(rects, weights)),
    )

def test_tree_partitions_intervals() -> None:
    rng = np.random.default_rng(0)
    lows = rng.uniform(0, 10, 30)
    extents = [_Extent((float(lo),), (float(lo + w),)) for lo, w in zip(lows, rng.uniform(0, 2, 30))]
    root = build_interval_tree(extents, list(range(30)), 0)
    seen = []
    for level in levels_of(root):
        for node in level:
            for i in node.stabbed:
                assert extents[i].lo[0] <= node.stab <= extents[i].hi[0]
            seen.extend(node.stabbed)
    assert sorted(seen) == list(range(30))

def test_levels_of_empty_tree() -> None:
    assert levels_of(build_interval_tree([], [], 0)) == []

def test_disjoint_rects_are_both_kept() -> None:
    inst = _rect_instance(
        [((0.0, 0.0), (1.0, 1.0)), ((2.0, 0.0), (3.0, 1.0))],
        [((0.5, 0.5), 1), ((2.5, 0.5), 1)],
    )
    solution = pack_rects_into_points(inst)
    assert solution.chosen == (0, 1)
    assert solution.weight == 2.0

def test_rects_through_one_point() -> None:
    inst = _rect_instance(
        [((0.0, 0.0), (1.0, 1.0)), ((0.2, 0.1), (1.2, 1.1)), ((0.4, 0.2), (1.4, 1.2))],
        [((0.5, 0.5), 1)],
    )
    solution = pack_rects_into_points(inst)
    assert solution.size == 1
    assert solution.feasible

def test_augment_fills_remaining_capacity() -> None:
    H = Hypergraph((1.0, 3.0, 2.0), (Hyperedge((0, 1), 1), Hyperedge((1, 2), 2)))
    assert augment_greedily(H, []) == [1, 2]
    assert augment_greedily(H, [0]) == [0, 2]

@pytest.mark.parametrize("seed", range(6))
def test_random_rects_are_feasible(seed) -> None:
    spec = GeneratorSpec(kind="random_rects", seed=seed, n_regions=8, n_points=12, cap_range=(1, 2))
    inst = generate_instance(spec)
    solution = pack_rects_into_points(inst, SolverConfig(seed=seed))
    H, _ = build_hypergraph(inst)
    assert check_packing(H, solution.chosen).feasible
    assert solution.weight >= 1.0
    assert solution == pack_rects_into_points(inst, SolverConfig(seed=seed))

def test_boxes_without_shared_points() -> None:
    boxes = [((0, 0, 0), (1, 1, 1)), ((2, 2, 2), (3, 3, 3)), ((0, 2, 0), (1, 3, 1))]
    inst = GeometricInstance(
        Direction.PACK_REGIONS,
        tuple(InstancePoint((lo[0] + 0.5, lo[1] + 0.5, lo[2] + 0.5), 1) for lo, _ in boxes),
        tuple(InstanceRegion(Box(lo, hi), 1.0) for lo, hi in boxes),
    )
    solution = pack_boxes_into_points(inst)
    assert solution.chosen == (0, 1, 2)

@pytest.mark.parametrize("seed", range(4))
def test_random_boxes_are_feasible(seed) -> None:
    spec = GeneratorSpec(kind="random_boxes", seed=seed, n_regions=8, n_points=15)
    inst = generate_instance(spec)
    solution = pack_boxes_into_points(inst, SolverConfig(seed=seed))
    assert solution.feasible
    assert solution.size >= 1

def test_interval_packing_rejects_other_regions() -> None:
    inst = GeometricInstance(
        Direction.PACK_REGIONS,
        (InstancePoint((0.0, 0.0), 1),),
        (InstanceRegion(Disk((0.0, 0.0), 1.0), 1.0),),
    )
    with pytest.raises(InvalidInstanceError):
        pack_rects_into_points(inst)
    points_first = GeometricInstance(
        Direction.PACK_POINTS,
        (InstancePoint((0.0, 0.0), 1.0),),
        (InstanceRegion(Rect((0.0, 0.0), (1.0, 1.0)), 1),),
    )
    with pytest.raises(InvalidInstanceError):
        pack_rects_into_points(points_first)

@pytest.mark.parametrize("seed", range(10))
def test_eight_rects_against_oracle(seed) -> None:
    spec = GeneratorSpec(kind="random_rects", seed=seed, n_regions=8, n_points=12, cap_range=(1, 2))
    inst = generate_instance(spec)
    solution = pack_rects_into_points(inst, SolverConfig(seed=seed))
    H, _ = build_hypergraph(inst)
    assert check_packing(H, solution.chosen).feasible
    assert solution.weight >= exact_pack(H).optimal_weight / (4 * math.ceil(math.log2(8)))

@pytest.mark.parametrize("seed", range(10))
def test_six_boxes_against_oracle(seed) -> None:
    spec = GeneratorSpec(kind="random_boxes", seed=seed, n_regions=6, n_points=10)
    inst = generate_instance(spec)
    solution = pack_boxes_into_points(inst, SolverConfig(seed=seed))
    H, _ = build_hypergraph(inst)
    assert check_packing(H, solution.chosen).feasible
    assert solution.weight >= exact_pack(H).optimal_weight / (4 * math.ceil(math.log2(6))) ** 3
