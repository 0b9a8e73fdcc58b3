import math

import pytest

from app.config import SolverConfig
from app.schemas import GeneratorSpec
from core.interfaces.packer import CanonicalCoverInterface
from core.services.exact_oracle import exact_pack
from core.services.hypergraph_ops import check_packing
from core.services.instance_compiler import build_hypergraph
from core.services.instance_generator import generate_instance
from core.services.rect_point_packing import RectCanonicalCover, pack_points_into_rects, split_rectangle
from core.services.unit_capacity_core import solve_unit_points
from domain.exceptions import InvalidInstanceError
from domain.regions import Direction, GeometricInstance, InstancePoint, InstanceRegion, Rect

def _points_in_rect(n: int, capacity: int, weights=None) -> GeometricInstance:
    weights = weights or [1.0] * n
    points = tuple(InstancePoint((0.1 + 0.8 * i / n, 0.15 + 0.7 * ((i * 3) % n) / n), w) for i, w in enumerate(weights))
    return GeometricInstance(Direction.PACK_POINTS, points, (InstanceRegion(Rect((0.0, 0.0), (1.0, 1.0)), capacity),))

def test_split_cuts_after_mass_exceeds_three() -> None:
    coords = [(float(i), 0.0) for i in range(4)]
    assert split_rectangle([0, 1, 2, 3], coords, [1.0] * 4, 6) == [(0, 1, 2, 3), ()]
    assert split_rectangle([0, 1, 2], coords, [1.0] * 3, 3) == [(0, 1, 2)]

def test_split_sorts_by_x() -> None:
    coords = [(2.0, 0.0), (0.0, 0.0), (1.0, 0.0)]
    assert split_rectangle([0, 1, 2], coords, [0.5] * 3, 2) == [(1, 2, 0)]

def test_split_rejects_overfull_rectangle() -> None:
    coords = [(float(i), 0.0) for i in range(3)]
    with pytest.raises(InvalidInstanceError):
        split_rectangle([0, 1, 2], coords, [2.0] * 3, 3)

def test_loose_capacity_keeps_every_point() -> None:
    solution = pack_points_into_rects(_points_in_rect(4, 5))
    assert solution.chosen == (0, 1, 2, 3)
    assert solution.bicriteria_bound == 2

def test_unit_rect_keeps_one_or_two_points() -> None:
    inst = _points_in_rect(5, 1, weights=[1.0, 2.0, 3.0, 4.0, 5.0])
    solution = pack_points_into_rects(inst)
    assert 1 <= solution.size <= 2
    assert solution.feasible

@pytest.mark.parametrize("seed", range(6))
def test_random_instances_respect_doubled_capacity(seed) -> None:
    spec = GeneratorSpec(kind="random_rects", seed=seed, direction="pack_points",
                         n_regions=6, n_points=14, cap_range=(1, 4), weight_range=(0.5, 2.0))
    inst = generate_instance(spec)
    solution = pack_points_into_rects(inst, SolverConfig(seed=seed))
    H, _ = build_hypergraph(inst)
    assert check_packing(H, solution.chosen, 2).feasible

def test_rank_space_cover_handles_copies() -> None:
    coords = [(0.0, 0.0), (1.0, 1.0), (2.0, 0.5)]
    provider = RectCanonicalCover(coords, [Rect((0.0, 0.0), (1.5, 1.5))])
    # 점 0 은 두 번 복제됨
    origin = [0, 0, 1, 2]
    pairs, covers = provider.build(origin, [(0, 1, 2)], 3)
    assert covers[0] is not None
    assert set().union(*map(set, covers[0])) == {0, 1, 2}
    assert (0, 1) in pairs or (1, 0) in pairs

def test_wrong_direction_is_rejected(flower) -> None:
    with pytest.raises(InvalidInstanceError):
        pack_points_into_rects(flower)

class _NoCover(CanonicalCoverInterface):
    def build(self, origin, piece_members, k):
        return frozenset(), [None] * len(piece_members)

def test_missing_covers_are_counted_as_fallbacks() -> None:
    chosen, fallbacks = solve_unit_points([1.0, 1.0, 1.0], [(0, 1), (1, 2)], _NoCover(), SolverConfig())
    assert chosen == [0, 2]
    assert fallbacks == 2

def test_report_carries_fallback_count() -> None:
    solution = pack_points_into_rects(_points_in_rect(4, 1))
    assert solution.to_dict()["cover_fallbacks"] == solution.cover_fallbacks >= 0

@pytest.mark.parametrize("seed", range(5))
def test_twenty_points_in_eight_rects(seed) -> None:
    spec = GeneratorSpec(kind="random_rects", seed=seed, direction="pack_points",
                         n_regions=8, n_points=20, cap_range=(1, 3))
    inst = generate_instance(spec)
    solution = pack_points_into_rects(inst, SolverConfig(seed=seed))
    H, _ = build_hypergraph(inst)
    assert check_packing(H, solution.chosen, 2).feasible
    assert solution.size >= 1

@pytest.mark.slow
def test_doubled_capacity_and_oracle_ratio_on_many_instances() -> None:
    for seed in range(1000):
        spec = GeneratorSpec(kind="random_rects", seed=seed, direction="pack_points",
                             n_regions=6, n_points=8 + seed % 9, cap_range=(1, 3))
        inst = generate_instance(spec)
        solution = pack_points_into_rects(inst, SolverConfig(seed=seed))
        H, _ = build_hypergraph(inst)
        assert check_packing(H, solution.chosen, 2).feasible
        optimum = exact_pack(H).optimal_weight
        energy = solution.lp_objective
        assert solution.weight >= optimum / (8 * max(1.0, math.log2(energy))) - 1e-9
