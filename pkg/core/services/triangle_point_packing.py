# core/services/triangle_point_packing.py - 뚱뚱한 삼각형에 점 패킹 (이중 기준 β=9)

import math
from typing import Dict, List, Optional, Sequence, Set, Tuple

from loguru import logger

from app.config import SolverConfig
from core.interfaces.packer import CanonicalCoverInterface
from core.services.canonical_triangles import canonical_fat_regions
from core.services.geometry import region_contains, triangle_fatness
from core.services.hypergraph_ops import check_packing
from core.services.instance_compiler import build_hypergraph, containment_lists
from core.services.lp_relaxation import build_and_solve_lp
from core.services.triangle_cover import cover_triangle_by_measure
from core.services.unit_capacity_core import solve_unit_points
from domain.entities import PackingSolution
from domain.exceptions import InfeasibleOutputError, InvalidInstanceError
from domain.regions import Direction, GeometricInstance, Triangle

BICRITERIA_BOUND = 9
PIECE_MASS = 4 * 18 * 9

class FatTriangleCanonicalCover(CanonicalCoverInterface):
    """
    정규 뚱뚱한 영역으로 조각을 덮는 제공자.

    한 점의 복제본은 같은 위치에 있으므로 영역은 원래 점 위에서 열거한 뒤 복제본으로 펼칩니다.
    """

    def __init__(self, coords: Sequence[Tuple[float, float]], piece_triangles: Sequence[Triangle],
                 config: SolverConfig):
        self.coords = coords
        self.piece_triangles = piece_triangles
        self.config = config

    def build(self, origin, piece_members, k):
        copies_of: Dict[int, List[int]] = {}
        for c, v in enumerate(origin):
            copies_of.setdefault(v, []).append(c)
        originals = sorted(copies_of)
        local_k = max((len({origin[c] for c in members}) for members in piece_members), default=1)

        cset = canonical_fat_regions(
            [self.coords[v] for v in originals],
            max(local_k, 1),
            self.config.fatness_bound,
            queries=self.piece_triangles,
            families=self.config.orientation_families,
        )
        expanded = [
            tuple(sorted(c for i in region.members for c in copies_of[originals[i]]))
            for region in cset.regions
        ]
        pairs: Set[Tuple[int, int]] = set()
        for members in expanded:
            pairs.update((a, b) for i, a in enumerate(members) for b in members[i + 1:])

        covers = []
        for pid in range(len(piece_members)):
            ids = cset.cover_map.get(pid)
            covers.append(None if ids is None else tuple(expanded[rid] for rid in ids))
        return frozenset(pairs), covers

def _validate(inst: GeometricInstance, fatness_bound: float) -> None:
    if inst.direction != Direction.PACK_POINTS:
        raise InvalidInstanceError("뚱뚱한 삼각형 점 패킹은 pack_points 방향만 지원합니다")
    for r in inst.regions:
        if type(r.region) is not Triangle:
            raise InvalidInstanceError(f"triangle 영역만 허용됩니다: {r.region.kind}")
        fatness = triangle_fatness(r.region)
        if fatness > fatness_bound * (1 + 1e-9):
            raise InvalidInstanceError(f"뚱뚱함 {fatness:.4f} 이 상한 {fatness_bound} 을 넘습니다")

def _cover_pieces(t: Triangle, members: Sequence[int], coords: Sequence[Tuple[float, float]],
                  mass: Sequence[float], capacity: int) -> List[Tuple[Triangle, Tuple[int, ...]]]:
    """질량이 PIECE_MASS 이하인 조각들로 삼각형을 덮습니다. 조각 수 ≤ 18⌈cap/c⌉."""
    energy = math.fsum(mass[v] for v in members)
    if capacity <= PIECE_MASS or energy <= PIECE_MASS:
        return [(t, tuple(members))]
    heaviest = max(mass[v] for v in members)
    k = math.ceil(capacity / PIECE_MASS)
    k = min(k, max(1, math.floor(energy / heaviest)))
    cover = cover_triangle_by_measure(t, [(coords[v], mass[v]) for v in members], k)
    return [
        (piece, tuple(v for v in members if region_contains(piece, coords[v])))
        for piece in cover.pieces
    ]

def pack_points_into_fat_triangles(inst: GeometricInstance,
                                   config: Optional[SolverConfig] = None) -> PackingSolution:
    """
    가중치 점을 용량 있는 뚱뚱한 삼각형에 패킹합니다 (이중 기준 β=9).

    Args:
        inst: pack_points 방향, 영역은 뚱뚱함 상한 이하의 Triangle
        config: 솔버 설정 (fatness_bound, orientation_families, seed)

    Returns:
        PackingSolution: 모든 삼각형에서 |t ∩ S| ≤ max(9, cap(t))

    Raises:
        InvalidInstanceError: 방향, 영역 종류, 뚱뚱함 조건 위반
        DeskScaleExceededError: 정규 영역 열거 상한 초과
        InfeasibleOutputError: β=9 재검증 실패 (발생하면 안 됨)
    """
    config = config or SolverConfig()
    _validate(inst, config.fatness_bound)

    H, _ = build_hypergraph(inst)
    coords = [(float(p.coords[0]), float(p.coords[1])) for p in inst.points]
    x = build_and_solve_lp(H, config.resolved_lp_tol())

    pieces: List[Tuple[int, ...]] = []
    triangles: List[Triangle] = []
    for r, members in zip(inst.regions, containment_lists(inst)):
        capacity = int(r.value)
        if capacity >= len(members):
            continue
        for triangle, piece in _cover_pieces(r.region, members, coords, x.values, capacity):
            pieces.append(piece)
            triangles.append(triangle)
    logger.info(f"뚱뚱한 삼각형 단위 조각 {len(pieces)}개")

    weights = [float(p.value) for p in inst.points]
    chosen, fallbacks = solve_unit_points(weights, pieces, FatTriangleCanonicalCover(coords, triangles, config), config)
    solution = check_packing(H, chosen, BICRITERIA_BOUND)
    if not solution.feasible:
        raise InfeasibleOutputError("β=9 이중 기준 검증 실패", solution=solution)
    logger.info(f"뚱뚱한 삼각형 점 패킹 완료: 무게 {solution.weight:.6f} / LP {x.objective:.6f}")
    return PackingSolution(
        chosen=solution.chosen,
        weight=solution.weight,
        edge_loads=solution.edge_loads,
        bicriteria_bound=BICRITERIA_BOUND,
        feasible=True,
        lp_objective=x.objective,
        cover_fallbacks=fallbacks,
    )
