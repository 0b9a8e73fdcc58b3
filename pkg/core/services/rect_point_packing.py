# core/services/rect_point_packing.py - 사각형에 점 패킹 (이중 기준 β=2)

import math
from bisect import bisect_left, bisect_right
from typing import List, Optional, Sequence, Tuple

from loguru import logger

from app.config import SolverConfig
from core.interfaces.packer import CanonicalCoverInterface
from core.services.canonical_rects import canonical_rect_set
from core.services.hypergraph_ops import check_packing
from core.services.instance_compiler import build_hypergraph, containment_lists
from core.services.lp_relaxation import build_and_solve_lp
from core.services.unit_capacity_core import solve_unit_points
from domain.entities import PackingSolution
from domain.exceptions import InfeasibleOutputError, InvalidInstanceError
from domain.regions import Direction, GeometricInstance, Rect

BICRITERIA_BOUND = 2
PIECE_MASS_LIMIT = 3.0
MASS_EPS = 1e-9

def split_rectangle(members: Sequence[int], coords: Sequence[Tuple[float, float]],
                    mass: Sequence[float], capacity: int) -> List[Tuple[int, ...]]:
    """
    사각형을 왼쪽에서 오른쪽으로 훑으며 누적 질량이 3 을 넘을 때마다 자릅니다.

    조각마다 질량은 4 이하이고, 빈 조각을 붙여 정확히 ⌈cap/3⌉ 개를 반환합니다.

    Args:
        members: 사각형 안의 점 인덱스
        coords: 점 좌표
        mass: 분수해 값
        capacity: 사각형 용량

    Returns:
        List[Tuple[int, ...]]: 조각별 점 인덱스 (x, 인덱스 순)
    """
    target = math.ceil(capacity / 3)
    pieces: List[Tuple[int, ...]] = []
    current: List[int] = []
    accumulated = 0.0
    for v in sorted(members, key=lambda i: (coords[i][0], i)):
        current.append(v)
        accumulated += mass[v]
        if accumulated > PIECE_MASS_LIMIT + MASS_EPS:
            pieces.append(tuple(current))
            current, accumulated = [], 0.0
    if current:
        pieces.append(tuple(current))
    if len(pieces) > target:
        raise InvalidInstanceError(
            f"사각형 질량이 용량을 넘어 조각 {len(pieces)}개가 필요합니다 (허용 {target})"
        )
    pieces.extend(() for _ in range(target - len(pieces)))
    return pieces

class RectCanonicalCover(CanonicalCoverInterface):
    """순위 공간(기호 섭동)에서 정규 사각형 집합으로 조각을 덮는 제공자"""

    def __init__(self, coords: Sequence[Tuple[float, float]], piece_sources: Sequence[Rect]):
        self.coords = coords
        self.piece_sources = piece_sources

    def build(self, origin, piece_members, k):
        copy_index = [0] * len(origin)
        seen = {}
        for c, v in enumerate(origin):
            copy_index[c] = seen.get(v, 0)
            seen[v] = copy_index[c] + 1

        def ranks(axis: int) -> Tuple[List[int], List[float]]:
            order = sorted(range(len(origin)), key=lambda c: (self.coords[origin[c]][axis], origin[c], copy_index[c]))
            rank = [0] * len(origin)
            for r, c in enumerate(order):
                rank[c] = r
            return rank, [self.coords[origin[c]][axis] for c in order]

        x_rank, _ = ranks(0)
        y_rank, y_sorted = ranks(1)
        rank_points = [(float(x_rank[c]), float(y_rank[c])) for c in range(len(origin))]

        queries: List[Optional[Rect]] = []
        for members, source in zip(piece_members, self.piece_sources):
            if not members:
                queries.append(None)
                continue
            lo_y = bisect_left(y_sorted, source.lo[1])
            hi_y = bisect_right(y_sorted, source.hi[1]) - 1
            xs = [x_rank[c] for c in members]
            queries.append(Rect((float(min(xs)), float(lo_y)), (float(max(xs)), float(hi_y))))

        cset = canonical_rect_set(rank_points, k)
        covers = []
        for q in queries:
            ids = cset.cover(q) if q is not None else ()
            covers.append(None if ids is None else tuple(cset.members[i] for i in ids))
        return cset.conflict_edges, covers

def pack_points_into_rects(inst: GeometricInstance, config: Optional[SolverConfig] = None) -> PackingSolution:
    """
    가중치 점을 용량 사각형에 패킹합니다 (이중 기준 β=2).

    LP 를 풀고 사각형마다 ⌈cap/3⌉ 조각으로 자른 단위 용량 인스턴스를
    희소화 → 복제 → 정규 사각형 충돌 그래프 → Turán 독립 집합으로 풉니다.

    Args:
        inst: pack_points 방향, 영역은 모두 Rect
        config: 솔버 설정

    Returns:
        PackingSolution: 모든 사각형에서 |b ∩ S| ≤ max(2, cap(b))

    Raises:
        InvalidInstanceError: 방향이나 영역 종류가 맞지 않는 경우
        InfeasibleOutputError: β=2 재검증 실패 (발생하면 안 됨)
    """
    config = config or SolverConfig()
    if inst.direction != Direction.PACK_POINTS:
        raise InvalidInstanceError("사각형 점 패킹은 pack_points 방향만 지원합니다")
    for r in inst.regions:
        if type(r.region) is not Rect:
            raise InvalidInstanceError(f"rect 영역만 허용됩니다: {r.region.kind}")

    H, _ = build_hypergraph(inst)
    coords = [(float(p.coords[0]), float(p.coords[1])) for p in inst.points]
    x = build_and_solve_lp(H, config.resolved_lp_tol())

    pieces: List[Tuple[int, ...]] = []
    sources: List[Rect] = []
    for r, members in zip(inst.regions, containment_lists(inst)):
        capacity = int(r.value)
        if capacity >= len(members):
            continue
        for piece in split_rectangle(members, coords, x.values, capacity):
            pieces.append(piece)
            sources.append(r.region)

    weights = [float(p.value) for p in inst.points]
    chosen, fallbacks = solve_unit_points(weights, pieces, RectCanonicalCover(coords, sources), config)
    solution = check_packing(H, chosen, BICRITERIA_BOUND)
    if not solution.feasible:
        raise InfeasibleOutputError("β=2 이중 기준 검증 실패", solution=solution)
    logger.info(f"사각형 점 패킹 완료: 무게 {solution.weight:.6f} / LP {x.objective:.6f}")
    return PackingSolution(
        chosen=solution.chosen,
        weight=solution.weight,
        edge_loads=solution.edge_loads,
        bicriteria_bound=BICRITERIA_BOUND,
        feasible=True,
        lp_objective=x.objective,
        cover_fallbacks=fallbacks,
    )
