# core/services/canonical_triangles.py - 뚱뚱한 삼각형용 정규 영역 (데스크 규모 전수 열거)

import math
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np
from loguru import logger

from app.config import get_settings
from core.services.geometry import region_contains, triangle_fatness
from domain.exceptions import DeskScaleExceededError, GeneralPositionError, InvalidInstanceError
from domain.regions import CanonicalFatRegionSet, CanonicalRegion, Triangle

MAX_COVER_PIECES = 9
SINGLETON_FAMILY = -1
FATNESS_RTOL = 1e-9

Point2 = Tuple[float, float]

class _FamilyFrame:
    """각도 2πf/F 만큼 돌린 좌표계에서 직각 이등변 삼각형 {u ≥ u0, v ≥ v0, u+v ≤ s}"""

    def __init__(self, points: np.ndarray, family: int, families: int):
        theta = 2.0 * math.pi * family / families
        self.family = family
        self.cos, self.sin = math.cos(theta), math.sin(theta)
        self.u = points[:, 0] * self.cos + points[:, 1] * self.sin
        self.v = -points[:, 0] * self.sin + points[:, 1] * self.cos
        self.w = self.u + self.v

    def prefix_order(self, a: int, b: int) -> np.ndarray:
        """a 를 왼쪽 변, b 를 아래 변의 증인으로 하는 후보를 u+v 순으로 정렬"""
        mask = (self.u >= self.u[a]) & (self.v >= self.v[b])
        idx = np.nonzero(mask)[0]
        return idx[np.lexsort((idx, self.w[idx]))]

    def witness(self, a: int, b: int, last: int) -> Tuple[Point2, Point2, Point2]:
        u0, v0, s = float(self.u[a]), float(self.v[b]), float(self.w[last])
        local = ((u0, v0), (s - v0, v0), (u0, s - u0))
        return tuple(
            (u * self.cos - v * self.sin, u * self.sin + v * self.cos) for u, v in local
        )

def _check_distinct(points: Sequence[Point2]) -> None:
    seen: Dict[Point2, int] = {}
    for i, p in enumerate(points):
        if p in seen:
            raise GeneralPositionError(f"점 {seen[p]} 와 {i} 의 좌표가 같습니다", indices=(seen[p], i))
        seen[p] = i

class _Enumerator:
    def __init__(self, points: Sequence[Point2], k: int, families: int):
        self.points = points
        self.k = k
        array = np.asarray(points, dtype=float).reshape(-1, 2)
        self.frames = [_FamilyFrame(array, f, families) for f in range(families)]
        self.regions: Dict[FrozenSet[int], CanonicalRegion] = {}

    def add_singletons(self, indices: Sequence[int]) -> None:
        for i in indices:
            members = frozenset((i,))
            if members not in self.regions:
                p = tuple(float(c) for c in self.points[i])
                self.regions[members] = CanonicalRegion(members, SINGLETON_FAMILY, (p, p, p))

    def enumerate(self, witnesses: Sequence[int], allowed: Optional[Set[int]] = None) -> None:
        """
        증인 쌍 (a, b) 과 u+v 접두사로 실현되는 부분 집합을 모읍니다.

        allowed 가 주어지면 그 밖의 점이 접두사에 들어오는 순간 멈춥니다.
        """
        for frame in self.frames:
            for a in witnesses:
                for b in witnesses:
                    order = frame.prefix_order(a, b)
                    members: List[int] = []
                    for idx in order[: self.k]:
                        idx = int(idx)
                        if allowed is not None and idx not in allowed:
                            break
                        members.append(idx)
                        key = frozenset(members)
                        if key not in self.regions:
                            self.regions[key] = CanonicalRegion(key, frame.family, frame.witness(a, b, idx))

class _FatResolver:
    def __init__(self, points: Sequence[Point2], regions: Sequence[CanonicalRegion], k: int, alpha_max: float):
        self.points = points
        self.regions = regions
        self.k = k
        self.alpha_max = alpha_max
        self.by_point: Dict[int, List[int]] = {}
        for rid, region in enumerate(regions):
            for i in region.members:
                self.by_point.setdefault(i, []).append(rid)

    def inside(self, query: Triangle) -> List[int]:
        return [i for i, p in enumerate(self.points) if region_contains(query, p)]

    def __call__(self, query: Triangle) -> Optional[Tuple[int, ...]]:
        if triangle_fatness(query) > self.alpha_max * (1 + FATNESS_RTOL):
            return None
        inside = set(self.inside(query))
        if len(inside) > self.k:
            return None
        if not inside:
            return ()
        candidates = sorted({
            rid for i in inside for rid in self.by_point.get(i, ())
            if self.regions[rid].members <= inside
        })
        uncovered = set(inside)
        chosen: List[int] = []
        while uncovered:
            best = max(candidates, key=lambda rid: (len(self.regions[rid].members & uncovered), -rid), default=None)
            if best is None or not self.regions[best].members & uncovered:
                return None
            chosen.append(best)
            uncovered -= self.regions[best].members
            if len(chosen) > MAX_COVER_PIECES:
                logger.warning(
                    f"질의 덮개가 {MAX_COVER_PIECES}조각을 넘어 덮개 없음으로 처리합니다 (점 {len(inside)}개, k={self.k})"
                )
                return None
        return tuple(chosen)

def canonical_fat_regions(points: Sequence[Point2], k: int, alpha_max: float,
                          queries: Optional[Sequence[Triangle]] = None,
                          families: int = 8) -> CanonicalFatRegionSet:
    """
    α-뚱뚱한 삼각형으로 실현되는 크기 ≤ k 점 부분 집합을 전수 열거합니다.

    방향 가족마다 돌린 직각 이등변 삼각형의 왼쪽 변 증인 a, 아래 변 증인 b 를 고르고
    u+v 접두사를 정규 영역으로 삼습니다. 한 점짜리 영역은 항상 들어갑니다.
    queries 가 주어지면 각 질의 안의 점만 증인으로 쓰고 질의 점 집합의 부분 집합만 남깁니다.

    Args:
        points: 서로 다른 2차원 점
        k: 영역당 최대 점 수
        alpha_max: 질의 삼각형의 뚱뚱함 상한
        queries: cover_map 을 채울 질의 삼각형 (질의 제한 모드)
        families: 방향 가족 수

    Returns:
        CanonicalFatRegionSet: 정규 영역과 질의별 ≤9 조각 덮개 (정확한 점 집합 일치)

    Raises:
        DeskScaleExceededError: 점 수가 데스크 규모 상한을 넘는 경우
        GeneralPositionError: 좌표가 같은 점이 있는 경우
    """
    bound = get_settings().DESK_SCALE_POINTS
    if len(points) > bound:
        raise DeskScaleExceededError(
            f"정규 영역 열거는 점 {bound}개까지만 지원합니다: {len(points)}", size=len(points), bound=bound
        )
    if k < 1:
        raise InvalidInstanceError(f"k 는 1 이상이어야 합니다: {k}")
    points = [(float(p[0]), float(p[1])) for p in points]
    _check_distinct(points)

    enumerator = _Enumerator(points, k, families)
    probe = _FatResolver(points, [], k, alpha_max)
    if queries is None:
        everyone = list(range(len(points)))
        enumerator.add_singletons(everyone)
        if points:
            enumerator.enumerate(everyone)
    else:
        for query in queries:
            inside = probe.inside(query)
            if not inside or len(inside) > k:
                continue
            enumerator.add_singletons(inside)
            enumerator.enumerate(inside, allowed=set(inside))

    regions = tuple(enumerator.regions.values())
    resolver = _FatResolver(points, regions, k, alpha_max)
    cover_map = {qi: resolver(q) for qi, q in enumerate(queries or ())}
    logger.debug(
        f"정규 뚱뚱한 영역: 점 {len(points)}, k={k}, 가족 {families}, 영역 {len(regions)}, "
        f"질의 {len(cover_map)}"
    )
    return CanonicalFatRegionSet(
        regions=regions, cover_map=cover_map, k=k, alpha_max=alpha_max, resolver=resolver
    )

def region_conflict_pairs(cset: CanonicalFatRegionSet) -> FrozenSet[Tuple[int, int]]:
    """같은 정규 영역에 함께 들어가는 점 쌍"""
    pairs: Set[Tuple[int, int]] = set()
    for region in cset.regions:
        ordered = sorted(region.members)
        pairs.update((a, b) for i, a in enumerate(ordered) for b in ordered[i + 1:])
    return frozenset(pairs)
