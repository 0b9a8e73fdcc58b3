# core/services/canonical_rects.py - 스카이라인 정규 사각형과 정규 사각형 집합

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Set, Tuple

from loguru import logger

from app.config import get_settings
from domain.exceptions import GeneralPositionError, InvalidInstanceError
from domain.regions import CanonicalRectSet, Rect
from infrastructure.reporting.report_writer import write_canonical_dump

Point2 = Tuple[float, float]

class SkylineEntry(NamedTuple):
    """(꼭대기 점, 왼쪽 개수, 오른쪽 개수) 로 식별되는 정규 스카이라인 사각형"""
    apex: int
    left: int
    right: int
    members: Tuple[int, ...]
    x_lo: float
    x_hi: float
    height: float

def skyline_canonical_entries(points: Sequence[Point2], k: int,
                              labels: Optional[Sequence[int]] = None) -> List[SkylineEntry]:
    """
    바닥 변이 x축 위에 있는 정규 사각형을 모두 만듭니다.

    꼭대기 점 p 마다, x 순서에서 p 보다 낮은 가장 가까운 점을 왼쪽 il 개, 오른쪽 ir 개
    (il, ir ≤ k) 담은 사각형 하나씩입니다. 더 높은 점은 건너뜁니다.

    Args:
        points: (x, 높이) 목록, 높이 > 0
        k: 한쪽 최대 개수
        labels: 결과에 쓸 점 번호 (없으면 위치)

    Returns:
        List[SkylineEntry]: 정규 사각형 목록

    Raises:
        InvalidInstanceError: 높이가 0 이하인 점이 있는 경우
    """
    if k < 0:
        raise InvalidInstanceError(f"k 는 0 이상이어야 합니다: {k}")
    labels = list(labels) if labels is not None else list(range(len(points)))
    for i, (_, h) in enumerate(points):
        if not h > 0:
            raise InvalidInstanceError(f"점 {labels[i]} 의 높이가 0 이하입니다: {h}")

    order = sorted(range(len(points)), key=lambda i: (points[i][0], labels[i]))
    entries: List[SkylineEntry] = []
    for pos, i in enumerate(order):
        height = points[i][1]
        lefts: List[int] = []
        for j in reversed(order[:pos]):
            if len(lefts) == k:
                break
            if points[j][1] < height:
                lefts.append(j)
        rights: List[int] = []
        for j in order[pos + 1:]:
            if len(rights) == k:
                break
            if points[j][1] < height:
                rights.append(j)
        for il in range(len(lefts) + 1):
            for ir in range(len(rights) + 1):
                members = [i] + lefts[:il] + rights[:ir]
                entries.append(SkylineEntry(
                    apex=labels[i],
                    left=il,
                    right=ir,
                    members=tuple(sorted(labels[m] for m in members)),
                    x_lo=points[lefts[il - 1]][0] if il else points[i][0],
                    x_hi=points[rights[ir - 1]][0] if ir else points[i][0],
                    height=height,
                ))
    return entries

def skyline_canonical_rects(points: Sequence[Point2], k: int) -> Tuple[Rect, ...]:
    """x축 위 점들의 정규 스카이라인 사각형"""
    return tuple(
        Rect((e.x_lo, 0.0), (e.x_hi, e.height)) for e in skyline_canonical_entries(points, k)
    )

@dataclass
class _SplitNode:
    node_id: int
    points: List[int]
    median: Optional[float] = None
    above: Optional['_SplitNode'] = None
    below: Optional['_SplitNode'] = None
    leaf_id: Optional[int] = None

def _check_general_position(points: Sequence[Point2]) -> None:
    for axis, name in ((0, "x"), (1, "y")):
        seen: Dict[float, int] = {}
        for i, p in enumerate(points):
            if p[axis] in seen:
                raise GeneralPositionError(
                    f"{name} 좌표가 겹칩니다 (점 {seen[p[axis]]}, {i}): 생성기의 미세 흔들기를 사용하세요",
                    indices=(seen[p[axis]], i),
                )
            seen[p[axis]] = i

class _CanonicalBuilder:
    def __init__(self, points: Sequence[Point2], k: int):
        self.points = [(float(x), float(y)) for x, y in points]
        self.k = k
        self.rects: List[Rect] = []
        self.members: List[Tuple[int, ...]] = []
        self.lookup: Dict[Tuple[int, str, int, int, int], int] = {}
        self.edges: Set[Tuple[int, int]] = set()
        self.node_count = 0

    def _add(self, rect: Rect, members: Tuple[int, ...]) -> int:
        self.rects.append(rect)
        self.members.append(members)
        for pair in combinations(members, 2):
            self.edges.add(pair)
        return len(self.rects) - 1

    def _collect(self, node: _SplitNode, side: str, indices: List[int]) -> None:
        m = node.median
        if side == "above":
            local = [(self.points[i][0], self.points[i][1] - m) for i in indices]
        else:
            local = [(self.points[i][0], m - self.points[i][1]) for i in indices]
        for e in skyline_canonical_entries(local, self.k - 1, labels=indices):
            if side == "above":
                rect = Rect((e.x_lo, m), (e.x_hi, m + e.height))
            else:
                rect = Rect((e.x_lo, m - e.height), (e.x_hi, m))
            self.lookup[(node.node_id, side, e.apex, e.left, e.right)] = self._add(rect, e.members)

    def build(self, indices: List[int]) -> Optional[_SplitNode]:
        if not indices:
            return None
        node = _SplitNode(self.node_count, list(indices))
        self.node_count += 1
        if len(indices) == 1:
            x, y = self.points[indices[0]]
            node.leaf_id = self._add(Rect((x, y), (x, y)), (indices[0],))
            return node
        order = sorted(indices, key=lambda i: (self.points[i][1], i))
        mid = len(order) // 2
        node.median = (self.points[order[mid - 1]][1] + self.points[order[mid]][1]) / 2.0
        below, above = order[:mid], order[mid:]
        self._collect(node, "above", above)
        self._collect(node, "below", below)
        node.above = self.build(above)
        node.below = self.build(below)
        return node

class _Resolver:
    def __init__(self, builder: _CanonicalBuilder, root: Optional[_SplitNode]):
        self.points = builder.points
        self.k = builder.k
        self.lookup = builder.lookup
        self.root = root

    def _piece(self, node: _SplitNode, side: str, inside: List[int]) -> Optional[int]:
        key_height = (lambda i: self.points[i][1]) if side == "above" else (lambda i: -self.points[i][1])
        apex = max(inside, key=lambda i: (key_height(i), -i))
        ax = self.points[apex][0]
        left = sum(1 for i in inside if self.points[i][0] < ax)
        right = sum(1 for i in inside if self.points[i][0] > ax)
        return self.lookup.get((node.node_id, side, apex, left, right))

    def __call__(self, query: Rect) -> Optional[Tuple[int, ...]]:
        (x0, y0), (x1, y1) = query.lo, query.hi
        inside = [i for i, (x, y) in enumerate(self.points) if x0 <= x <= x1 and y0 <= y <= y1]
        if len(inside) > self.k:
            return None
        if not inside:
            return ()
        node = self.root
        while node is not None:
            if node.leaf_id is not None:
                return (node.leaf_id,)
            m = node.median
            if y1 < m:
                node = node.below
            elif y0 > m:
                node = node.above
            else:
                parts = []
                for side, members in (
                    ("above", [i for i in inside if self.points[i][1] > m]),
                    ("below", [i for i in inside if self.points[i][1] < m]),
                ):
                    if members:
                        piece = self._piece(node, side, members)
                        if piece is None:
                            return None
                        parts.append(piece)
                return tuple(parts)
        return None

def canonical_rect_set(points: Sequence[Point2], k: int,
                       queries: Optional[Sequence[Rect]] = None) -> CanonicalRectSet:
    """
    가로 중앙선으로 재귀 분할하며 양쪽의 스카이라인 정규 사각형을 모읍니다.

    점이 k 개 이하인 질의 사각형은 그것을 가로지르는 중앙선에서 둘로 나뉘어
    정규 사각형 ≤ 2개의 합집합과 점 집합이 정확히 같아집니다.

    Args:
        points: 일반 위치의 2차원 점 (x, y 모두 서로 다름)
        k: 질의당 최대 점 수 (≥ 1)
        queries: cover_map 을 미리 채울 질의 사각형

    Returns:
        CanonicalRectSet: 정규 사각형, 점 구성, 덮개 맵, 충돌 간선, 질의 해석기

    Raises:
        GeneralPositionError: 좌표가 겹치는 경우
    """
    if k < 1:
        raise InvalidInstanceError(f"k 는 1 이상이어야 합니다: {k}")
    _check_general_position(points)
    builder = _CanonicalBuilder(points, k)
    root = builder.build(list(range(len(points))))
    resolver = _Resolver(builder, root)
    cover_map = {qi: resolver(q) for qi, q in enumerate(queries or ())}
    result = CanonicalRectSet(
        canonical=tuple(builder.rects),
        members=tuple(builder.members),
        cover_map=cover_map,
        conflict_edges=frozenset(builder.edges),
        k=k,
        resolver=resolver,
    )
    logger.debug(
        f"정규 사각형 집합: 점 {len(points)}, k={k}, 사각형 {len(result.canonical)}, "
        f"충돌 간선 {len(result.conflict_edges)}"
    )
    dump_dir = get_settings().CANONICAL_DUMP_DIR
    if dump_dir:
        write_canonical_dump(result, dump_dir)
    return result

def covered_members(cset: CanonicalRectSet, ids: Sequence[int]) -> FrozenSet[int]:
    """정규 사각형 id 들이 담은 점 집합의 합"""
    return frozenset(i for cid in ids for i in cset.members[cid])
