# core/services/triangle_cover.py - 측도 분할 삼각형 덮개 (≤ 18k 개의 닮은 삼각형)

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

from loguru import logger

from domain.exceptions import AtomicMassError, CoverBoundError, InvalidInstanceError
from domain.regions import Triangle, TriangleCover

MAX_DEPTH = 48
MASS_RTOL = 1e-12

Bary = Tuple[float, float, float]
WeightedPoint = Tuple[Tuple[float, float], float]

@dataclass(frozen=True)
class _Cell:
    """
    원래 삼각형의 무게중심 좌표계에서 본 닮은 삼각형.

    upright 이면 {λ_i ≥ c_i} (원래와 같은 방향), 아니면 {λ_i ≤ c_i} (180° 회전).
    scale 은 원래 삼각형 대비 닮음비입니다.
    """
    upright: bool
    coeffs: Bary
    scale: float

    def children(self) -> List['_Cell']:
        half = self.scale / 2.0
        sign = 1.0 if self.upright else -1.0
        corners = []
        for i in range(3):
            shifted = tuple(c + sign * half if j == i else c for j, c in enumerate(self.coeffs))
            corners.append(_Cell(self.upright, shifted, half))
        middle = _Cell(not self.upright, tuple(c + sign * half for c in self.coeffs), half)
        return corners + [middle]

    def child_index(self, lam: Bary) -> int:
        half = self.scale / 2.0
        for i in range(3):
            if self.upright and lam[i] >= self.coeffs[i] + half:
                return i
            if not self.upright and lam[i] <= self.coeffs[i] - half:
                return i
        return 3

    def to_local(self, coeffs: Sequence[float]) -> Bary:
        if self.upright:
            return tuple((v - c) / self.scale for v, c in zip(coeffs, self.coeffs))
        return tuple((c - v) / self.scale for v, c in zip(coeffs, self.coeffs))

    def from_local(self, upright_local: bool, coeffs: Sequence[float], scale: float) -> '_Cell':
        if self.upright:
            mapped = tuple(c + self.scale * v for v, c in zip(coeffs, self.coeffs))
        else:
            mapped = tuple(c - self.scale * v for v, c in zip(coeffs, self.coeffs))
        return _Cell(upright_local == self.upright, mapped, self.scale * scale)

    def vertices_bary(self) -> List[Bary]:
        sign = 1.0 if self.upright else -1.0
        return [
            tuple(c + sign * self.scale if j == i else c for j, c in enumerate(self.coeffs))
            for i in range(3)
        ]

@dataclass
class _Node:
    cell: _Cell
    depth: int
    parent: Optional['_Node'] = None
    points: List[int] = field(default_factory=list)
    children: Dict[int, '_Node'] = field(default_factory=dict)
    node_id: int = 0

def piece_bound(k: int) -> int:
    """
    덮개 조각 수 상한 18k.

    고른 노드 ≤ k 개에 루트와 LCA 를 더한 닫힌 집합은 ≤ 2k 개이고, 각 노드가 자식 칸 4개를
    내며 구멍이 있는 칸은 조각이 최대 5개 늘어나므로 4·2k + 5·(2k-1) < 18k 입니다.
    """
    return 18 * k

def barycentric(t: Triangle, p: Sequence[float]) -> Bary:
    """삼각형 t 에 대한 점 p 의 무게중심 좌표"""
    (ax, ay), (bx, by), (cx, cy) = ((float(v[0]), float(v[1])) for v in t.vertices)
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    px, py = float(p[0]), float(p[1])
    lb = ((px - ax) * (cy - ay) - (py - ay) * (cx - ax)) / det
    lc = ((bx - ax) * (py - ay) - (by - ay) * (px - ax)) / det
    return (1.0 - lb - lc, lb, lc)

def _to_triangle(source: Triangle, cell: _Cell) -> Triangle:
    corners = [tuple(float(c) for c in v) for v in source.vertices]
    verts = []
    for lam in cell.vertices_bary():
        verts.append(tuple(sum(lam[i] * corners[i][axis] for i in range(3)) for axis in range(2)))
    return Triangle(tuple(verts))

class _MeasureTree:
    def __init__(self, lams: Sequence[Bary], masses: Sequence[float], limit: float):
        self.lams = lams
        self.masses = masses
        self.limit = limit
        self.nodes: List[_Node] = []
        self.zeroed: Set[int] = set()
        self.root = self._new(_Cell(True, (0.0, 0.0, 0.0), 1.0), 0, None, list(range(len(lams))))
        self._expand(self.root)

    def _new(self, cell: _Cell, depth: int, parent: Optional[_Node], points: List[int]) -> _Node:
        node = _Node(cell, depth, parent, points, node_id=len(self.nodes))
        self.nodes.append(node)
        return node

    def mass(self, node: _Node, remaining: bool = False) -> float:
        return math.fsum(
            self.masses[p] for p in node.points if not (remaining and p in self.zeroed)
        )

    def _expand(self, root: _Node) -> None:
        stack = [root]
        while stack:
            node = stack.pop()
            if self.mass(node) <= self.limit * (1 + MASS_RTOL):
                continue
            if node.depth >= MAX_DEPTH:
                raise AtomicMassError(
                    f"깊이 {MAX_DEPTH} 에서도 나눌 수 없는 질량입니다 (겹친 점)",
                    atom_mass=self.mass(node), limit=self.limit,
                )
            buckets: Dict[int, List[int]] = {}
            for p in node.points:
                buckets.setdefault(node.cell.child_index(self.lams[p]), []).append(p)
            cells = node.cell.children()
            for idx in sorted(buckets):
                child = self._new(cells[idx], node.depth + 1, node, buckets[idx])
                node.children[idx] = child
                stack.append(child)

    def select(self) -> List[_Node]:
        """남은 질량이 한계 이상인 가장 낮은 노드를 고르고 그 질량을 0 으로 둡니다."""
        threshold = self.limit * (1 - MASS_RTOL)
        selected: List[_Node] = []
        while self.mass(self.root, remaining=True) >= threshold:
            node = self.root
            while True:
                nxt = next(
                    (node.children[i] for i in sorted(node.children)
                     if self.mass(node.children[i], remaining=True) >= threshold),
                    None,
                )
                if nxt is None:
                    break
                node = nxt
            selected.append(node)
            self.zeroed.update(node.points)
        return selected

def _ancestors(node: _Node) -> List[_Node]:
    chain = []
    while node is not None:
        chain.append(node)
        node = node.parent
    return chain

def _lca(a: _Node, b: _Node) -> _Node:
    seen = {n.node_id for n in _ancestors(a)}
    return next(n for n in _ancestors(b) if n.node_id in seen)

def _annulus_pieces(outer: _Cell, hole: _Cell) -> List[_Cell]:
    """outer 에서 hole 을 뺀 고리 영역을 outer 와 닮은 삼각형 ≤6개로 덮습니다."""
    local = outer.to_local(hole.coeffs)
    pieces: List[Tuple[bool, Bary, float]] = []
    if hole.upright != outer.upright:
        for i in range(3):
            if local[i] < 1.0:
                pieces.append((True, tuple(local[i] if j == i else 0.0 for j in range(3)), 1.0 - local[i]))
    else:
        size = hole.scale / outer.scale
        reach = [b + size for b in local]
        for i in range(3):
            if reach[i] < 1.0:
                pieces.append((True, tuple(reach[i] if j == i else 0.0 for j in range(3)), 1.0 - reach[i]))
        # 구멍에 붙인 세 이웃과 구멍의 합은 크기 2·size 의 반사된 삼각형.
        # local[i] 는 size 의 배수이므로 local[i] > 0 이면 이웃은 outer 안에 있음
        for i in range(3):
            if local[i] > 0.5 * size:
                bounds = tuple(local[j] if j == i else reach[j] for j in range(3))
                pieces.append((False, bounds, size))
    return [outer.from_local(up, coeffs, scale) for up, coeffs, scale in pieces]

def cover_triangle_by_measure(t: Triangle, mass: Sequence[WeightedPoint], k: int) -> TriangleCover:
    """
    t 를 질량 μ(t)/k 이하인 닮은 삼각형들로 덮습니다.

    4분할 트리를 질량이 μ/k 이하가 될 때까지 내리고, 남은 질량이 μ/k 이상인 가장 낮은
    노드를 반복해서 고른 뒤 루트와 LCA 로 닫습니다. 닫힌 노드들의 자식 삼각형이 만드는 면은
    삼각형이거나 고리이고, 고리는 반사된 구멍이면 3개, 평행 이동된 구멍이면 ≤6개로 덮습니다.

    Args:
        t: 덮을 삼각형
        mass: (점, 질량) 목록. t 밖의 질량은 무시합니다.
        k: 목표 매개변수 (≥ 1)

    Returns:
        TriangleCover: 조각과 조각별 (닮음비, 180° 회전 여부)

    Raises:
        InvalidInstanceError: k < 1 또는 음수 질량
        AtomicMassError: 한 점(또는 겹친 점들)의 질량이 μ/k 를 넘는 경우
        CoverBoundError: 조각 수가 18k 를 넘는 경우 (내부 불변식 위반)
    """
    if k < 1:
        raise InvalidInstanceError(f"k 는 1 이상이어야 합니다: {k}")
    lams: List[Bary] = []
    masses: List[float] = []
    for point, m in mass:
        if m < 0:
            raise InvalidInstanceError(f"질량은 0 이상이어야 합니다: {m}")
        lam = barycentric(t, point)
        if min(lam) < -1e-12 or m == 0:
            continue
        lams.append(lam)
        masses.append(float(m))

    total = math.fsum(masses)
    if k == 1 or total <= 0:
        return TriangleCover(pieces=(t,), k=k, source=t, transforms=((1.0, False),))

    limit = total / k
    heaviest = max(masses)
    if heaviest > limit * (1 + MASS_RTOL):
        raise AtomicMassError(
            f"원자 질량 {heaviest:.6g} 이 μ/k = {limit:.6g} 를 넘어 나눌 수 없습니다",
            atom_mass=heaviest, limit=limit,
        )

    tree = _MeasureTree(lams, masses, limit)
    chosen: Dict[int, _Node] = {tree.root.node_id: tree.root}
    for node in tree.select():
        chosen[node.node_id] = node
    for a, b in combinations(list(chosen.values()), 2):
        z = _lca(a, b)
        chosen[z.node_id] = z

    # 닫힌 집합의 각 노드 아래, 가장 가까운 닫힌 조상 기준으로 자식 칸별 구멍을 찾음
    holes: Dict[Tuple[int, int], _Node] = {}
    for node in chosen.values():
        if node is tree.root:
            continue
        below = node
        above = node.parent
        while above.node_id not in chosen:
            below, above = above, above.parent
        slot = next(i for i, child in above.children.items() if child is below)
        if below is not node:
            holes[(above.node_id, slot)] = node

    cells: List[_Cell] = []
    for node in sorted(chosen.values(), key=lambda n: n.node_id):
        for slot, cell in enumerate(node.cell.children()):
            child = node.children.get(slot)
            if child is not None and child.node_id in chosen:
                continue
            hole = holes.get((node.node_id, slot))
            if hole is None:
                cells.append(cell)
            else:
                cells.extend(_annulus_pieces(cell, hole.cell))

    pieces = tuple(_to_triangle(t, cell) for cell in cells)
    transforms = tuple((cell.scale, not cell.upright) for cell in cells)
    logger.debug(
        f"측도 분할 덮개: k={k}, 트리 노드 {len(tree.nodes)}, 닫힌 노드 {len(chosen)}, 조각 {len(pieces)}"
    )
    if len(pieces) > piece_bound(k):
        raise CoverBoundError(
            f"덮개 조각 수 {len(pieces)} 이 상한 {piece_bound(k)} 를 넘었습니다",
            pieces=len(pieces), bound=piece_bound(k),
        )
    return TriangleCover(pieces=pieces, k=k, source=t, transforms=transforms)
