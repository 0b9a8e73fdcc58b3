# core/services/interval_tree_packing.py - 구간 트리로 사각형/상자 패킹

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from app.config import SolverConfig
from core.services.hypergraph_ops import check_packing, edge_loads, induced_subhypergraph
from core.services.instance_compiler import build_hypergraph
from core.services.random_streams import STREAM_NODE, derive_seed
from core.services.rounding import pack_hypergraph
from domain.entities import Hypergraph, PackingSolution
from domain.exceptions import InfeasibleOutputError, InvalidInstanceError
from domain.regions import Box, Direction, GeometricInstance, Rect

@dataclass
class IntervalTreeNode:
    """찌르는 선 하나와 그 선에 걸친 영역들"""
    stab: float
    stabbed: List[int]
    depth: int
    left: Optional['IntervalTreeNode'] = None
    right: Optional['IntervalTreeNode'] = None

@dataclass
class _Extent:
    lo: Tuple[float, ...]
    hi: Tuple[float, ...]

def build_interval_tree(extents: Sequence[_Extent], indices: Sequence[int], axis: int,
                        depth: int = 0) -> Optional[IntervalTreeNode]:
    """
    왼쪽 변의 중앙값을 찌르는 선으로 삼아 구간 트리를 만듭니다.

    선 ℓ 에 걸친 영역은 노드에 남고, 완전히 왼쪽(hi < ℓ)과 오른쪽(lo > ℓ)은 자식으로 내려갑니다.
    """
    if not indices:
        return None
    ordered = sorted(indices, key=lambda i: (extents[i].lo[axis], i))
    stab = extents[ordered[len(ordered) // 2]].lo[axis]
    stabbed, left, right = [], [], []
    for i in ordered:
        if extents[i].hi[axis] < stab:
            left.append(i)
        elif extents[i].lo[axis] > stab:
            right.append(i)
        else:
            stabbed.append(i)
    node = IntervalTreeNode(stab, sorted(stabbed), depth)
    node.left = build_interval_tree(extents, left, axis, depth + 1)
    node.right = build_interval_tree(extents, right, axis, depth + 1)
    return node

def levels_of(root: Optional[IntervalTreeNode]) -> List[List[IntervalTreeNode]]:
    levels: List[List[IntervalTreeNode]] = []
    frontier = [root] if root is not None else []
    while frontier:
        levels.append(frontier)
        frontier = [c for node in frontier for c in (node.left, node.right) if c is not None]
    return levels

class _LayeredTreeSolver:
    def __init__(self, H: Hypergraph, extents: Sequence[_Extent], axes: Sequence[int], config: SolverConfig):
        self.H = H
        self.extents = extents
        self.axes = tuple(axes)
        self.config = config

    def solve_leaf(self, indices: List[int], seed: int) -> List[int]:
        # 공통 점을 지나는 영역들: γ=1 인 선형 합집합 복잡도 경우
        sub = induced_subhypergraph(self.H, indices)
        tuned = self.config.with_updates(gamma_value=1.0, seed=seed)
        solution = pack_hypergraph(sub, tuned)
        return [indices[v] for v in solution.chosen]

    def check_level(self, owners: Dict[int, int]) -> None:
        for edge in self.H.edges:
            nodes = {owners[v] for v in edge.vertices if v in owners}
            if len(nodes) > 1:
                raise InfeasibleOutputError(
                    f"같은 레벨의 서로 다른 노드가 점 하나를 공유합니다: 노드 {sorted(nodes)}"
                )

    def solve(self, indices: List[int], layer: int, seed: int) -> List[int]:
        root = build_interval_tree(self.extents, indices, self.axes[layer])
        best: List[int] = []
        best_weight = -1.0
        for depth, level in enumerate(levels_of(root)):
            owners: Dict[int, int] = {}
            chosen: List[int] = []
            for position, node in enumerate(level):
                node_seed = derive_seed(seed, STREAM_NODE, layer, depth, position)
                if layer + 1 == len(self.axes):
                    winners = self.solve_leaf(node.stabbed, node_seed)
                else:
                    winners = self.solve(node.stabbed, layer + 1, node_seed)
                for v in winners:
                    owners[v] = position
                chosen.extend(winners)
            self.check_level(owners)
            weight = self.H.weight_of(chosen)
            logger.debug(f"층 {layer} 레벨 {depth}: 노드 {len(level)}, 무게 {weight:.6f}")
            if weight > best_weight:
                best, best_weight = chosen, weight
        return best

def _extents(inst: GeometricInstance, kind) -> List[_Extent]:
    if inst.direction != Direction.PACK_REGIONS:
        raise InvalidInstanceError("구간 트리 패킹은 pack_regions 방향만 지원합니다")
    extents = []
    for r in inst.regions:
        region = r.region
        if type(region) is not kind:
            raise InvalidInstanceError(f"{kind.kind} 영역만 허용됩니다: {region.kind}")
        extents.append(_Extent(tuple(float(c) for c in region.lo), tuple(float(c) for c in region.hi)))
    return extents

def augment_greedily(H: Hypergraph, chosen: Sequence[int]) -> List[int]:
    """고른 레벨 밖의 영역을 무게 내림차순으로 용량이 남는 만큼 더합니다."""
    picked = set(chosen)
    loads = edge_loads(H, picked)
    for v in sorted(range(H.num_vertices), key=lambda u: (-H.vertex_weights[u], u)):
        if v in picked:
            continue
        if all(loads[e] < H.edges[e].capacity for e in H.incidence[v]):
            for e in H.incidence[v]:
                loads[e] += 1
            picked.add(v)
    return sorted(picked)

def _pack_layered(inst: GeometricInstance, config: SolverConfig, kind, axes: Sequence[int]) -> PackingSolution:
    extents = _extents(inst, kind)
    H, _ = build_hypergraph(inst)
    solver = _LayeredTreeSolver(H, extents, axes, config)
    chosen = augment_greedily(H, solver.solve(list(range(H.num_vertices)), 0, config.seed))
    solution = check_packing(H, chosen, 1)
    if not solution.feasible:
        raise InfeasibleOutputError("구간 트리 패킹 결과가 용량을 넘었습니다", solution=solution)
    logger.info(f"구간 트리 패킹 완료 ({kind.kind}): 무게 {solution.weight:.6f}, 선택 {solution.size}")
    return solution

def pack_rects_into_points(inst: GeometricInstance, config: Optional[SolverConfig] = None) -> PackingSolution:
    """
    2차원 구간 트리로 가중치 사각형을 용량 점에 패킹합니다.

    노드마다 찌르는 선에 걸친 사각형들을 γ=1 파이프라인으로 풀고,
    같은 레벨의 해를 합친 뒤 가장 무거운 레벨을 고르고, 남은 용량에 다른 레벨의 사각형을 더합니다.

    Args:
        inst: pack_regions 방향, 영역은 모두 Rect
        config: 솔버 설정

    Returns:
        PackingSolution: β=1 로 실현 가능한 해
    """
    return _pack_layered(inst, config or SolverConfig(), Rect, (0,))

def pack_boxes_into_points(inst: GeometricInstance, config: Optional[SolverConfig] = None) -> PackingSolution:
    """
    x, y, z 세 층의 구간 트리로 가중치 상자를 패킹합니다.

    마지막 층 노드의 상자들은 공통 점을 지나며, 레벨 선택은 아래 층부터 올라옵니다.
    """
    return _pack_layered(inst, config or SolverConfig(), Box, (0, 1, 2))
