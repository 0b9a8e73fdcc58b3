# core/services/hypergraph_ops.py - 하이퍼그래프 기본 연산

import math
from itertools import combinations
from typing import Iterable, Iterator, List, Optional, Set

from loguru import logger

from domain.entities import (
    UNCONSTRAINED, Conflict, Hyperedge, Hypergraph, PackingSolution,
)
from domain.exceptions import ConflictBudgetExceeded, InvalidInstanceError

def _validated(H: Hypergraph, vertices: Iterable[int]) -> Set[int]:
    subset = set(int(v) for v in vertices)
    for v in subset:
        if not 0 <= v < H.num_vertices:
            raise InvalidInstanceError(f"정점 인덱스 범위 초과: {v} (정점 수 {H.num_vertices})")
    return subset

def minimum_capacity(H: Hypergraph) -> Optional[int]:
    """
    최소 용량 ν 를 반환합니다.

    Returns:
        Optional[int]: 간선 용량의 최솟값, 간선이 없으면 UNCONSTRAINED (None)
    """
    if not H.edges:
        return UNCONSTRAINED
    return min(e.capacity for e in H.edges)

def induced_subhypergraph(H: Hypergraph, A: Iterable[int]) -> Hypergraph:
    """
    A 가 유도하는 부분 하이퍼그래프를 만듭니다.

    정점은 A 를 정렬한 순서로 다시 번호를 매기고 index_map 에 원래 번호를 남깁니다.
    각 간선은 h ∩ A 로 줄어들며 용량은 그대로, 빈 간선은 버립니다.

    Args:
        H: 원래 하이퍼그래프
        A: 정점 인덱스 집합

    Returns:
        Hypergraph: 유도 부분 하이퍼그래프

    Raises:
        InvalidInstanceError: A 에 범위를 벗어난 인덱스가 있는 경우
    """
    kept = sorted(_validated(H, A))
    local = {v: i for i, v in enumerate(kept)}
    edges = []
    for edge in H.edges:
        members = tuple(local[v] for v in edge.vertices if v in local)
        if members:
            edges.append(Hyperedge(members, edge.capacity, edge.label))
    labels = tuple(H.vertex_labels[v] for v in kept) if H.vertex_labels is not None else None
    origin = tuple(H.index_map[v] for v in kept) if H.index_map is not None else tuple(kept)
    return Hypergraph(
        vertex_weights=tuple(H.vertex_weights[v] for v in kept),
        edges=tuple(edges),
        vertex_labels=labels,
        index_map=origin,
    )

def edge_loads(H: Hypergraph, S: Iterable[int]) -> List[int]:
    chosen = set(S)
    return [sum(1 for v in edge.vertices if v in chosen) for edge in H.edges]

def check_packing(H: Hypergraph, S: Iterable[int], beta: int = 1) -> PackingSolution:
    """
    부하를 계산하고 실현 가능성을 판정합니다.

    Args:
        H: 하이퍼그래프
        S: 선택한 정점 집합
        beta: 이중 기준 상한 β (1 이면 엄격한 실현 가능성)

    Returns:
        PackingSolution: 모든 간선에서 부하 ≤ max(용량, β) 이면 feasible

    Raises:
        InvalidInstanceError: 인덱스가 범위를 벗어났거나 β < 1 인 경우
    """
    if beta < 1:
        raise InvalidInstanceError(f"β 는 1 이상이어야 합니다: {beta}")
    chosen = _validated(H, S)
    loads = edge_loads(H, chosen)
    feasible = all(load <= max(edge.capacity, beta) for load, edge in zip(loads, H.edges))
    return PackingSolution(
        chosen=tuple(sorted(chosen)),
        weight=H.weight_of(chosen),
        edge_loads=tuple(loads),
        bicriteria_bound=beta,
        feasible=feasible,
    )

def count_conflicts(H: Hypergraph, A: Optional[Iterable[int]] = None) -> int:
    """열거 없이 충돌 수 Σ_h C(|h∩A|, cap(h)+1) 를 셉니다."""
    alive = None if A is None else _validated(H, A)
    total = 0
    for edge in H.edges:
        size = len(edge.vertices) if alive is None else sum(1 for v in edge.vertices if v in alive)
        if size > edge.capacity:
            total += math.comb(size, edge.capacity + 1)
    return total

class ConflictStream:
    """
    충돌을 결정적 사전식 순서로 흘려보내는 스트림.

    예산에 닿으면 멈추고 truncated 를 세웁니다.
    """

    def __init__(self, H: Hypergraph, A: Optional[Iterable[int]] = None, budget: int = 10 ** 7):
        self.H = H
        self.alive = set(range(H.num_vertices)) if A is None else _validated(H, A)
        self.budget = budget
        self.truncated = False
        self.emitted = 0

    def __iter__(self) -> Iterator[Conflict]:
        for idx, edge in enumerate(self.H.edges):
            members = [v for v in edge.vertices if v in self.alive]
            if len(members) <= edge.capacity:
                continue
            for combo in combinations(members, edge.capacity + 1):
                if self.emitted >= self.budget:
                    self.truncated = True
                    logger.warning(f"충돌 열거가 예산 {self.budget} 에서 잘렸습니다")
                    return
                self.emitted += 1
                yield Conflict(combo, idx, edge.capacity)

    def collect(self, require_complete: bool = False) -> List[Conflict]:
        conflicts = list(self)
        if require_complete and self.truncated:
            raise ConflictBudgetExceeded(
                f"정확한 저항 계산에 필요한 충돌 열거가 예산 {self.budget} 을 넘었습니다",
                seen=self.emitted,
            )
        return conflicts

def enumerate_conflicts(H: Hypergraph, A: Optional[Iterable[int]] = None,
                        budget: int = 10 ** 7) -> ConflictStream:
    """
    A 안의 모든 k-충돌을 열거합니다.

    Args:
        H: 하이퍼그래프
        A: 정점 집합 (None 이면 전체)
        budget: 최대 충돌 수

    Returns:
        ConflictStream: 반복 가능한 스트림, 반복이 끝난 뒤 truncated 로 잘림 여부 확인
    """
    return ConflictStream(H, A, budget)

def relax_capacities(H: Hypergraph, phi: int) -> Hypergraph:
    """용량을 max(cap(h), φ) 로 올립니다."""
    if phi < 1:
        raise InvalidInstanceError(f"φ 는 1 이상이어야 합니다: {phi}")
    return Hypergraph(
        vertex_weights=H.vertex_weights,
        edges=tuple(Hyperedge(e.vertices, max(e.capacity, phi), e.label) for e in H.edges),
        vertex_labels=H.vertex_labels,
        index_map=H.index_map,
    )
