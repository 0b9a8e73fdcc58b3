# core/services/conflict_analysis.py - 충돌 실현 분석 도구

import math
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Set

import numpy as np

from core.services.hypergraph_ops import enumerate_conflicts
from core.services.ordering import conflict_potential
from domain.entities import Conflict, FractionalSolution, Hypergraph
from domain.exceptions import InvalidInstanceError

def realized_conflicts(H: Hypergraph, sample: Iterable[int], k: Optional[int] = None) -> Set[FrozenSet[int]]:
    """
    표본 R 에서 실현된 충돌, 즉 어떤 간선 h 에 대해 h ∩ R 이고 크기가 cap(h)+1 인 집합들.

    Args:
        H: 하이퍼그래프
        sample: 표본 정점 집합 R
        k: 주어지면 용량 k 인 간선만 고려

    Returns:
        Set[FrozenSet[int]]: 서로 다른 실현 충돌
    """
    chosen = set(sample)
    found: Set[FrozenSet[int]] = set()
    for edge, members in zip(H.edges, H.edge_sets):
        if k is not None and edge.capacity != k:
            continue
        hit = members & chosen
        if len(hit) == edge.capacity + 1:
            found.add(frozenset(hit))
    return found

def _poisson_binomial(rates: List[float]) -> np.ndarray:
    distribution = np.zeros(len(rates) + 1)
    distribution[0] = 1.0
    for p in rates:
        distribution[1:] = distribution[1:] * (1 - p) + distribution[:-1] * p
        distribution[0] *= 1 - p
    return distribution

def expected_realized_conflicts(H: Hypergraph, x: FractionalSolution, k: int, rate: float = 0.5) -> float:
    """
    각 정점을 확률 rate·x_v 로 뽑을 때 |h ∩ R| = k+1 인 용량 k 간선 수의 기댓값.

    실현된 서로 다른 k-충돌 수의 상한이며, 간선마다 포아송 이항 분포로 정확히 계산합니다.
    """
    if not 0 < rate <= 1:
        raise InvalidInstanceError(f"표본 비율은 (0, 1] 범위여야 합니다: {rate}")
    total = []
    for edge in H.edges:
        if edge.capacity != k or len(edge.vertices) < k + 1:
            continue
        distribution = _poisson_binomial([rate * x.values[v] for v in edge.vertices])
        total.append(float(distribution[k + 1]))
    return math.fsum(total)

def total_potential(H: Hypergraph, x: FractionalSolution, A: Optional[Iterable[int]] = None,
                    k: Optional[int] = None, rho: float = 1.0, budget: int = 10 ** 7) -> float:
    """A 안의 (서로 다른) k-충돌 포텐셜 합"""
    seen: Set[FrozenSet[int]] = set()
    total = []
    for c in enumerate_conflicts(H, A, budget).collect(require_complete=True):
        if k is not None and c.order != k:
            continue
        key = frozenset(c.vertices)
        if key in seen:
            continue
        seen.add(key)
        total.append(conflict_potential(c, x, rho))
    return math.fsum(total)

def realization_probability(H: Hypergraph, c: Conflict, x: FractionalSolution, rate: float = 0.5) -> float:
    """
    충돌 c 가 표본에서 실현될 정확한 확률.

    c ⊆ R 이고, c 를 포함하는 용량 |c|-1 간선 중 하나 이상이 c 밖에서 비어 있어야 합니다.
    증인 간선들에 대해 포함-배제로 계산합니다.
    """
    members = frozenset(c.vertices)
    witnesses = [
        s - members for edge, s in zip(H.edges, H.edge_sets)
        if edge.capacity + 1 == len(members) and members <= s
    ]
    if not witnesses:
        return 0.0
    inside = math.prod(rate * x.values[v] for v in members)
    if inside == 0:
        return 0.0

    def all_absent(vertices: FrozenSet[int]) -> float:
        return math.prod(1 - rate * x.values[v] for v in vertices)

    union_probability = []
    for size in range(1, len(witnesses) + 1):
        sign = 1.0 if size % 2 == 1 else -1.0
        for group in combinations(witnesses, size):
            union_probability.append(sign * all_absent(frozenset().union(*group)))
    return inside * math.fsum(union_probability)
