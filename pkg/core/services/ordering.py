# core/services/ordering.py - 최소 저항 순서 계산

import math
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from app.config import SolverConfig
from core.services.hypergraph_ops import enumerate_conflicts
from core.services.random_streams import STREAM_SAMPLED_ORDER, derive_seed, make_rng
from domain.entities import Conflict, FractionalSolution, Hypergraph, Ordering, OrderingMode
from domain.exceptions import InvalidInstanceError

def _check_scale(rho: float) -> None:
    if not rho >= 1:
        raise InvalidInstanceError(f"스케일 ρ 는 1 이상이어야 합니다: {rho}")

def conflict_potential(c: Conflict, x: FractionalSolution, rho: float = 1.0) -> float:
    """
    ρ-포텐셜 Π_{v∈c} x_v/ρ 를 계산합니다. ρ=1 이면 일반 포텐셜입니다.

    Args:
        c: 충돌
        x: 분수해
        rho: 스케일 (≥ 1)

    Returns:
        float: 포텐셜, 값이 0 인 정점이 있으면 0
    """
    _check_scale(rho)
    potential = 1.0
    for v in c.vertices:
        if x.values[v] <= 0:
            return 0.0
        potential *= x.values[v] / rho
    return potential

def distinct_conflicts(H: Hypergraph, A: Optional[Iterable[int]], x: FractionalSolution,
                       rho: float, budget: int) -> Dict[FrozenSet[int], float]:
    """
    A 안의 충돌을 정점 집합 기준으로 중복 제거해 포텐셜과 함께 반환합니다.

    Raises:
        ConflictBudgetExceeded: 열거가 예산에서 잘린 경우
    """
    stream = enumerate_conflicts(H, A, budget)
    potentials: Dict[FrozenSet[int], float] = {}
    for c in stream.collect(require_complete=True):
        key = frozenset(c.vertices)
        if key not in potentials:
            potentials[key] = conflict_potential(c, x, rho)
    return potentials

def resistance(H: Hypergraph, v: int, A: Iterable[int], x: FractionalSolution,
               rho: float = 1.0, budget: int = 10 ** 7) -> float:
    """
    A 에 대한 정점 v 의 ρ-저항 (ρ/x_v)·Σ_{c⊆A, v∈c} potential_ρ(c) 를 계산합니다.

    Args:
        H: 하이퍼그래프
        v: 정점
        A: 현재 정점 집합
        x: 분수해
        rho: 스케일
        budget: 충돌 열거 예산

    Returns:
        float: 저항, x_v = 0 이면 0

    Raises:
        ConflictBudgetExceeded: 충돌 열거가 잘린 경우
    """
    _check_scale(rho)
    if x.values[v] <= 0:
        return 0.0
    alive = set(A)
    if v not in alive:
        raise InvalidInstanceError(f"정점 {v} 가 집합 A 에 없습니다")
    potentials = distinct_conflicts(H, alive, x, rho, budget)
    total = math.fsum(p for members, p in potentials.items() if v in members)
    return rho / x.values[v] * total

def _sampling_neighbours(H: Hypergraph, v: int, alive: Sequence[int]) -> Tuple[List[int], List[Tuple[List[int], int]]]:
    alive_set = set(alive)
    neighbours: List[int] = []
    edges: List[Tuple[List[int], int]] = []
    for idx in H.incidence[v]:
        edge = H.edges[idx]
        members = [u for u in edge.vertices if u in alive_set]
        if len(members) <= edge.capacity:
            continue
        edges.append((members, edge.capacity))
        neighbours.extend(u for u in members if u != v)
    return sorted(set(neighbours)), edges

def estimate_violation_probability(H: Hypergraph, v: int, A: Iterable[int], x: FractionalSolution,
                                   rho: float, samples: int, seed: int) -> float:
    """
    v 를 강제로 넣은 표본에서 v 를 포함하는 간선이 넘칠 확률을 추정합니다.

    A\\{v} 의 각 정점 u 는 확률 x_u/ρ 로 독립적으로 뽑힙니다.

    Args:
        H: 하이퍼그래프
        v: 정점
        A: 현재 정점 집합
        x: 분수해
        rho: 스케일
        samples: 표본 수 P
        seed: 시드 (같은 (seed, P) 는 같은 결과)

    Returns:
        float: 위반 표본 비율 (0 ~ 1)
    """
    _check_scale(rho)
    if samples < 1:
        raise InvalidInstanceError(f"표본 수는 1 이상이어야 합니다: {samples}")
    neighbours, edges = _sampling_neighbours(H, v, sorted(set(A) | {v}))
    if not edges:
        return 0.0

    rng = make_rng(seed)
    rates = np.array([x.values[u] / rho for u in neighbours], dtype=float)
    drawn = rng.random((samples, len(neighbours))) < rates
    column = {u: i for i, u in enumerate(neighbours)}
    violated = np.zeros(samples, dtype=bool)
    for members, capacity in edges:
        cols = [column[u] for u in members if u != v]
        # v 는 항상 포함
        loads = drawn[:, cols].sum(axis=1) + 1
        violated |= loads > capacity
    return float(violated.mean())

def _exact_ordering(H: Hypergraph, x: FractionalSolution, rho: float, budget: int) -> Ordering:
    n = H.num_vertices
    potentials = distinct_conflicts(H, None, x, rho, budget)
    conflicts = [(tuple(sorted(members)), p) for members, p in potentials.items()]
    by_vertex: List[List[int]] = [[] for _ in range(n)]
    sums = [0.0] * n
    for cid, (members, p) in enumerate(conflicts):
        for u in members:
            by_vertex[u].append(cid)
            sums[u] += p
    dead = [False] * len(conflicts)

    def current(u: int) -> float:
        if x.values[u] <= 0:
            return 0.0
        return rho / x.values[u] * max(sums[u], 0.0)

    alive = set(range(n))
    permutation = [0] * n
    diagnostics = [0.0] * n
    for position in range(n - 1, -1, -1):
        chosen = min(alive, key=lambda u: (current(u), u))
        permutation[position] = chosen
        diagnostics[position] = current(chosen)
        alive.discard(chosen)
        for cid in by_vertex[chosen]:
            if dead[cid]:
                continue
            dead[cid] = True
            members, p = conflicts[cid]
            for u in members:
                if u != chosen:
                    sums[u] -= p
    return Ordering(tuple(permutation), tuple(diagnostics), OrderingMode.EXACT_RESISTANCE)

def _sampled_ordering(H: Hypergraph, x: FractionalSolution, rho: float, samples: int, seed: int) -> Ordering:
    n = H.num_vertices
    alive = set(range(n))
    permutation = [0] * n
    diagnostics = [0.0] * n
    for round_idx, position in enumerate(range(n - 1, -1, -1)):
        members = sorted(alive)
        best: Tuple[float, int] = (math.inf, -1)
        for u in members:
            if x.values[u] <= 0:
                estimate = 0.0
            else:
                estimate = estimate_violation_probability(
                    H, u, members, x, rho, samples, derive_seed(seed, STREAM_SAMPLED_ORDER, round_idx, u)
                )
            best = min(best, (estimate, u))
        permutation[position] = best[1]
        diagnostics[position] = best[0]
        alive.discard(best[1])
    return Ordering(tuple(permutation), tuple(diagnostics), OrderingMode.SAMPLED_VIOLATION)

def build_ordering(H: Hypergraph, x: FractionalSolution, rho: float, config: SolverConfig) -> Ordering:
    """
    현재 집합에서 저항(또는 추정 위반 확률)이 가장 작은 정점을 뒤에서부터 채워 순서를 만듭니다.

    동률은 가장 작은 정점 인덱스가 먼저 제거(더 뒤에 배치)됩니다.

    Args:
        H: 하이퍼그래프
        x: 분수해
        rho: 스케일
        config: 솔버 설정 (ordering_mode, sample_count, seed, conflict_budget)

    Returns:
        Ordering: v_1..v_n 과 위치별 진단값

    Raises:
        ConflictBudgetExceeded: 정확 모드에서 충돌 열거가 잘린 경우
    """
    _check_scale(rho)
    mode = OrderingMode(config.ordering_mode)
    if mode == OrderingMode.EXACT_RESISTANCE:
        ordering = _exact_ordering(H, x, rho, config.resolved_conflict_budget())
    else:
        ordering = _sampled_ordering(
            H, x, rho, config.resolved_sample_count(H.num_vertices), config.seed
        )
    logger.debug(f"순서 계산 완료 ({mode.value}): 최대 진단값 {ordering.max_diagnostic:.6f}")
    return ordering
