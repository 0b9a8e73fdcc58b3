# core/services/exact_oracle.py - 분기 한정 정확 오라클

from typing import List, Optional

from loguru import logger

from app.config import get_settings
from core.services.lp_relaxation import build_and_solve_lp
from domain.entities import Hyperedge, Hypergraph, OracleResult
from domain.exceptions import LPUnsolvedError

# LP 상한은 얕은 깊이에서만 계산
LP_BOUND_DEPTH = 4
BOUND_EPS = 1e-9

class _BudgetExhausted(Exception):
    pass

class _Search:
    def __init__(self, H: Hypergraph, budget: int, lp_bound: bool):
        self.H = H
        self.budget = budget
        self.lp_bound = lp_bound
        self.order = sorted(range(H.num_vertices), key=lambda v: (-H.vertex_weights[v], v))
        weights = [H.vertex_weights[v] for v in self.order]
        self.suffix = [0.0] * (len(weights) + 1)
        for i in range(len(weights) - 1, -1, -1):
            self.suffix[i] = self.suffix[i + 1] + weights[i]
        self.loads = [0] * H.num_edges
        self.nodes = 0
        self.best_weight = -1.0
        self.best_set: List[int] = []

    def fits(self, v: int) -> bool:
        return all(self.loads[e] < self.H.edges[e].capacity for e in self.H.incidence[v])

    def greedy(self) -> None:
        chosen = []
        for v in self.order:
            if self.fits(v):
                for e in self.H.incidence[v]:
                    self.loads[e] += 1
                chosen.append(v)
        self.best_weight = self.H.weight_of(chosen)
        self.best_set = chosen
        self.loads = [0] * self.H.num_edges

    def residual_bound(self, depth: int) -> float:
        H = self.H
        undecided = [v for v in self.order[depth:] if self.fits(v)]
        if not undecided:
            return 0.0
        local = {v: i for i, v in enumerate(undecided)}
        edges = []
        for idx, edge in enumerate(H.edges):
            members = tuple(local[v] for v in edge.vertices if v in local)
            residual = edge.capacity - self.loads[idx]
            if members and residual < len(members):
                edges.append(Hyperedge(members, residual))
        sub = Hypergraph(tuple(H.vertex_weights[v] for v in undecided), tuple(edges))
        try:
            return build_and_solve_lp(sub).objective
        except LPUnsolvedError:
            return self.suffix[depth]

    def dfs(self, depth: int, weight: float, chosen: List[int]) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExhausted()
        if weight + self.suffix[depth] <= self.best_weight + BOUND_EPS:
            return
        if depth == len(self.order):
            self.best_weight = weight
            self.best_set = list(chosen)
            return
        if self.lp_bound and depth <= LP_BOUND_DEPTH:
            if weight + self.residual_bound(depth) <= self.best_weight + BOUND_EPS:
                return

        v = self.order[depth]
        if self.fits(v):
            incident = self.H.incidence[v]
            for e in incident:
                self.loads[e] += 1
            chosen.append(v)
            self.dfs(depth + 1, weight + self.H.vertex_weights[v], chosen)
            chosen.pop()
            for e in incident:
                self.loads[e] -= 1
        self.dfs(depth + 1, weight, chosen)

def exact_pack(H: Hypergraph, budget: Optional[int] = None, lp_bound: bool = False) -> OracleResult:
    """
    분기 한정으로 최대 무게 실현 가능 집합을 찾습니다.

    정점은 무게 내림차순(동률은 인덱스)으로 포함/제외를 분기하고,
    용량 위반과 남은 무게 상한(선택적으로 LP 상한)으로 가지를 칩니다.

    Args:
        H: 하이퍼그래프 (|V| ≤ 32 권장)
        budget: 탐색 노드 상한, None 이면 설정값 ORACLE_NODE_BUDGET
        lp_bound: 얕은 깊이에서 LP 상한 사용 여부

    Returns:
        OracleResult: 예산 안에 탐색이 끝나면 proven_optimal=True
    """
    budget = get_settings().ORACLE_NODE_BUDGET if budget is None else budget
    search = _Search(H, budget, lp_bound)
    search.greedy()
    proven = True
    try:
        search.dfs(0, 0.0, [])
    except _BudgetExhausted:
        proven = False
        logger.warning(f"오라클 탐색 예산 {budget} 소진: 현재 최선 {search.best_weight:.6f}")
    logger.debug(f"오라클 완료: 무게 {search.best_weight:.6f}, 노드 {search.nodes}")
    return OracleResult(
        optimal_weight=H.weight_of(search.best_set),
        optimal_set=tuple(sorted(search.best_set)),
        nodes_explored=search.nodes,
        proven_optimal=proven,
    )
