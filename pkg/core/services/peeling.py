# core/services/peeling.py - 균일 용량 벗겨내기

from typing import List, Optional, Set

from loguru import logger

from app.config import SolverConfig
from core.interfaces.packer import UnitCapacitySolverInterface
from core.services.exact_oracle import exact_pack
from core.services.hypergraph_ops import check_packing, induced_subhypergraph
from core.services.rounding import pack_hypergraph
from domain.entities import Hyperedge, Hypergraph, PackingSolution
from domain.exceptions import InfeasibleOutputError, InvalidInstanceError

class RoundingSubsolver(UnitCapacitySolverInterface):
    """반올림 파이프라인으로 단위 용량 인스턴스를 푸는 부분 솔버"""

    def __init__(self, config: Optional[SolverConfig] = None):
        self.config = config or SolverConfig()

    def solve_unit(self, hypergraph: Hypergraph) -> PackingSolution:
        return pack_hypergraph(hypergraph, self.config)

class OracleSubsolver(UnitCapacitySolverInterface):
    """분기 한정 오라클로 단위 용량 인스턴스를 정확히 푸는 부분 솔버"""

    def __init__(self, budget: Optional[int] = None):
        self.budget = budget

    def solve_unit(self, hypergraph: Hypergraph) -> PackingSolution:
        result = exact_pack(hypergraph, self.budget)
        return check_packing(hypergraph, result.optimal_set, 1)

def _unit_capacity(H: Hypergraph) -> Hypergraph:
    return Hypergraph(
        vertex_weights=H.vertex_weights,
        edges=tuple(Hyperedge(e.vertices, 1, e.label) for e in H.edges),
    )

def uniform_capacity_peel(H: Hypergraph, subsolver: UnitCapacitySolverInterface) -> PackingSolution:
    """
    모든 용량이 k 인 하이퍼그래프에서 단위 용량 해를 k 번 벗겨 합칩니다.

    Args:
        H: 균일 용량 하이퍼그래프
        subsolver: 단위 용량 부분 솔버

    Returns:
        PackingSolution: k 개 독립 집합의 합집합 (β=1 로 실현 가능)

    Raises:
        InvalidInstanceError: 용량이 균일하지 않은 경우
    """
    capacities = {e.capacity for e in H.edges}
    if len(capacities) > 1:
        raise InvalidInstanceError(f"용량이 균일하지 않습니다: {sorted(capacities)}")
    if H.num_vertices == 0:
        return check_packing(H, (), 1)
    k = capacities.pop() if capacities else 1

    remaining: Set[int] = set(range(H.num_vertices))
    chosen: List[int] = []
    for round_idx in range(k):
        if not remaining:
            break
        kept = sorted(remaining)
        sub = _unit_capacity(induced_subhypergraph(H, kept))
        winners = [kept[v] for v in subsolver.solve_unit(sub).chosen]
        logger.debug(f"벗겨내기 {round_idx + 1}/{k}: {len(winners)}개 선택")
        chosen.extend(winners)
        remaining.difference_update(winners)

    solution = check_packing(H, chosen, 1)
    if not solution.feasible:
        raise InfeasibleOutputError("벗겨내기 결과가 용량을 넘었습니다", solution=solution)
    return solution
