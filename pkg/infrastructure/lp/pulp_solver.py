# infrastructure/lp/pulp_solver.py - PuLP(CBC) 기반 LP 솔버

import os
from typing import List, Optional, Tuple

import pulp
from loguru import logger

from core.interfaces.lp_solver import LPSolverInterface
from domain.entities import Hypergraph
from domain.exceptions import LPUnsolvedError

class PulpLPSolver(LPSolverInterface):
    """PuLP 로 모델을 만들고 CBC 로 푸는 LP 솔버"""

    def __init__(self, time_limit: Optional[int] = None):
        """
        초기화

        Args:
            time_limit: CBC 시간 제한(초), None 이면 제한 없음
        """
        self.time_limit = time_limit

    def _build(self, hypergraph: Hypergraph) -> Tuple[pulp.LpProblem, dict]:
        prob = pulp.LpProblem("Hypergraph_Packing", pulp.LpMaximize)
        X = pulp.LpVariable.dicts("x", list(range(hypergraph.num_vertices)), 0, 1)

        prob += (
            pulp.lpSum([w * X[v] for v, w in enumerate(hypergraph.vertex_weights)]),
            "Total_Weight",
        )
        for idx, edge in enumerate(hypergraph.edges):
            prob += (pulp.lpSum([X[v] for v in edge.vertices]) <= edge.capacity, f"Edge_{idx}")
        return prob, X

    def solve(self, hypergraph: Hypergraph, tol: float) -> List[float]:
        """
        CBC 로 LP 를 풉니다.

        Args:
            hypergraph: 패킹 인스턴스
            tol: 허용 오차 (후처리에서 사용, CBC 기본 허용 오차는 그대로)

        Returns:
            List[float]: 정점별 원시 값

        Raises:
            LPUnsolvedError: 상태가 Optimal 이 아닌 경우 (최선의 점을 함께 전달)
        """
        prob, X = self._build(hypergraph)
        try:
            status = prob.solve(pulp.PULP_CBC_CMD(msg=False, timeLimit=self.time_limit))
        except pulp.PulpSolverError as e:
            logger.error(f"CBC 실행 중 오류 발생: {e}")
            raise LPUnsolvedError(f"LP 솔버 실행 실패: {e}", status="Error")

        values = [X[v].varValue or 0.0 for v in range(hypergraph.num_vertices)]
        status_name = pulp.LpStatus.get(status, str(status))
        if status_name != "Optimal":
            raise LPUnsolvedError(
                f"LP 가 최적 상태로 끝나지 않았습니다: {status_name}",
                best_point=values,
                status=status_name,
            )
        return values

    def dump(self, hypergraph: Hypergraph, path: str) -> Optional[str]:
        """LP 를 CPLEX-LP 텍스트 형식으로 기록합니다."""
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        prob, _ = self._build(hypergraph)
        prob.writeLP(path)
        logger.debug(f"LP 덤프 완료: {path}")
        return path
