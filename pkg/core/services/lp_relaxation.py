# core/services/lp_relaxation.py - 하이퍼그래프 LP 완화

import hashlib
import json
import math
import os
from typing import Iterable, List, Optional

from loguru import logger

from app.config import get_settings
from core.interfaces.lp_solver import LPSolverInterface
from domain.entities import FractionalSolution, Hypergraph
from domain.exceptions import InvalidInstanceError, LPUnsolvedError

def _slack(H: Hypergraph, values: List[float]) -> float:
    worst = -math.inf
    for edge in H.edges:
        worst = max(worst, math.fsum(values[v] for v in edge.vertices) - edge.capacity)
    return worst if H.edges else 0.0

def hypergraph_digest(H: Hypergraph) -> str:
    document = json.dumps(H.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(document.encode("utf-8")).hexdigest()

def make_fractional(H: Hypergraph, values: List[float]) -> FractionalSolution:
    """값 벡터에서 목적값, 에너지, 여유를 다시 계산해 FractionalSolution 을 만듭니다."""
    return FractionalSolution(
        values=tuple(values),
        objective=math.fsum(w * x for w, x in zip(H.vertex_weights, values)),
        energy=math.fsum(values),
        feasibility_slack=_slack(H, values),
    )

def _repair(H: Hypergraph, raw: List[float]) -> List[float]:
    # [0,1] 로 자르고, 솔버 오차로 넘친 간선이 있으면 전체를 균일하게 줄임 (부하는 감소만 함)
    values = [min(1.0, max(0.0, float(x))) for x in raw]
    factor = 1.0
    for edge in H.edges:
        load = math.fsum(values[v] for v in edge.vertices)
        if load > edge.capacity:
            factor = min(factor, edge.capacity / load)
    if factor < 1.0:
        logger.debug(f"LP 후처리 축소 계수 {factor:.12f}")
        values = [x * factor for x in values]
    return values

def build_and_solve_lp(H: Hypergraph, tol: Optional[float] = None,
                       solver: Optional[LPSolverInterface] = None) -> FractionalSolution:
    """
    하이퍼그래프 LP 완화를 만들고 풉니다.

    Args:
        H: 하이퍼그래프
        tol: 허용 오차, None 이면 설정값 LP_TOL
        solver: LP 솔버 (None 이면 PuLP/CBC)

    Returns:
        FractionalSolution: 허용 오차 안에서 실현 가능한 분수해

    Raises:
        InvalidInstanceError: tol 범위 오류
        LPUnsolvedError: 솔버가 최적해를 내지 못한 경우
    """
    settings = get_settings()
    tol = settings.LP_TOL if tol is None else tol
    if not 0 < tol <= 1e-3:
        raise InvalidInstanceError(f"tol 은 (0, 1e-3] 범위여야 합니다: {tol}")

    if H.num_vertices == 0:
        return make_fractional(H, [])
    if not H.edges:
        # 상자 제약만 있으면 x ≡ 1 이 최적
        solution = make_fractional(H, [1.0] * H.num_vertices)
    else:
        if solver is None:
            from infrastructure.lp.pulp_solver import PulpLPSolver
            solver = PulpLPSolver()
        if settings.LP_DUMP_DIR:
            solver.dump(H, os.path.join(settings.LP_DUMP_DIR, f"lp_{hypergraph_digest(H)[:16]}.lp"))
        try:
            raw = solver.solve(H, tol)
        except LPUnsolvedError as e:
            logger.error(f"LP 풀이 중 오류 발생: {e}")
            raise
        solution = make_fractional(H, _repair(H, raw))

    logger.info(
        f"LP 완료: 정점 {H.num_vertices}, 간선 {H.num_edges}, "
        f"목적값 {solution.objective:.6f}, 에너지 {solution.energy:.6f}"
    )
    if solution.energy < 1:
        logger.warning(f"LP 에너지 E = {solution.energy:.6f} < 1 (E ≥ 1 가정 위반)")
    return solution

def energy(x: FractionalSolution, subset: Optional[Iterable[int]] = None) -> float:
    """E = Σ x_v, subset 이 주어지면 E(A) = Σ_{v∈A} x_v"""
    return x.energy_of(subset)
