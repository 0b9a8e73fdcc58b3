# core/services/sparsify.py - 분수해 희소화

import math
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from app.config import SolverConfig
from core.services.random_streams import STREAM_SPARSIFY, make_rng
from domain.entities import FractionalSolution, Hypergraph, SparsifiedSolution

# 실현 가능성 판정 허용 오차 (y 값은 정확히 t/M 이므로 부동소수 합 오차만 허용)
FEASIBILITY_SLACK = 1e-12

def sample_rounds(energy_value: float, c_t: float, vc_dimension: int) -> int:
    """T = ⌈c_T·d·ln(max(E, 2))⌉"""
    return max(1, math.ceil(c_t * vc_dimension * math.log(max(energy_value, 2.0))))

def _feasible(H: Hypergraph, y: np.ndarray) -> bool:
    for edge in H.edges:
        if math.fsum(y[list(edge.vertices)]) > edge.capacity + FEASIBILITY_SLACK:
            return False
    return True

def sparsify(H: Hypergraph, x: FractionalSolution, seed: int,
             config: Optional[SolverConfig] = None) -> SparsifiedSolution:
    """
    분수해를 값이 i/M (M = 6T) 꼴인 희소 해로 바꿉니다.

    각 정점은 ⌊x_v T⌋ 번 확정으로, 나머지 소수부는 베르누이 한 번으로 중복도 t_v 를 얻고
    y_v = t_v / 6T 로 둡니다. y 가 실현 가능하고 목적값이 opt_LP/12 이상일 때까지
    최대 R 번 다시 뽑습니다.

    Args:
        H: 하이퍼그래프
        x: 실현 가능한 분수해
        seed: 시드
        config: 솔버 설정 (sparsify_c_t, vc_dimension, sparsify_retries)

    Returns:
        SparsifiedSolution: 최선의 시도와 성공 여부
    """
    config = config or SolverConfig()
    n = H.num_vertices
    rounds = sample_rounds(x.energy, config.sparsify_c_t, config.vc_dimension)
    granularity = 6 * rounds
    values = np.asarray(x.values, dtype=float)
    weights = np.asarray(H.vertex_weights, dtype=float)
    base = np.floor(values * rounds)
    remainder = values * rounds - base
    target = x.objective / 12.0

    best: Optional[Tuple[Tuple[bool, bool, float], np.ndarray]] = None
    attempts = 0
    for attempt in range(config.sparsify_retries):
        attempts = attempt + 1
        rng = make_rng(seed, STREAM_SPARSIFY, attempt)
        extra = rng.random(n) < remainder
        multiplicities = (base + extra).astype(np.int64)
        y = multiplicities / granularity
        feasible = _feasible(H, y)
        objective = math.fsum(weights * y)
        success = feasible and objective >= target - FEASIBILITY_SLACK
        key = (success, feasible, objective)
        if best is None or key > best[0]:
            best = (key, multiplicities)
        if success:
            break

    (success, _, objective), multiplicities = best
    y = multiplicities / granularity
    if not success:
        logger.warning(f"희소화가 {attempts}번 시도 안에 성공하지 못했습니다 (T={rounds})")
    else:
        logger.debug(f"희소화 성공: 시도 {attempts}, T={rounds}, M={granularity}")
    return SparsifiedSolution(
        values=tuple(float(v) for v in y),
        multiplicities=tuple(int(t) for t in multiplicities),
        granularity=granularity,
        rounds=rounds,
        success=success,
        attempts=attempts,
        objective=objective,
        energy=math.fsum(y),
    )
