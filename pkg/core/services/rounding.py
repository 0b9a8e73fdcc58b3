# core/services/rounding.py - 선택/변경 반올림과 패킹 파이프라인

import dataclasses
import math
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np
from loguru import logger

from app.config import DEFAULT_ALPHA, SolverConfig
from core.interfaces.lp_solver import LPSolverInterface
from core.services.instance_compiler import build_hypergraph
from core.services.hypergraph_ops import (
    check_packing, count_conflicts, minimum_capacity, relax_capacities,
)
from core.services.lp_relaxation import build_and_solve_lp
from core.services.ordering import (
    build_ordering, distinct_conflicts, estimate_violation_probability,
)
from core.services.random_streams import (
    STREAM_CALIBRATION, STREAM_SELECTION, STREAM_TRIAL, derive_seed, make_rng,
)
from domain.entities import FractionalSolution, Hypergraph, Ordering, PackingSolution
from domain.exceptions import ConflictBudgetExceeded, InfeasibleOutputError, InvalidInstanceError
from domain.regions import ClassTag, GeometricInstance

# 보정 목표: 최소 저항 정점의 위반 확률 상한
CALIBRATION_TARGET = 0.25
CALIBRATION_MAX_DOUBLINGS = 10

def _formula_scale(alpha: float, gamma: float, nu: int) -> float:
    return max(1.0, alpha * gamma ** (1.0 / nu))

def _least_resistance_vertex(H: Hypergraph, x: FractionalSolution, rho: float,
                             config: SolverConfig, step: int) -> Tuple[int, float]:
    support = [v for v in range(H.num_vertices) if x.values[v] > 0]
    samples = config.resolved_sample_count(H.num_vertices)
    seed = derive_seed(config.seed, STREAM_CALIBRATION, step)
    try:
        potentials = distinct_conflicts(H, None, x, rho, config.resolved_conflict_budget())
    except ConflictBudgetExceeded:
        potentials = None
    if potentials is not None:
        sums: Dict[int, float] = {v: 0.0 for v in support}
        for members, p in potentials.items():
            for u in members:
                if u in sums:
                    sums[u] += p
        v = min(support, key=lambda u: (rho / x.values[u] * sums[u], u))
    else:
        # 열거가 잘리면 추정 위반 확률이 가장 작은 정점을 씀
        v = min(
            support,
            key=lambda u: (estimate_violation_probability(H, u, range(H.num_vertices), x, rho, samples, seed), u),
        )
    estimate = estimate_violation_probability(H, v, range(H.num_vertices), x, rho, samples, seed)
    return v, estimate

def choose_scale(H: Hypergraph, x: FractionalSolution, config: SolverConfig) -> float:
    """
    스케일 ρ = α·γ(E)^{1/ν} 를 고릅니다.

    간선이 없거나 충돌이 하나도 없으면 공식 대신 ρ = 1 을 씁니다. 이때는 어떤 표본도
    용량을 넘지 않으므로 모든 선택이 받아들여집니다.

    보정이 켜져 있으면 최소 저항 정점의 추정 위반 확률이 1/4 이하가 될 때까지
    α 를 두 배씩 늘립니다 (상한 2^10·기본값).

    Args:
        H: 하이퍼그래프
        x: 분수해
        config: 솔버 설정

    Returns:
        float: ρ ≥ 1
    """
    if config.scale_override is not None:
        return float(config.scale_override)
    nu = minimum_capacity(H)
    if nu is None or count_conflicts(H) == 0:
        # 충돌이 없으면 어떤 표본도 넘치지 않음
        return 1.0

    alpha = config.alpha
    rho = _formula_scale(alpha, config.gamma_value, nu)
    if not config.calibrate or not x.support:
        return rho

    alpha_cap = DEFAULT_ALPHA * 2 ** CALIBRATION_MAX_DOUBLINGS
    for step in range(CALIBRATION_MAX_DOUBLINGS + 1):
        v, estimate = _least_resistance_vertex(H, x, rho, config, step)
        logger.debug(f"보정 단계 {step}: α={alpha}, ρ={rho:.6f}, 정점 {v} 위반 추정 {estimate:.4f}")
        if estimate <= CALIBRATION_TARGET:
            return rho
        if alpha * 2 > alpha_cap:
            break
        alpha *= 2
        rho = _formula_scale(alpha, config.gamma_value, nu)
    logger.warning(f"스케일 보정이 상한에 도달했습니다: α={alpha}, ρ={rho:.6f}")
    return rho

def alteration_outcome(H: Hypergraph, x: FractionalSolution, ordering: Ordering,
                       rho: float, seed: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    반올림 한 번의 선택 집합과 수락 집합을 반환합니다.

    선택: 정점 인덱스 순서로 균등 난수를 한꺼번에 뽑아 u_v < x_v/ρ 이면 선택.
    변경: 순서대로 훑으며 모든 접한 간선 부하가 용량 미만일 때만 수락.
    """
    if not rho >= 1:
        raise InvalidInstanceError(f"스케일 ρ 는 1 이상이어야 합니다: {rho}")
    n = H.num_vertices
    if n == 0:
        return (), ()
    uniforms = make_rng(seed, STREAM_SELECTION).random(n)
    rates = np.asarray(x.values, dtype=float) / rho
    selected = uniforms < rates

    loads = [0] * H.num_edges
    accepted: List[int] = []
    for v in ordering.permutation:
        if not selected[v]:
            continue
        incident = H.incidence[v]
        if all(loads[e] < H.edges[e].capacity for e in incident):
            for e in incident:
                loads[e] += 1
            accepted.append(v)
    return tuple(int(v) for v in np.flatnonzero(selected)), tuple(accepted)

def round_with_alteration(H: Hypergraph, x: FractionalSolution, ordering: Ordering,
                          rho: float, seed: int) -> PackingSolution:
    """
    선택/변경 반올림을 한 번 수행합니다.

    Returns:
        PackingSolution: 항상 β=1 로 실현 가능한 해

    Raises:
        InfeasibleOutputError: 재검증 실패 (발생하면 안 됨)
    """
    _, accepted = alteration_outcome(H, x, ordering, rho, seed)
    solution = check_packing(H, accepted, 1)
    if not solution.feasible:
        raise InfeasibleOutputError("변경 단계 결과가 용량을 넘었습니다", solution=solution)
    return dataclasses.replace(solution, scale=rho)

def pack_hypergraph(H: Hypergraph, config: SolverConfig,
                    fractional: Optional[FractionalSolution] = None,
                    solver: Optional[LPSolverInterface] = None) -> PackingSolution:
    """
    LP → 스케일 → 순서 → trials 번 반올림 중 최선을 반환합니다.

    Args:
        H: 하이퍼그래프
        config: 솔버 설정
        fractional: 이미 풀어 둔 LP 해 (없으면 새로 풂)
        solver: LP 솔버

    Returns:
        PackingSolution: 가장 무거운 실현 가능 해, lp_objective 와 scale 포함

    Raises:
        LPUnsolvedError: LP 실패
        ConflictBudgetExceeded: 정확 순서에서 충돌 열거가 잘린 경우
    """
    if H.num_vertices == 0:
        return check_packing(H, (), 1)
    x = fractional if fractional is not None else build_and_solve_lp(H, config.resolved_lp_tol(), solver)
    rho = choose_scale(H, x, config)
    ordering = build_ordering(H, x, rho, config)

    best: Optional[PackingSolution] = None
    for trial in range(config.trials):
        solution = round_with_alteration(H, x, ordering, rho, derive_seed(config.seed, STREAM_TRIAL, trial))
        if best is None or solution.weight > best.weight:
            best = solution
    logger.info(
        f"패킹 완료: 무게 {best.weight:.6f} / LP {x.objective:.6f}, ρ={rho:.4f}, 시행 {config.trials}"
    )
    return dataclasses.replace(best, lp_objective=x.objective, scale=rho)

_UNIT_GAMMA: FrozenSet[ClassTag] = frozenset({
    ClassTag.DISK, ClassTag.PSEUDO_DISK, ClassTag.SIMILAR_FAT,
    ClassTag.RECT, ClassTag.BOX, ClassTag.HALFSPACE,
})

def gamma_for_class(tag: ClassTag, energy_value: float) -> float:
    """
    인스턴스 클래스별 γ(E).

    원판류와 닮은 뚱뚱한 삼각형은 1, 임의의 뚱뚱한 삼각형은 ⌈log₂ max(E,2)⌉ 를 5 로 자른 값 (반복 로그 대용),
    일반 영역은 E 입니다.
    """
    tag = ClassTag(tag)
    if tag in _UNIT_GAMMA:
        return 1.0
    if tag == ClassTag.FAT_TRIANGLE:
        return float(max(1, min(5, math.ceil(math.log2(max(energy_value, 2.0))))))
    return max(1.0, energy_value)

def pack_regions(inst: GeometricInstance, config: SolverConfig, phi: Optional[int] = None,
                 solver: Optional[LPSolverInterface] = None) -> PackingSolution:
    """
    기하 인스턴스를 하이퍼그래프로 바꾸고 클래스별 γ 로 패킹합니다.

    phi 가 주어지면 용량을 max(cap, φ) 로 완화해 풀고 원래 인스턴스에 대해 β=φ 로 보고합니다.
    """
    H, _ = build_hypergraph(inst)
    target = relax_capacities(H, phi) if phi is not None else H
    x = build_and_solve_lp(target, config.resolved_lp_tol(), solver)
    gamma = gamma_for_class(inst.class_tag, x.energy)
    tuned = config.with_updates(gamma_value=gamma)
    solution = pack_hypergraph(target, tuned, fractional=x, solver=solver)
    beta = phi if phi is not None else 1
    report = check_packing(H, solution.chosen, beta)
    if not report.feasible:
        raise InfeasibleOutputError(f"β={beta} 이중 기준 검증 실패", solution=report)
    return dataclasses.replace(report, lp_objective=solution.lp_objective, scale=solution.scale)
