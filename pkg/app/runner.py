# app/runner.py - 명령 디스패치와 보고서 조립

import dataclasses
import json
import time
from typing import Any, Callable, Dict, Optional, Tuple, Union

from loguru import logger

from app.dependencies import get_lp_solver
from app.schemas import COMMANDS, RunOptions
from core.services.exact_oracle import exact_pack
from core.services.hypergraph_ops import check_packing, relax_capacities
from core.services.instance_compiler import build_hypergraph
from core.services.interval_tree_packing import pack_boxes_into_points, pack_rects_into_points
from core.services.local_search import local_search_disks
from core.services.lp_relaxation import build_and_solve_lp
from core.services.rect_point_packing import pack_points_into_rects
from core.services.rounding import pack_hypergraph, pack_regions
from core.services.triangle_point_packing import pack_points_into_fat_triangles
from domain.entities import Hypergraph, PackingSolution
from domain.exceptions import InfeasibleOutputError, InvalidInstanceError
from domain.regions import GeometricInstance
from infrastructure.reporting.report_writer import document_digest

Instance = Union[Hypergraph, GeometricInstance]

def as_hypergraph(instance: Instance) -> Hypergraph:
    if isinstance(instance, Hypergraph):
        return instance
    return build_hypergraph(instance)[0]

def _geometric(instance: Instance, command: str) -> GeometricInstance:
    if not isinstance(instance, GeometricInstance):
        raise InvalidInstanceError(f"{command} 명령은 기하 인스턴스가 필요합니다")
    return instance

def _pack(instance: Instance, options: RunOptions) -> PackingSolution:
    solver = get_lp_solver()
    if isinstance(instance, GeometricInstance):
        return pack_regions(instance, options.solver, phi=options.phi, solver=solver)
    if options.phi is None:
        return pack_hypergraph(instance, options.solver, solver=solver)
    solution = pack_hypergraph(relax_capacities(instance, options.phi), options.solver, solver=solver)
    return dataclasses.replace(solution, bicriteria_bound=options.phi)

def _exact(instance: Instance, options: RunOptions) -> PackingSolution:
    H = as_hypergraph(instance)
    result = exact_pack(H, lp_bound=options.solver.oracle_lp_bound)
    if not result.proven_optimal:
        logger.warning("오라클이 예산 안에 최적성을 증명하지 못했습니다")
    return check_packing(H, result.optimal_set, 1)

_DISPATCH: Dict[str, Callable[[Instance, RunOptions], PackingSolution]] = {
    "pack": _pack,
    "pack-rects": lambda inst, o: pack_rects_into_points(_geometric(inst, "pack-rects"), o.solver),
    "pack-boxes": lambda inst, o: pack_boxes_into_points(_geometric(inst, "pack-boxes"), o.solver),
    "pack-points-rects": lambda inst, o: pack_points_into_rects(_geometric(inst, "pack-points-rects"), o.solver),
    "pack-points-fattri": lambda inst, o: pack_points_into_fat_triangles(
        _geometric(inst, "pack-points-fattri"), o.solver
    ),
    "local-search": lambda inst, o: local_search_disks(_geometric(inst, "local-search"), o.b),
    "exact": _exact,
}

def revalidate(H: Hypergraph, solution: PackingSolution) -> PackingSolution:
    """
    보고 직전에 해를 원래 하이퍼그래프에서 다시 검사합니다.

    Raises:
        InfeasibleOutputError: 선언한 β 로도 용량을 넘는 경우
    """
    report = check_packing(H, solution.chosen, solution.bicriteria_bound)
    if not report.feasible:
        logger.error(f"재검증 중 오류 발생: β={solution.bicriteria_bound} 위반")
        raise InfeasibleOutputError("보고할 해가 실현 불가능합니다", solution=report)
    return dataclasses.replace(report, lp_objective=solution.lp_objective, scale=solution.scale,
                               cover_fallbacks=solution.cover_fallbacks)

def solve(command: str, instance: Instance, options: RunOptions) -> Tuple[PackingSolution, float]:
    """
    정수해를 내는 명령을 실행하고 재검증합니다.

    Returns:
        Tuple[PackingSolution, float]: (재검증한 해, 경과 시간 ms)
    """
    if command not in _DISPATCH:
        raise InvalidInstanceError(f"정수해 명령이 아닙니다: {command}")
    started = time.perf_counter()
    solution = _DISPATCH[command](instance, options)
    wall_ms = (time.perf_counter() - started) * 1000.0
    return revalidate(as_hypergraph(instance), solution), wall_ms

def oracle_value(instance: Instance, options: RunOptions) -> float:
    return exact_pack(as_hypergraph(instance), lp_bound=options.solver.oracle_lp_bound).optimal_weight

def ratio(weight: float, optimum: Optional[float]) -> Optional[float]:
    if optimum is None or optimum <= 0:
        return None
    return weight / optimum

def instance_digest(instance: Instance) -> str:
    return document_digest(instance.to_dict())

def run(command: str, instance: Instance, options: RunOptions) -> Dict[str, Any]:
    """
    단일 명령을 실행하고 보고서를 만듭니다. bench 는 CLI 가 따로 처리합니다.

    Args:
        command: lp, pack, pack-rects, pack-boxes, pack-points-rects, pack-points-fattri, local-search, exact
        instance: 하이퍼그래프 또는 기하 인스턴스
        options: 실행 옵션

    Returns:
        Dict[str, Any]: instance_digest, config, seed, solution, lp_objective,
        oracle_opt, ratio, wall_ms 를 담은 보고서

    Raises:
        InvalidInstanceError: 모르는 명령이거나 인스턴스 종류가 맞지 않는 경우
        InfeasibleOutputError: 재검증 실패
    """
    if command not in COMMANDS or command == "bench":
        raise InvalidInstanceError(f"알 수 없는 명령입니다: {command}")

    report: Dict[str, Any] = {
        "command": command,
        "instance_digest": instance_digest(instance),
        "config": json.loads(options.json()),
        "seed": options.solver.seed,
    }
    if command == "lp":
        started = time.perf_counter()
        x = build_and_solve_lp(as_hypergraph(instance), options.solver.resolved_lp_tol(), get_lp_solver())
        report.update(solution=x.to_dict(), lp_objective=x.objective, weight=x.objective)
        report["wall_ms"] = (time.perf_counter() - started) * 1000.0
    else:
        solution, wall_ms = solve(command, instance, options)
        report.update(solution=solution.to_dict(), lp_objective=solution.lp_objective, weight=solution.weight)
        report["wall_ms"] = wall_ms

    if options.with_oracle:
        optimum = oracle_value(instance, options)
        report.update(oracle_opt=optimum, ratio=ratio(report["weight"], optimum))
    logger.info(f"{command} 완료: 무게 {report['weight']:.6f}, {report['wall_ms']:.1f} ms")
    return report
