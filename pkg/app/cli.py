# app/cli.py - 명령행 진입점

import argparse
import sys
from typing import Any, Dict, List, Optional, Sequence

from loguru import logger
from pydantic import ValidationError

from app.config import SolverConfig, get_settings
from app.dependencies import get_instance_repository, get_worker_pool
from app.logging_setup import configure_logging
from app.runner import Instance, run
from app.schemas import COMMANDS, BenchSpec, ConfigFile, GeneratorSpec, RunOptions
from core.services.instance_generator import generate_instance
from domain.exceptions import DomainException, InfeasibleOutputError, InvalidInstanceError
from infrastructure.reporting.report_writer import write_bench_csv, write_json_report
from infrastructure.storage.instance_repository import load_instance
from workers.tasks import bench_payloads, run_bench_case

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geopack", description=get_settings().APP_NAME)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--instance", help="인스턴스 JSON 파일 (하이퍼그래프 또는 기하 인스턴스)")
    parser.add_argument("--gen", help="생성기 명세 JSON (bench 에서는 bench 명세도 가능)")
    parser.add_argument("--seed", type=int, help="64비트 시드 (솔버, bench 에서는 시드 목록 대체)")
    parser.add_argument("--config", help="설정 JSON (solver / generator / bench 블록)")
    parser.add_argument("--out", help="출력 파일, 없거나 - 면 표준 출력")
    parser.add_argument("--format", choices=("csv", "json"), help="보고서 형식 (기본: bench 는 csv, 나머지는 json)")
    parser.add_argument("--with-oracle", action="store_true", help="정확 오라클 값과 비율을 함께 보고")
    parser.add_argument("--trials", type=int, help="반올림 시행 횟수")
    parser.add_argument("--alpha", type=float, help="스케일 상수 α")
    parser.add_argument("--phi", type=int, help="이중 기준 용량 완화 φ")
    parser.add_argument("--b", type=int, default=3, help="국소 탐색 교환 크기 상한")
    return parser

def _load_config(path: Optional[str]) -> ConfigFile:
    if not path:
        return ConfigFile()
    return ConfigFile.parse_obj(get_instance_repository().load_document(path))

def _options(args: argparse.Namespace, config: ConfigFile) -> RunOptions:
    solver = config.solver or SolverConfig()
    updates: Dict[str, Any] = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.alpha is not None:
        updates["alpha"] = args.alpha
    if updates:
        solver = solver.with_updates(**updates)
    return RunOptions(solver=solver, phi=args.phi, b=args.b, with_oracle=args.with_oracle)

def _load_single(args: argparse.Namespace, config: ConfigFile) -> Instance:
    repository = get_instance_repository()
    if args.instance:
        return load_instance(repository, args.instance)
    if args.gen:
        return generate_instance(GeneratorSpec.parse_obj(repository.load_document(args.gen)))
    if config.generator is not None:
        return generate_instance(config.generator)
    raise InvalidInstanceError("--instance, --gen 또는 설정의 generator 블록이 필요합니다")

def _bench_spec(args: argparse.Namespace, config: ConfigFile) -> BenchSpec:
    spec = config.bench
    if args.gen:
        document = get_instance_repository().load_document(args.gen)
        if "generator" in document:
            spec = BenchSpec.parse_obj(document)
        elif spec is not None:
            spec = spec.copy(update={"generator": GeneratorSpec.parse_obj(document)})
        else:
            spec = BenchSpec(generator=GeneratorSpec.parse_obj(document))
    elif spec is None and config.generator is not None:
        spec = BenchSpec(generator=config.generator)
    if spec is None:
        raise InvalidInstanceError("bench 에는 --gen 또는 설정의 bench/generator 블록이 필요합니다")
    updates: Dict[str, Any] = {}
    if args.seed is not None:
        updates["seeds"] = [args.seed]
    if args.with_oracle:
        updates["with_oracle"] = True
    return spec.copy(update=updates) if updates else spec

def _row(report: Dict[str, Any]) -> Dict[str, Any]:
    solution = report["solution"]
    return {
        "instance_id": report["instance_digest"][:16],
        "algo": report["command"],
        "seed": report["seed"],
        "weight": report["weight"],
        "lp_obj": report["lp_objective"],
        "oracle_opt": report.get("oracle_opt"),
        "ratio": report.get("ratio"),
        "feasible": solution.get("feasible", True),
        "beta": solution.get("beta", 1),
        "wall_ms": round(report["wall_ms"], 3),
    }

def run_bench(spec: BenchSpec, options: RunOptions) -> List[Dict[str, Any]]:
    """bench 작업을 작업 풀로 실행하고 행을 모읍니다."""
    results = get_worker_pool().map_ordered(run_bench_case, bench_payloads(spec, options))
    return [row for rows in results for row in rows]

def execute(args: argparse.Namespace) -> None:
    config = _load_config(args.config)
    options = _options(args, config)
    if args.command == "bench":
        rows = run_bench(_bench_spec(args, config), options)
        if args.format == "json":
            write_json_report({"rows": rows}, args.out)
        else:
            write_bench_csv(rows, args.out)
        return

    report = run(args.command, _load_single(args, config), options)
    if args.format == "csv":
        write_bench_csv([_row(report)], args.out)
    else:
        write_json_report(report, args.out)

def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    명령행 진입점

    Returns:
        int: 0 성공, 2 재검증 실패 (실현 불가능한 출력), 1 그 밖의 오류
    """
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        execute(args)
    except InfeasibleOutputError as e:
        logger.error(f"실현 불가능한 출력: {e.message}")
        return EXIT_INFEASIBLE
    except ValidationError as e:
        logger.error(f"설정 검증 중 오류 발생: {e}")
        return EXIT_ERROR
    except DomainException as e:
        logger.error(f"{args.command} 실행 중 오류 발생: {e.message}")
        return EXIT_ERROR
    return EXIT_OK

if __name__ == "__main__":
    sys.exit(main())
