# workers/tasks.py - bench 작업

from typing import Any, Dict, List

from loguru import logger

from app.runner import oracle_value, ratio, solve
from app.schemas import BenchSpec, GeneratorSpec, RunOptions
from core.services.instance_generator import generate_instance
from core.services.random_streams import STREAM_BENCH, derive_seed

def bench_payloads(spec: BenchSpec, options: RunOptions) -> List[Dict[str, Any]]:
    """
    bench 명세를 (인스턴스, 시드) 작업으로 펼칩니다.

    인스턴스 i 의 생성기 시드는 derive_seed(generator.seed, STREAM_BENCH, i),
    솔버 시드는 derive_seed(s, STREAM_BENCH, i) 입니다.
    """
    payloads = []
    for i in range(spec.instances):
        generator = spec.generator.copy(update={"seed": derive_seed(spec.generator.seed, STREAM_BENCH, i)})
        for s in spec.seeds:
            solver = options.solver.with_updates(seed=derive_seed(s, STREAM_BENCH, i))
            payloads.append({
                "instance_id": f"{spec.generator.kind.value}-{i:04d}",
                "seed": s,
                "generator": generator.json(),
                "options": options.copy(update={"solver": solver, "with_oracle": spec.with_oracle}).json(),
                "algorithms": list(spec.algorithms),
            })
    return payloads

def run_bench_case(payload: Dict[str, Any]) -> List[Dict[str, Any]]:
    """
    bench 작업 하나: 인스턴스를 만들고 알고리즘마다 한 행을 냅니다.

    Args:
        payload: bench_payloads 가 만든 작업 (JSON 문자열 필드로 피클 가능)

    Returns:
        List[Dict[str, Any]]: BENCH_COLUMNS 열을 가진 행들
    """
    generator = GeneratorSpec.parse_raw(payload["generator"])
    options = RunOptions.parse_raw(payload["options"])
    instance = generate_instance(generator)
    optimum = oracle_value(instance, options) if options.with_oracle else None

    rows = []
    for algo in payload["algorithms"]:
        solution, wall_ms = solve(algo, instance, options)
        rows.append({
            "instance_id": payload["instance_id"],
            "algo": algo,
            "seed": payload["seed"],
            "weight": solution.weight,
            "lp_obj": solution.lp_objective,
            "oracle_opt": optimum,
            "ratio": ratio(solution.weight, optimum),
            "feasible": solution.feasible,
            "beta": solution.bicriteria_bound,
            "wall_ms": round(wall_ms, 3),
        })
    logger.debug(f"bench {payload['instance_id']} seed={payload['seed']}: {len(rows)}행")
    return rows
