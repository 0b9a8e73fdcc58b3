# app/dependencies.py - 의존성 조립

from app.config import get_settings
from core.interfaces.lp_solver import LPSolverInterface
from infrastructure.lp.pulp_solver import PulpLPSolver
from infrastructure.storage.instance_repository import InstanceRepository, JsonFileInstanceRepository
from workers.pool import WorkerPool

# 저장소 의존성
def get_instance_repository() -> InstanceRepository:
    """설정의 STRICT_JSON 을 따르는 인스턴스 리포지토리를 반환합니다."""
    return JsonFileInstanceRepository(strict=get_settings().STRICT_JSON)

# LP 의존성
def get_lp_solver() -> LPSolverInterface:
    """PuLP/CBC LP 솔버를 반환합니다."""
    return PulpLPSolver()

# 작업 풀 의존성
def get_worker_pool() -> WorkerPool:
    """GEOPACK_THREADS 로 병렬 정도를 제한한 작업 풀을 반환합니다."""
    return WorkerPool(max_workers=get_settings().GEOPACK_THREADS)
