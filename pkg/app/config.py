# app/config.py - 애플리케이션 설정과 솔버 설정

import os
import math
from typing import Optional
from functools import lru_cache
from pydantic import BaseModel, BaseSettings, validator

from domain.entities import OrderingMode

class Settings(BaseSettings):
    """애플리케이션 설정 클래스"""
    # 애플리케이션 설정
    APP_NAME: str = "geopack 기하 패킹 근사 도구"
    DEBUG: bool = os.getenv("DEBUG", "False").lower() in ("true", "1", "t")

    # 로깅
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE: str = os.getenv("LOG_FILE", "")

    # 병렬 처리 (bench 작업 풀 상한)
    GEOPACK_THREADS: int = int(os.getenv("GEOPACK_THREADS", "1"))

    # 알고리즘 예산
    CONFLICT_BUDGET: int = int(os.getenv("CONFLICT_BUDGET", "10000000"))
    LP_TOL: float = float(os.getenv("LP_TOL", "1e-8"))
    DESK_SCALE_POINTS: int = int(os.getenv("DESK_SCALE_POINTS", "400"))
    LOCAL_SEARCH_MAX_N: int = int(os.getenv("LOCAL_SEARCH_MAX_N", "40"))
    LOCAL_SEARCH_MAX_B: int = int(os.getenv("LOCAL_SEARCH_MAX_B", "4"))
    ORACLE_NODE_BUDGET: int = int(os.getenv("ORACLE_NODE_BUDGET", "5000000"))

    # 덤프 (비어 있으면 비활성)
    LP_DUMP_DIR: str = os.getenv("LP_DUMP_DIR", "")
    CANONICAL_DUMP_DIR: str = os.getenv("CANONICAL_DUMP_DIR", "")

    # 인스턴스 JSON 엄격 모드
    STRICT_JSON: bool = os.getenv("STRICT_JSON", "False").lower() in ("true", "1", "t")

    class Config:
        env_file = ".env"
        case_sensitive = True

@lru_cache()
def get_settings() -> Settings:
    """설정 인스턴스를 반환합니다. (싱글톤 패턴)"""
    return Settings()

DEFAULT_ALPHA = 4.0

class SolverConfig(BaseModel):
    """반올림 파이프라인 설정 (CLI 설정 파일의 "solver" 블록)"""
    alpha: float = DEFAULT_ALPHA
    gamma_value: float = 1.0
    scale_override: Optional[float] = None
    ordering_mode: OrderingMode = OrderingMode.EXACT_RESISTANCE
    # None 이면 ⌈200·ln(2n²)⌉
    sample_count: Optional[int] = None
    seed: int = 0
    trials: int = 16
    calibrate: bool = True
    conflict_budget: Optional[int] = None
    lp_tol: Optional[float] = None

    # 희소화
    sparsify_c_t: float = 1.0
    vc_dimension: int = 3
    sparsify_retries: int = 64

    # 뚱뚱한 삼각형
    fatness_bound: float = 4.0
    orientation_families: int = 8

    # 오라클
    oracle_lp_bound: bool = False

    class Config:
        use_enum_values = False
        validate_assignment = True

    @validator("alpha")
    def _alpha_positive(cls, v):
        if not v > 0 or not math.isfinite(v):
            raise ValueError("alpha 는 양의 유한수여야 합니다")
        return v

    @validator("gamma_value")
    def _gamma_at_least_one(cls, v):
        if v < 1 or not math.isfinite(v):
            raise ValueError("gamma_value 는 1 이상이어야 합니다")
        return v

    @validator("scale_override")
    def _override_at_least_one(cls, v):
        if v is not None and v < 1:
            raise ValueError("scale_override 는 1 이상이어야 합니다")
        return v

    @validator("sample_count", "trials", "sparsify_retries", "vc_dimension", "orientation_families")
    def _positive_int(cls, v):
        if v is not None and v < 1:
            raise ValueError("양의 정수가 필요합니다")
        return v

    @validator("seed")
    def _seed_range(cls, v):
        if not 0 <= v < 2 ** 64:
            raise ValueError("seed 는 64비트 부호 없는 정수여야 합니다")
        return v

    @validator("lp_tol")
    def _tol_range(cls, v):
        if v is not None and not 0 < v <= 1e-3:
            raise ValueError("lp_tol 은 (0, 1e-3] 범위여야 합니다")
        return v

    @validator("fatness_bound")
    def _fatness(cls, v):
        if v < 1:
            raise ValueError("fatness_bound 는 1 이상이어야 합니다")
        return v

    def resolved_conflict_budget(self) -> int:
        return self.conflict_budget or get_settings().CONFLICT_BUDGET

    def resolved_lp_tol(self) -> float:
        return self.lp_tol or get_settings().LP_TOL

    def resolved_sample_count(self, n: int) -> int:
        if self.sample_count is not None:
            return self.sample_count
        return max(1, math.ceil(200 * math.log(2 * max(n, 1) ** 2)))

    def with_updates(self, **changes) -> 'SolverConfig':
        data = self.dict()
        data.update(changes)
        return SolverConfig(**data)
