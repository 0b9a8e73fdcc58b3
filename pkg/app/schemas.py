# app/schemas.py - 생성기 명세와 bench 명세 (JSON 입력 검증)

from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, validator

from app.config import SolverConfig
from domain.regions import Direction

COMMANDS = (
    "lp", "pack", "pack-rects", "pack-boxes", "pack-points-rects", "pack-points-fattri",
    "local-search", "exact", "bench",
)
# bench 행은 정수해 무게를 기록하므로 lp 와 bench 자신은 제외
BENCH_ALGORITHMS = tuple(c for c in COMMANDS if c not in ("lp", "bench"))

class GeneratorKind(str, Enum):
    """인스턴스 생성기 종류"""
    RANDOM_DISKS = "random_disks"
    RANDOM_RECTS = "random_rects"
    RANDOM_BOXES = "random_boxes"
    RANDOM_FAT_TRIANGLES = "random_fat_triangles"
    FLOWER = "flower"
    K3_SEGMENTS = "k3_segments"
    TRI_MATCHING_HARD = "tri_matching_hard"
    GRAPH_IS_HARD = "graph_is_hard"

def _range_check(v):
    lo, hi = v
    if lo > hi:
        raise ValueError(f"빈 범위입니다: [{lo}, {hi}]")
    return v

class GeneratorSpec(BaseModel):
    """인스턴스 생성 명세. seed 는 필수입니다."""
    kind: GeneratorKind
    seed: int
    direction: Direction = Direction.PACK_REGIONS
    n_regions: int = Field(10, ge=0)
    n_points: int = Field(20, ge=0)
    cap_range: Tuple[int, int] = (1, 1)
    weight_range: Tuple[float, float] = (1.0, 1.0)
    radius_range: Tuple[float, float] = (0.05, 0.25)
    extent_range: Tuple[float, float] = (0.05, 0.4)
    fatness_bound: float = Field(4.0, ge=1.2)
    jitter: bool = True

    # tri_matching_hard: (a, b, c) 세 짝, graph_is_hard: 정점 수와 간선
    triples: List[Tuple[int, int, int]] = Field(default_factory=list)
    graph_vertices: Optional[int] = None
    graph_edges: List[Tuple[int, int]] = Field(default_factory=list)

    _ranges = validator("cap_range", "weight_range", "radius_range", "extent_range", allow_reuse=True)(_range_check)

    @validator("cap_range")
    def _caps_positive(cls, v):
        if v[0] < 1:
            raise ValueError("용량은 1 이상이어야 합니다")
        return v

    @validator("weight_range")
    def _weights_nonnegative(cls, v):
        if v[0] < 0:
            raise ValueError("가중치는 0 이상이어야 합니다")
        return v

    @validator("radius_range", "extent_range")
    def _extents_positive(cls, v):
        if v[0] <= 0:
            raise ValueError("크기는 양수여야 합니다")
        return v

    @validator("seed")
    def _seed_range(cls, v):
        if not 0 <= v < 2 ** 64:
            raise ValueError("seed 는 64비트 부호 없는 정수여야 합니다")
        return v

class BenchSpec(BaseModel):
    """bench 명세: 생성기 × 인스턴스 수 × 시드 × 알고리즘"""
    generator: GeneratorSpec
    instances: int = Field(20, ge=1)
    seeds: List[int] = Field(default_factory=lambda: [0])
    algorithms: List[str] = Field(default_factory=lambda: ["pack"])
    with_oracle: bool = False

    @validator("algorithms")
    def _known_algorithms(cls, v):
        unknown = [a for a in v if a not in BENCH_ALGORITHMS]
        if unknown:
            raise ValueError(f"bench 에서 쓸 수 없는 알고리즘입니다: {unknown}")
        if not v:
            raise ValueError("알고리즘이 하나 이상 필요합니다")
        return v

    @validator("seeds", each_item=True)
    def _seed_range(cls, v):
        if not 0 <= v < 2 ** 64:
            raise ValueError("seed 는 64비트 부호 없는 정수여야 합니다")
        return v

class RunOptions(BaseModel):
    """단일 실행과 bench 작업이 공유하는 실행 옵션"""
    solver: SolverConfig = Field(default_factory=SolverConfig)
    phi: Optional[int] = Field(None, ge=1)
    b: int = Field(3, ge=1)
    with_oracle: bool = False

class ConfigFile(BaseModel):
    """--config 로 읽는 JSON 설정 파일"""
    solver: Optional[SolverConfig] = None
    generator: Optional[GeneratorSpec] = None
    bench: Optional[BenchSpec] = None

    class Config:
        extra = "forbid"
