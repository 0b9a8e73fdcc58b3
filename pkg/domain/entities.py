# domain/entities.py - 도메인 엔티티 (하이퍼그래프 패킹)

import math
from enum import Enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Dict, Optional, Any, Tuple, Iterable

from domain.exceptions import InvalidInstanceError

# 간선이 하나도 없는 하이퍼그래프의 최소 용량 (모든 부분집합이 가능해)
UNCONSTRAINED: Optional[int] = None

class OrderingMode(str, Enum):
    """정점 순서 계산 방식"""
    EXACT_RESISTANCE = "exact_resistance"
    SAMPLED_VIOLATION = "sampled_violation"

@dataclass(frozen=True)
class Hyperedge:
    """용량이 있는 하이퍼간선"""
    vertices: Tuple[int, ...]
    capacity: int
    label: Optional[str] = None

    def __post_init__(self):
        members = tuple(int(v) for v in self.vertices)
        if len(set(members)) != len(members):
            raise InvalidInstanceError(f"하이퍼간선에 중복 정점이 있습니다: {members}")
        if any(v < 0 for v in members):
            raise InvalidInstanceError(f"음수 정점 인덱스: {members}")
        if int(self.capacity) != self.capacity or self.capacity < 1:
            raise InvalidInstanceError(f"용량은 1 이상의 정수여야 합니다: {self.capacity}")
        object.__setattr__(self, "vertices", tuple(sorted(members)))
        object.__setattr__(self, "capacity", int(self.capacity))

    def __len__(self) -> int:
        return len(self.vertices)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"v": list(self.vertices), "cap": self.capacity}
        if self.label is not None:
            data["label"] = self.label
        return data

@dataclass(frozen=True)
class Hypergraph:
    """가중치 정점과 용량 하이퍼간선으로 이루어진 패킹 인스턴스"""
    vertex_weights: Tuple[float, ...]
    edges: Tuple[Hyperedge, ...] = ()
    vertex_labels: Optional[Tuple[str, ...]] = None
    # 유도 부분 하이퍼그래프에서 원래 정점 인덱스
    index_map: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        weights = tuple(float(w) for w in self.vertex_weights)
        for w in weights:
            if not math.isfinite(w) or w < 0:
                raise InvalidInstanceError(f"정점 가중치는 0 이상 유한해야 합니다: {w}")
        edges = tuple(e if isinstance(e, Hyperedge) else Hyperedge(*e) for e in self.edges)
        n = len(weights)
        for idx, edge in enumerate(edges):
            if edge.vertices and edge.vertices[-1] >= n:
                raise InvalidInstanceError(
                    f"간선 {idx}의 정점 인덱스가 범위를 벗어났습니다: {edge.vertices[-1]} >= {n}"
                )
        if self.vertex_labels is not None and len(self.vertex_labels) != n:
            raise InvalidInstanceError("정점 라벨 개수가 정점 수와 다릅니다")
        if self.index_map is not None and len(self.index_map) != n:
            raise InvalidInstanceError("인덱스 맵 길이가 정점 수와 다릅니다")
        object.__setattr__(self, "vertex_weights", weights)
        object.__setattr__(self, "edges", edges)
        if self.vertex_labels is not None:
            object.__setattr__(self, "vertex_labels", tuple(self.vertex_labels))
        if self.index_map is not None:
            object.__setattr__(self, "index_map", tuple(int(i) for i in self.index_map))

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_weights)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> Tuple[Tuple[int, ...], ...]:
        """정점별로 그 정점을 포함하는 간선 인덱스"""
        incident: List[List[int]] = [[] for _ in range(self.num_vertices)]
        for idx, edge in enumerate(self.edges):
            for v in edge.vertices:
                incident[v].append(idx)
        return tuple(tuple(ids) for ids in incident)

    @cached_property
    def edge_sets(self) -> Tuple[frozenset, ...]:
        return tuple(frozenset(e.vertices) for e in self.edges)

    def weight_of(self, vertices: Iterable[int]) -> float:
        return math.fsum(self.vertex_weights[v] for v in vertices)

    @property
    def total_weight(self) -> float:
        return math.fsum(self.vertex_weights)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Hypergraph':
        """딕셔너리에서 Hypergraph 객체를 생성합니다."""
        try:
            weights = [v["w"] for v in data.get("vertices", [])]
            edges = [Hyperedge(tuple(e["v"]), e["cap"], e.get("label")) for e in data.get("edges", [])]
        except (KeyError, TypeError) as e:
            raise InvalidInstanceError(f"하이퍼그래프 문서 형식 오류: {e}")
        return cls(vertex_weights=tuple(weights), edges=tuple(edges))

    def to_dict(self) -> Dict[str, Any]:
        """Hypergraph 객체를 딕셔너리로 변환합니다."""
        return {
            "vertices": [{"w": w} for w in self.vertex_weights],
            "edges": [e.to_dict() for e in self.edges],
        }

@dataclass(frozen=True)
class Conflict:
    """k-충돌: 용량 k 간선 안의 k+1 개 정점"""
    vertices: Tuple[int, ...]
    witness_edge: int
    order: int

    def __post_init__(self):
        if len(self.vertices) != self.order + 1:
            raise InvalidInstanceError(
                f"충돌 크기 {len(self.vertices)} 가 차수+1 ({self.order + 1}) 과 다릅니다"
            )

@dataclass(frozen=True)
class FractionalSolution:
    """LP 완화의 분수해"""
    values: Tuple[float, ...]
    objective: float
    energy: float
    feasibility_slack: float

    def energy_of(self, subset: Optional[Iterable[int]] = None) -> float:
        """E(A) = Σ_{v∈A} x_v, subset 이 없으면 전체 에너지"""
        if subset is None:
            return self.energy
        return math.fsum(self.values[v] for v in subset)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(v for v, x in enumerate(self.values) if x > 0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "values": list(self.values),
            "objective": self.objective,
            "energy": self.energy,
            "feasibility_slack": self.feasibility_slack,
        }

@dataclass(frozen=True)
class PackingSolution:
    """선택된 정점 집합과 간선별 부하"""
    chosen: Tuple[int, ...]
    weight: float
    edge_loads: Tuple[int, ...]
    bicriteria_bound: int = 1
    feasible: bool = True
    lp_objective: Optional[float] = None
    scale: Optional[float] = None
    # 정규 덮개가 정확하지 않아 완전 그래프로 처리한 단위 조각 수
    cover_fallbacks: int = 0

    def __post_init__(self):
        object.__setattr__(self, "chosen", tuple(sorted(set(self.chosen))))
        if self.bicriteria_bound < 1:
            raise InvalidInstanceError(f"β 는 1 이상이어야 합니다: {self.bicriteria_bound}")

    @property
    def size(self) -> int:
        return len(self.chosen)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "chosen": list(self.chosen),
            "weight": self.weight,
            "edge_loads": list(self.edge_loads),
            "beta": self.bicriteria_bound,
            "feasible": self.feasible,
            "lp_objective": self.lp_objective,
            "scale": self.scale,
            "cover_fallbacks": self.cover_fallbacks,
        }

@dataclass(frozen=True)
class Ordering:
    """선택/변경 반올림에 쓰이는 정점 순서 v_1..v_n"""
    permutation: Tuple[int, ...]
    diagnostics: Tuple[float, ...]
    mode: OrderingMode = OrderingMode.EXACT_RESISTANCE

    def __post_init__(self):
        n = len(self.permutation)
        if sorted(self.permutation) != list(range(n)):
            raise InvalidInstanceError("순서가 정점 인덱스의 순열이 아닙니다")
        if len(self.diagnostics) != n:
            raise InvalidInstanceError("진단값 개수가 순서 길이와 다릅니다")

    @property
    def max_diagnostic(self) -> float:
        return max(self.diagnostics, default=0.0)

    def position(self) -> Dict[int, int]:
        return {v: i for i, v in enumerate(self.permutation)}

@dataclass(frozen=True)
class SparsifiedSolution:
    """희소화 결과: y_v = t_v / M"""
    values: Tuple[float, ...]
    multiplicities: Tuple[int, ...]
    granularity: int
    rounds: int
    success: bool
    attempts: int
    objective: float
    energy: float

@dataclass(frozen=True)
class OracleResult:
    """분기 한정 탐색 결과"""
    optimal_weight: float
    optimal_set: Tuple[int, ...]
    nodes_explored: int
    proven_optimal: bool

@dataclass
class LocalSearchState:
    """b-국소 탐색 상태"""
    current: set
    b: int
    swap_log: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = field(default_factory=list)

    def apply_swap(self, removed: Iterable[int], inserted: Iterable[int]) -> None:
        removed = tuple(sorted(removed))
        inserted = tuple(sorted(inserted))
        self.current.difference_update(removed)
        self.current.update(inserted)
        self.swap_log.append((removed, inserted))
