# tests/conftest.py - 공용 픽스처 (K3, 꽃, 작은 무작위 인스턴스, 전수 탐색)

from itertools import combinations
from typing import Callable, List, Sequence, Tuple

import numpy as np
import pytest

from app.config import get_settings
from app.schemas import GeneratorSpec
from core.services.instance_generator import generate_instance
from core.services.lp_relaxation import make_fractional
from domain.entities import FractionalSolution, Hyperedge, Hypergraph
from domain.regions import GeometricInstance

def make_k3(capacity: int = 1) -> Hypergraph:
    return Hypergraph(
        vertex_weights=(1.0, 1.0, 1.0),
        edges=(
            Hyperedge((0, 1), capacity),
            Hyperedge((1, 2), capacity),
            Hyperedge((0, 2), capacity),
        ),
    )

def random_hypergraph(seed: int, n: int = 8, m: int = 6, max_size: int = 4,
                      max_cap: int = 2, unit_weights: bool = False) -> Hypergraph:
    """간선 크기 2..max_size, 용량 1..max_cap 인 작은 무작위 하이퍼그래프"""
    rng = np.random.default_rng(seed)
    weights = [1.0] * n if unit_weights else [float(w) for w in rng.uniform(0.5, 2.0, n)]
    edges = []
    for _ in range(m):
        size = int(rng.integers(2, min(max_size, n) + 1))
        members = tuple(int(v) for v in rng.choice(n, size=size, replace=False))
        edges.append(Hyperedge(members, int(rng.integers(1, max_cap + 1))))
    return Hypergraph(vertex_weights=tuple(weights), edges=tuple(edges))

def brute_force_optimum(H: Hypergraph) -> Tuple[float, Tuple[int, ...]]:
    """2^n 부분 집합 전수 탐색 최적값"""
    n = H.num_vertices
    edge_masks = [sum(1 << v for v in e.vertices) for e in H.edges]
    best, best_set = 0.0, ()
    for mask in range(1 << n):
        if all(bin(mask & em).count("1") <= e.capacity for em, e in zip(edge_masks, H.edges)):
            chosen = tuple(v for v in range(n) if mask >> v & 1)
            weight = H.weight_of(chosen)
            if weight > best + 1e-12:
                best, best_set = weight, chosen
    return best, best_set

def subsets(items: Sequence[int]):
    for size in range(len(items) + 1):
        yield from combinations(items, size)

@pytest.fixture
def k3() -> Hypergraph:
    return make_k3()

@pytest.fixture
def half_x(k3) -> FractionalSolution:
    return make_fractional(k3, [0.5, 0.5, 0.5])

@pytest.fixture
def flower() -> GeometricInstance:
    return generate_instance(GeneratorSpec(kind="flower", seed=0))

@pytest.fixture
def small_corpus() -> List[Hypergraph]:
    return [random_hypergraph(seed, n=7, m=5) for seed in range(20)]

@pytest.fixture
def brute_force() -> Callable[[Hypergraph], Tuple[float, Tuple[int, ...]]]:
    return brute_force_optimum

@pytest.fixture
def settings_env(monkeypatch):
    """환경 변수를 바꾼 뒤 설정 캐시를 비우는 도우미"""
    get_settings.cache_clear()

    def apply(**values) -> None:
        for name, value in values.items():
            monkeypatch.setenv(name, str(value))
        get_settings.cache_clear()

    yield apply
    get_settings.cache_clear()
