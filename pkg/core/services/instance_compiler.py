# core/services/instance_compiler.py - 기하 인스턴스 → 하이퍼그래프

from dataclasses import dataclass
from typing import List, Tuple

from loguru import logger

from core.services.geometry import region_contains
from domain.entities import Hyperedge, Hypergraph
from domain.regions import Direction, GeometricInstance

@dataclass(frozen=True)
class Provenance:
    """하이퍼그래프 정점/간선이 어느 점·영역에서 왔는지"""
    direction: Direction
    # PackRegions 이면 영역 인덱스, PackPoints 이면 점 인덱스
    vertex_source: Tuple[int, ...]
    # PackRegions 이면 점 인덱스, PackPoints 이면 영역 인덱스
    edge_source: Tuple[int, ...]

def containment_lists(inst: GeometricInstance) -> List[List[int]]:
    """영역마다 포함하는 점 인덱스 목록"""
    return [
        [j for j, p in enumerate(inst.points) if region_contains(r.region, p.coords)]
        for r in inst.regions
    ]

def build_hypergraph(inst: GeometricInstance) -> Tuple[Hypergraph, Provenance]:
    """
    기하 인스턴스를 하이퍼그래프로 바꿉니다.

    PackRegions: 정점 = 영역(가중치), 점마다 그 점을 포함하는 영역들의 간선(용량 = 점 용량).
    PackPoints: 정점 = 점(가중치), 영역마다 포함된 점들의 간선(용량 = 영역 용량).
    빈 간선은 버립니다.

    Args:
        inst: 기하 인스턴스

    Returns:
        Tuple[Hypergraph, Provenance]: 하이퍼그래프와 출처 맵
    """
    contained = containment_lists(inst)
    edges: List[Hyperedge] = []
    sources: List[int] = []
    if inst.direction == Direction.PACK_REGIONS:
        weights = tuple(float(r.value) for r in inst.regions)
        labels = tuple(f"region:{i}" for i in range(len(inst.regions)))
        by_point: List[List[int]] = [[] for _ in inst.points]
        for i, members in enumerate(contained):
            for j in members:
                by_point[j].append(i)
        for j, members in enumerate(by_point):
            if members:
                edges.append(Hyperedge(tuple(members), int(inst.points[j].value), f"point:{j}"))
                sources.append(j)
        vertex_source = tuple(range(len(inst.regions)))
    else:
        weights = tuple(float(p.value) for p in inst.points)
        labels = tuple(f"point:{j}" for j in range(len(inst.points)))
        for i, members in enumerate(contained):
            if members:
                edges.append(Hyperedge(tuple(members), int(inst.regions[i].value), f"region:{i}"))
                sources.append(i)
        vertex_source = tuple(range(len(inst.points)))

    H = Hypergraph(vertex_weights=weights, edges=tuple(edges), vertex_labels=labels)
    logger.debug(
        f"하이퍼그래프 변환 ({inst.direction.value}): 정점 {H.num_vertices}, 간선 {H.num_edges}"
    )
    return H, Provenance(inst.direction, vertex_source, tuple(sources))
