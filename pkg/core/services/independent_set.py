# core/services/independent_set.py - 가중 Turán 독립 집합

from typing import Hashable, Set

import networkx as nx

from domain.exceptions import InfeasibleOutputError

def turan_weighted_is(graph: nx.Graph, weight: str = "weight") -> Set[Hashable]:
    """
    w_v/(deg(v)+1) 가 가장 큰 정점을 고르고 닫힌 이웃을 지우는 탐욕 독립 집합.

    결과 무게는 Σ w_v/(deg(v)+1) 이상입니다. 동률은 가장 작은 노드가 이깁니다.

    Args:
        graph: 단순 그래프 (노드 속성 weight, 없으면 1)
        weight: 가중치 속성 이름

    Returns:
        Set: 독립 집합

    Raises:
        InfeasibleOutputError: 결과가 독립 집합이 아닌 경우 (발생하면 안 됨)
    """
    remaining = graph.copy()
    independent: Set[Hashable] = set()
    while remaining:
        node = min(
            remaining.nodes,
            key=lambda v: (-remaining.nodes[v].get(weight, 1.0) / (remaining.degree(v) + 1), v),
        )
        independent.add(node)
        remaining.remove_nodes_from(set(remaining.neighbors(node)) | {node})

    if graph.subgraph(independent).number_of_edges() > 0:
        raise InfeasibleOutputError("탐욕 결과가 독립 집합이 아닙니다", solution=sorted(independent))
    return independent

def independence_bound(graph: nx.Graph, weight: str = "weight") -> float:
    """Σ w_v/(deg(v)+1), 탐욕 결과가 넘어야 하는 하한"""
    return sum(data.get(weight, 1.0) / (graph.degree(v) + 1) for v, data in graph.nodes(data=True))
