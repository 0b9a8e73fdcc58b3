# core/services/unit_capacity_core.py - 단위 용량 점 패킹 핵심 (희소화 → 복제 → 충돌 그래프 → Turán)

from itertools import combinations
from typing import Dict, List, Sequence, Set, Tuple

import networkx as nx
from loguru import logger

from app.config import SolverConfig
from core.interfaces.packer import CanonicalCoverInterface
from core.services.independent_set import turan_weighted_is
from core.services.lp_relaxation import build_and_solve_lp
from core.services.random_streams import derive_seed, STREAM_SPARSIFY
from core.services.sparsify import sparsify
from domain.entities import Hyperedge, Hypergraph

def unit_instance(weights: Sequence[float], pieces: Sequence[Tuple[int, ...]]) -> Hypergraph:
    """조각마다 용량 1 간선을 둔 단위 용량 하이퍼그래프 (빈 조각은 제외)"""
    return Hypergraph(
        vertex_weights=tuple(weights),
        edges=tuple(Hyperedge(tuple(p), 1, f"piece:{i}") for i, p in enumerate(pieces) if p),
    )

def replicate(multiplicities: Sequence[int]) -> Tuple[List[int], Dict[int, List[int]]]:
    """점 v 를 t_v 번 복제합니다. (복제본 → 원래 점, 원래 점 → 복제본 목록)"""
    origin: List[int] = []
    copies: Dict[int, List[int]] = {}
    for v, t in enumerate(multiplicities):
        for _ in range(int(t)):
            copies.setdefault(v, []).append(len(origin))
            origin.append(v)
    return origin, copies

def solve_unit_points(weights: Sequence[float], pieces: Sequence[Tuple[int, ...]],
                      cover: CanonicalCoverInterface, config: SolverConfig) -> Tuple[List[int], int]:
    """
    단위 용량 조각에 점을 패킹합니다. 각 조각에는 결과 점이 덮개 조각 수만큼만 들어갑니다.

    Args:
        weights: 점 가중치
        pieces: 단위 조각별 원래 점 인덱스
        cover: 정규 덮개 제공자
        config: 솔버 설정 (seed, 희소화 매개변수)

    Returns:
        Tuple[List[int], int]: 선택된 원래 점 인덱스와, 덮개가 정확하지 않아 조각 전체를
            완전 그래프로 처리한 조각 수
    """
    H = unit_instance(weights, pieces)
    if H.num_edges == 0:
        return list(range(H.num_vertices)), 0

    x = build_and_solve_lp(H, config.resolved_lp_tol())
    sparse = sparsify(H, x, derive_seed(config.seed, STREAM_SPARSIFY), config)
    if sparse.success:
        multiplicities = list(sparse.multiplicities)
    else:
        logger.warning("희소화 실패: 희소화하지 않은 지지 집합(복제 1회)으로 진행합니다")
        multiplicities = [1 if value > 0 else 0 for value in x.values]

    origin, copies = replicate(multiplicities)
    if not origin:
        return [], 0
    piece_members = [
        tuple(c for v in piece for c in copies.get(v, ()))
        for piece in pieces
    ]
    k = max((len(p) for p in piece_members), default=0)
    if k == 0:
        return sorted(copies), 0

    pairs, covers = cover.build(origin, piece_members, k)
    pieces_of: List[Set[int]] = [set() for _ in origin]
    for pid, members in enumerate(piece_members):
        for c in members:
            pieces_of[c].add(pid)

    graph = nx.Graph()
    graph.add_nodes_from((c, {"weight": weights[v]}) for c, v in enumerate(origin))
    graph.add_edges_from((a, b) for a, b in pairs if pieces_of[a] & pieces_of[b])
    for members in copies.values():
        graph.add_edges_from(combinations(members, 2))

    fallbacks = 0
    for pid, members in enumerate(piece_members):
        parts = covers[pid]
        if not members:
            continue
        exact = parts is not None and set().union(*map(set, parts)) == set(members)
        if not exact:
            fallbacks += 1
            graph.add_edges_from(combinations(members, 2))
    if fallbacks:
        logger.warning(f"정규 덮개가 정확하지 않은 조각 {fallbacks}개를 완전 그래프로 처리했습니다")

    chosen = turan_weighted_is(graph)
    logger.debug(
        f"단위 용량 핵심: 복제본 {len(origin)}, k={k}, 충돌 간선 {graph.number_of_edges()}, 선택 {len(chosen)}"
    )
    return sorted({origin[c] for c in chosen}), fallbacks
