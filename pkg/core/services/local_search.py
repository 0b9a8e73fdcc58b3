# core/services/local_search.py - 단위 가중치 원판의 b-국소 탐색과 국소 최적성 검증

from itertools import combinations
from typing import FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx
from loguru import logger

from app.config import get_settings
from core.services.hypergraph_ops import check_packing
from core.services.instance_compiler import build_hypergraph, containment_lists
from domain.entities import LocalSearchState, PackingSolution
from domain.exceptions import InfeasibleOutputError, InvalidInstanceError, SearchBudgetExceeded
from domain.regions import Direction, Disk, GeometricInstance

DEFAULT_SWAP_BOUND = 3

Swap = Tuple[Tuple[int, ...], Tuple[int, ...]]

def _validate(inst: GeometricInstance) -> None:
    if inst.direction != Direction.PACK_REGIONS:
        raise InvalidInstanceError("국소 탐색은 pack_regions 방향만 지원합니다")
    for r in inst.regions:
        if type(r.region) is not Disk:
            raise InvalidInstanceError(f"disk 영역만 허용됩니다: {r.region.kind}")
        if r.value != 1:
            raise InvalidInstanceError(f"원판 가중치는 모두 1 이어야 합니다: {r.value}")
    for p in inst.points:
        if p.value != 1:
            raise InvalidInstanceError(f"점 용량은 모두 1 이어야 합니다: {p.value}")

def prune_dominated(sets: Sequence[FrozenSet[int]]) -> List[int]:
    """
    비어 있지 않은 다른 원판의 점 집합을 포함하는 원판을 버립니다.

    같은 집합이면 번호가 작은 쪽을 남깁니다. 빈 원판은 아무것도 지배하지 않습니다.

    Returns:
        List[int]: 남은 원판 번호
    """
    kept = []
    for i, s in enumerate(sets):
        dominated = any(
            j != i and sets[j] and sets[j] <= s and (sets[j] != s or j < i)
            for j in range(len(sets))
        )
        if not dominated:
            kept.append(i)
    return kept

class _SwapSearch:
    def __init__(self, sets: Sequence[FrozenSet[int]], candidates: Sequence[int], b: int):
        self.sets = sets
        self.candidates = list(candidates)
        self.b = b

    def _independent(self, group: Sequence[int]) -> bool:
        seen: Set[int] = set()
        for d in group:
            if seen & self.sets[d]:
                return False
            seen |= self.sets[d]
        return True

    def swaps(self, current: Set[int]) -> Iterator[Swap]:
        """크기 순, 같은 크기에서는 사전식 순으로 개선 교환 (X, Y) 을 냅니다."""
        outside = [d for d in self.candidates if d not in current]
        for size in range(1, self.b + 2):
            for group in combinations(outside, size):
                if not self._independent(group):
                    continue
                covered = frozenset().union(*(self.sets[d] for d in group))
                conflicts = tuple(sorted(s for s in current if self.sets[s] & covered))
                if len(conflicts) <= size - 1:
                    yield group, conflicts

def local_search_disks(inst: GeometricInstance, b: int = DEFAULT_SWAP_BOUND) -> PackingSolution:
    """
    빈 집합에서 시작해 |X| ≤ b+1 개를 넣고 |X|−1 개 이하를 빼는 교환을 반복합니다.

    교환할 것이 없으면 b-국소 최적이고, 교환마다 크기가 1 이상 늘어 최대 n 번 교환합니다.

    Args:
        inst: pack_regions 방향의 단위 가중치 원판 / 단위 용량 점 인스턴스
        b: 교환 크기 상한

    Returns:
        PackingSolution: 점마다 원판 하나 이하인 해

    Raises:
        InvalidInstanceError: 사전 조건 위반
        InfeasibleOutputError: 교환 후 실현 불가능 (발생하면 안 됨)
    """
    if b < 1:
        raise InvalidInstanceError(f"b 는 1 이상이어야 합니다: {b}")
    _validate(inst)
    H, _ = build_hypergraph(inst)
    sets = [frozenset(members) for members in containment_lists(inst)]
    kept = prune_dominated(sets)
    if len(kept) < len(sets):
        logger.debug(f"지배된 원판 {len(sets) - len(kept)}개 제거")

    search = _SwapSearch(sets, kept, b)
    state = LocalSearchState(current=set(), b=b)
    while True:
        swap = next(search.swaps(state.current), None)
        if swap is None:
            break
        inserted, removed = swap
        state.apply_swap(removed, inserted)
        if not check_packing(H, state.current).feasible:
            raise InfeasibleOutputError("교환 후 점별 독립성이 깨졌습니다", solution=sorted(state.current))

    logger.info(f"국소 탐색 완료: b={b}, 교환 {len(state.swap_log)}회, 크기 {len(state.current)}")
    return check_packing(H, state.current)

def verify_b_local_optimality(inst: GeometricInstance, S: Sequence[int],
                              b: int = DEFAULT_SWAP_BOUND) -> Tuple[bool, Optional[Swap]]:
    """
    S 가 b-국소 최적인지 모든 후보 교환을 전수 검사합니다.

    Args:
        inst: 원판 인스턴스
        S: 점별 독립인 원판 번호 집합
        b: 교환 크기 상한

    Returns:
        Tuple[bool, Optional[Swap]]: (국소 최적 여부, 개선 교환 (넣을 원판, 뺄 원판) 또는 None)

    Raises:
        SearchBudgetExceeded: 원판 수나 b 가 검증 상한을 넘는 경우
        InvalidInstanceError: S 가 점별 독립이 아닌 경우
    """
    settings = get_settings()
    if len(inst.regions) > settings.LOCAL_SEARCH_MAX_N or b > settings.LOCAL_SEARCH_MAX_B:
        raise SearchBudgetExceeded(
            f"검증 상한 초과: 원판 {len(inst.regions)} (≤ {settings.LOCAL_SEARCH_MAX_N}), "
            f"b {b} (≤ {settings.LOCAL_SEARCH_MAX_B})"
        )
    _validate(inst)
    H, _ = build_hypergraph(inst)
    if not check_packing(H, S).feasible:
        raise InvalidInstanceError("S 가 점별 독립 집합이 아닙니다")

    sets = [frozenset(members) for members in containment_lists(inst)]
    search = _SwapSearch(sets, range(len(sets)), b)
    witness = next(search.swaps(set(S)), None)
    return witness is None, witness

def exchange_graph(inst: GeometricInstance, first: Sequence[int], second: Sequence[int]) -> nx.Graph:
    """두 점별 독립 집합 사이, 점을 공유하는 원판 쌍을 잇는 이분 그래프"""
    sets = [frozenset(members) for members in containment_lists(inst)]
    graph = nx.Graph()
    left = [("first", d) for d in first]
    right = [("second", d) for d in second]
    graph.add_nodes_from(left, bipartite=0)
    graph.add_nodes_from(right, bipartite=1)
    graph.add_edges_from(
        (a, c) for a in left for c in right if a[1] == c[1] or sets[a[1]] & sets[c[1]]
    )
    return graph
