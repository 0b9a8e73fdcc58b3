from abc import ABC, abstractmethod
from typing import FrozenSet, List, Optional, Sequence, Tuple

from domain.entities import Hypergraph, PackingSolution

class UnitCapacitySolverInterface(ABC):
    """단위 용량 (독립 집합) 패킹 부분 솔버 인터페이스"""

    @abstractmethod
    def solve_unit(self, hypergraph: Hypergraph) -> PackingSolution:
        """
        모든 용량이 1 인 하이퍼그래프에서 실현 가능한 정점 집합을 구합니다.

        Args:
            hypergraph: 단위 용량 인스턴스

        Returns:
            PackingSolution: β=1 로 실현 가능한 해 (정점 인덱스는 입력 기준)
        """
        pass

class CanonicalCoverInterface(ABC):
    """복제된 점 위에서 정규 조각 덮개와 충돌 간선을 만드는 인터페이스"""

    @abstractmethod
    def build(
        self,
        origin: Sequence[int],
        piece_members: Sequence[Tuple[int, ...]],
        k: int,
    ) -> Tuple[FrozenSet[Tuple[int, int]], List[Optional[Tuple[Tuple[int, ...], ...]]]]:
        """
        정규 조각 집합을 만들고 단위 조각마다 덮개를 구합니다.

        Args:
            origin: 복제본별 원래 점 인덱스
            piece_members: 단위 조각별 복제본 인덱스
            k: 조각당 최대 복제본 수

        Returns:
            Tuple: (같은 정규 조각에 함께 들어가는 복제본 쌍, 조각별 덮개 조각들의 복제본 집합 또는 None)
        """
        pass
