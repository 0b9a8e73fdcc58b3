from typing import List, Optional
from abc import ABC, abstractmethod
from domain.entities import Hypergraph

class LPSolverInterface(ABC):
    """하이퍼그래프 패킹 LP 솔버 인터페이스"""

    @abstractmethod
    def solve(self, hypergraph: Hypergraph, tol: float) -> List[float]:
        """
        max Σ w_v x_v  s.t.  Σ_{v∈h} x_v ≤ cap(h),  0 ≤ x ≤ 1 을 풉니다.

        Args:
            hypergraph: 패킹 인스턴스
            tol: 허용 오차

        Returns:
            List[float]: 정점별 x_v (후처리 전의 원시 값)

        Raises:
            LPUnsolvedError: 최적 상태로 끝나지 않은 경우
        """
        pass

    @abstractmethod
    def dump(self, hypergraph: Hypergraph, path: str) -> Optional[str]:
        """
        LP 를 텍스트 교환 형식으로 기록합니다.

        Args:
            hypergraph: 패킹 인스턴스
            path: 출력 파일 경로

        Returns:
            Optional[str]: 기록된 경로
        """
        pass
