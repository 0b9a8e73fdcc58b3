# domain/exceptions.py - 도메인 예외

from typing import Any, Optional, Sequence

class DomainException(Exception):
    """도메인 계층 기본 예외"""
    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)

class InvalidInstanceError(DomainException):
    """입력 인스턴스(하이퍼그래프, 기하 인스턴스, 생성기 입력)가 유효하지 않은 경우"""
    pass

class DimensionMismatchError(InvalidInstanceError):
    """영역과 점의 차원이 맞지 않는 경우"""
    pass

class GeneralPositionError(InvalidInstanceError):
    """정규 구성에서 일반 위치(좌표 중복 없음)가 깨진 경우"""
    def __init__(self, message: str, indices: Optional[Sequence[int]] = None):
        self.indices = tuple(indices or ())
        super().__init__(message)

class AtomicMassError(InvalidInstanceError):
    """μ/k 보다 무거운 원자 질량은 분할할 수 없음"""
    def __init__(self, message: str, atom_mass: float = 0.0, limit: float = 0.0):
        self.atom_mass = atom_mass
        self.limit = limit
        super().__init__(message)

class ConflictBudgetExceeded(DomainException):
    """충돌 열거가 예산을 초과해 잘린 경우"""
    def __init__(self, message: str, seen: int = 0):
        self.seen = seen
        super().__init__(message)

class LPUnsolvedError(DomainException):
    """LP 솔버가 최적해를 반환하지 못한 경우 (최선의 점을 함께 전달)"""
    def __init__(self, message: str, best_point: Optional[Sequence[float]] = None, status: str = ""):
        self.best_point = tuple(best_point) if best_point is not None else None
        self.status = status
        super().__init__(message)

class DeskScaleExceededError(DomainException):
    """데스크 규모 상한을 넘는 입력"""
    def __init__(self, message: str, size: int = 0, bound: int = 0):
        self.size = size
        self.bound = bound
        super().__init__(message)

class CoverBoundError(DomainException):
    """측도 분할 덮개의 조각 수가 상한을 넘은 경우"""
    def __init__(self, message: str, pieces: int = 0, bound: int = 0):
        self.pieces = pieces
        self.bound = bound
        super().__init__(message)

class SearchBudgetExceeded(DomainException):
    """국소 최적성 검증의 조합 예산 초과"""
    pass

class InfeasibleOutputError(DomainException):
    """보고하려는 해가 재검증을 통과하지 못한 경우"""
    def __init__(self, message: str, solution: Any = None):
        self.solution = solution
        super().__init__(message)

class RepositoryError(DomainException):
    """인스턴스/보고서 파일 작업 중 발생한 예외"""
    pass

class WorkerPoolError(DomainException):
    """작업 풀 실행 중 발생한 예외"""
    pass
