# workers/pool.py - bench 작업 풀

from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List, Sequence

from loguru import logger

from domain.exceptions import DomainException, WorkerPoolError

class WorkerPool:
    """concurrent.futures 프로세스 풀을 사용한 작업 풀"""

    def __init__(self, max_workers: int = 1):
        """
        초기화

        Args:
            max_workers: 최대 작업자 수 (1 이하면 현재 프로세스에서 순차 실행)
        """
        self.max_workers = max(1, int(max_workers))

    def map_ordered(self, fn: Callable[[Any], Any], items: Sequence[Any]) -> List[Any]:
        """
        작업들을 실행하고 제출 순서대로 결과를 반환합니다.

        Args:
            fn: 모듈 최상위 함수 (프로세스 풀에서 피클 가능해야 함)
            items: 작업 입력

        Returns:
            List[Any]: items 와 같은 순서의 결과

        Raises:
            WorkerPoolError: 작업이 도메인 예외가 아닌 오류로 실패한 경우
        """
        items = list(items)
        if self.max_workers == 1 or len(items) <= 1:
            logger.debug(f"작업 {len(items)}개 순차 실행")
            return [self._run_one(fn, item, idx) for idx, item in enumerate(items)]

        logger.info(f"작업 {len(items)}개를 작업자 {self.max_workers}개로 실행")
        try:
            with ProcessPoolExecutor(max_workers=self.max_workers) as executor:
                futures = [executor.submit(fn, item) for item in items]
                return [future.result() for future in futures]
        except DomainException:
            raise
        except Exception as e:
            logger.error(f"작업 풀 실행 중 오류 발생: {e}")
            raise WorkerPoolError(f"작업 실행 실패: {str(e)}")

    def _run_one(self, fn: Callable[[Any], Any], item: Any, idx: int) -> Any:
        try:
            return fn(item)
        except DomainException:
            raise
        except Exception as e:
            logger.error(f"작업 {idx} 실행 중 오류 발생: {e}")
            raise WorkerPoolError(f"작업 {idx} 실행 실패: {str(e)}")
