# infrastructure/storage/instance_repository.py - 인스턴스 JSON 리포지토리

import json
import os
from abc import ABC, abstractmethod
from typing import Any, Dict, Iterable, List, Union

from loguru import logger

from domain.entities import Hypergraph
from domain.exceptions import InvalidInstanceError, RepositoryError
from domain.regions import GeometricInstance

HYPERGRAPH_FIELDS = {"vertices", "edges"}
VERTEX_FIELDS = {"w"}
EDGE_FIELDS = {"v", "cap", "label"}
GEOMETRIC_FIELDS = {"direction", "points", "regions", "class"}
POINT_FIELDS = {"x", "y", "z", "cap", "w"}
REGION_FIELDS = {"kind", "params", "w", "cap"}

def canonical_json(document: Any) -> str:
    """정렬된 키와 고정 구분자로 직렬화합니다. 같은 문서는 같은 바이트가 됩니다."""
    return json.dumps(document, sort_keys=True, separators=(",", ": "), indent=2, ensure_ascii=False)

class InstanceRepository(ABC):
    """인스턴스 리포지토리 인터페이스"""

    @abstractmethod
    def load_document(self, path: str) -> Dict[str, Any]:
        """JSON 문서를 읽습니다."""
        pass

    @abstractmethod
    def load_hypergraph(self, path: str) -> Hypergraph:
        """하이퍼그래프 인스턴스를 읽습니다."""
        pass

    @abstractmethod
    def save_hypergraph(self, hypergraph: Hypergraph, path: str) -> str:
        """하이퍼그래프 인스턴스를 저장합니다."""
        pass

    @abstractmethod
    def load_geometric(self, path: str) -> GeometricInstance:
        """기하 인스턴스를 읽습니다."""
        pass

    @abstractmethod
    def save_geometric(self, instance: GeometricInstance, path: str) -> str:
        """기하 인스턴스를 저장합니다."""
        pass

class JsonFileInstanceRepository(InstanceRepository):
    """JSON 파일을 사용한 인스턴스 리포지토리 구현"""

    def __init__(self, strict: bool = False):
        """
        초기화

        Args:
            strict: True 면 모르는 필드를 거부, False 면 경고 후 무시
        """
        self.strict = strict

    def _check_fields(self, items: Iterable[Dict[str, Any]], allowed: set, where: str) -> None:
        unknown: List[str] = sorted({key for item in items for key in item if key not in allowed})
        if not unknown:
            return
        if self.strict:
            raise InvalidInstanceError(f"{where} 에 모르는 필드가 있습니다: {unknown}")
        logger.warning(f"{where} 의 모르는 필드를 무시합니다: {unknown}")

    def load_document(self, path: str) -> Dict[str, Any]:
        """
        JSON 문서를 읽습니다.

        Args:
            path: 파일 경로

        Returns:
            Dict[str, Any]: 읽은 문서

        Raises:
            RepositoryError: 파일을 읽을 수 없는 경우
            InvalidInstanceError: JSON 형식이 아니거나 최상위가 객체가 아닌 경우
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                document = json.load(f)
        except OSError as e:
            logger.error(f"인스턴스 파일 읽기 중 오류 발생: {e}")
            raise RepositoryError(f"인스턴스 파일을 읽을 수 없습니다: {path}: {str(e)}")
        except json.JSONDecodeError as e:
            raise InvalidInstanceError(f"JSON 형식 오류 ({path}): {str(e)}")
        if not isinstance(document, dict):
            raise InvalidInstanceError(f"최상위 JSON 은 객체여야 합니다: {path}")
        return document

    def is_geometric(self, document: Dict[str, Any]) -> bool:
        return "direction" in document

    def hypergraph_from_document(self, document: Dict[str, Any]) -> Hypergraph:
        self._check_fields([document], HYPERGRAPH_FIELDS, "하이퍼그래프 문서")
        self._check_fields(document.get("vertices", []), VERTEX_FIELDS, "정점")
        self._check_fields(document.get("edges", []), EDGE_FIELDS, "간선")
        return Hypergraph.from_dict(document)

    def geometric_from_document(self, document: Dict[str, Any]) -> GeometricInstance:
        self._check_fields([document], GEOMETRIC_FIELDS, "기하 인스턴스 문서")
        self._check_fields(document.get("points", []), POINT_FIELDS, "점")
        self._check_fields(document.get("regions", []), REGION_FIELDS, "영역")
        return GeometricInstance.from_dict(document)

    def load_hypergraph(self, path: str) -> Hypergraph:
        return self.hypergraph_from_document(self.load_document(path))

    def load_geometric(self, path: str) -> GeometricInstance:
        return self.geometric_from_document(self.load_document(path))

    def _write(self, document: Dict[str, Any], path: str) -> str:
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, "w", encoding="utf-8") as f:
                f.write(canonical_json(document))
                f.write("\n")
            return path
        except OSError as e:
            logger.error(f"인스턴스 파일 저장 중 오류 발생: {e}")
            raise RepositoryError(f"인스턴스 파일 저장 실패: {path}: {str(e)}")

    def save_hypergraph(self, hypergraph: Hypergraph, path: str) -> str:
        """
        하이퍼그래프를 결정적 JSON 으로 저장합니다.

        Returns:
            str: 저장한 경로
        """
        return self._write(hypergraph.to_dict(), path)

    def save_geometric(self, instance: GeometricInstance, path: str) -> str:
        return self._write(instance.to_dict(), path)

def load_instance(repository: JsonFileInstanceRepository, path: str) -> Union[Hypergraph, GeometricInstance]:
    """문서 모양을 보고 Hypergraph 또는 GeometricInstance 로 읽습니다."""
    document = repository.load_document(path)
    if repository.is_geometric(document):
        return repository.geometric_from_document(document)
    return repository.hypergraph_from_document(document)
