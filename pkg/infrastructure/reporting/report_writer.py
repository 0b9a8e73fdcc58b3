# infrastructure/reporting/report_writer.py - JSON 보고서, bench CSV, 정규 집합 덤프

import csv
import hashlib
import io
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

from loguru import logger

from domain.exceptions import RepositoryError
from domain.regions import CanonicalRectSet
from infrastructure.storage.instance_repository import canonical_json

BENCH_COLUMNS = (
    "instance_id", "algo", "seed", "weight", "lp_obj", "oracle_opt", "ratio", "feasible", "beta", "wall_ms",
)

def document_digest(document: Dict[str, Any]) -> str:
    """정규 JSON 의 SHA-256"""
    return hashlib.sha256(canonical_json(document).encode("utf-8")).hexdigest()

def _emit(text: str, path: Optional[str]) -> None:
    if not path or path == "-":
        sys.stdout.write(text)
        return
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        logger.error(f"보고서 저장 중 오류 발생: {e}")
        raise RepositoryError(f"보고서 저장 실패: {path}: {str(e)}")

def write_json_report(report: Dict[str, Any], path: Optional[str] = None) -> str:
    """
    단일 실행 보고서를 JSON 으로 씁니다.

    Args:
        report: 보고서 딕셔너리
        path: 출력 경로 (없거나 "-" 면 표준 출력)

    Returns:
        str: 직렬화한 텍스트
    """
    text = canonical_json(report) + "\n"
    _emit(text, path)
    return text

def _row_key(row: Dict[str, Any]):
    return (str(row["instance_id"]), str(row["algo"]), int(row["seed"]))

def format_bench_csv(rows: Sequence[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=BENCH_COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in sorted(rows, key=_row_key):
        writer.writerow({k: ("" if row.get(k) is None else row.get(k)) for k in BENCH_COLUMNS})
    return buffer.getvalue()

def write_bench_csv(rows: Sequence[Dict[str, Any]], path: Optional[str] = None) -> str:
    """
    bench 행을 (instance_id, algo, seed) 순으로 정렬해 CSV 로 씁니다.

    Returns:
        str: CSV 텍스트
    """
    text = format_bench_csv(rows)
    _emit(text, path)
    logger.info(f"bench CSV {len(rows)}행 작성")
    return text

def canonical_set_document(cset: CanonicalRectSet) -> Dict[str, Any]:
    rects: List[Dict[str, Any]] = [
        {"lo": list(map(float, r.lo)), "hi": list(map(float, r.hi)), "members": list(m)}
        for r, m in zip(cset.canonical, cset.members)
    ]
    return {
        "k": cset.k,
        "canonical": rects,
        "cover_map": {str(q): (list(ids) if ids is not None else None) for q, ids in sorted(cset.cover_map.items())},
        "conflict_edges": sorted(list(e) for e in cset.conflict_edges),
    }

def write_canonical_dump(cset: CanonicalRectSet, directory: str) -> str:
    """
    정규 사각형 집합을 내용 해시 이름의 JSON 파일로 덤프합니다.

    Returns:
        str: 덤프 경로
    """
    document = canonical_set_document(cset)
    path = os.path.join(directory, f"canonical-{document_digest(document)[:16]}.json")
    write_json_report(document, path)
    logger.debug(f"정규 사각형 집합 덤프: {path}")
    return path
