# core/services/geometry.py - 기하 술어와 포함 판정

import math
from collections import Counter
from fractions import Fraction
from typing import Dict, Iterable, Sequence

from domain.exceptions import DimensionMismatchError, InvalidInstanceError
from domain.regions import Box, Disk, Halfspace3, Rect, Region, Triangle, VerticalRay3

# 부동소수 필터 오차 한계 (Shewchuk 의 ccwerrboundA)
_EPSILON = 2.0 ** -53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPSILON) * _EPSILON
_FILTER_RELATIVE = 1e-12

Point = Sequence[float]

def _exact(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)

def orient2d(a: Point, b: Point, c: Point) -> int:
    """
    a → b → c 의 방향 부호 (+1 반시계, -1 시계, 0 일직선).

    부동소수 행렬식이 오차 한계 밖이면 그대로 쓰고, 아니면 유리수로 정확히 다시 계산합니다.
    """
    if not any(isinstance(v, Fraction) for v in (*a, *b, *c)):
        detleft = (a[0] - c[0]) * (b[1] - c[1])
        detright = (a[1] - c[1]) * (b[0] - c[0])
        det = detleft - detright
        bound = _CCW_ERRBOUND * (abs(detleft) + abs(detright))
        if det > bound:
            return 1
        if -det > bound:
            return -1
    ax, ay, bx, by, cx, cy = (_exact(v) for v in (a[0], a[1], b[0], b[1], c[0], c[1]))
    det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    return (det > 0) - (det < 0)

def _disk_sign(disk: Disk, p: Point) -> int:
    # 부호(r² - |p - c|²), 경계 근처만 정확 계산
    if not any(isinstance(v, Fraction) for v in (*p, *disk.center, disk.radius)):
        dx, dy = p[0] - disk.center[0], p[1] - disk.center[1]
        r2 = disk.radius * disk.radius
        diff = r2 - (dx * dx + dy * dy)
        if abs(diff) > _FILTER_RELATIVE * (r2 + dx * dx + dy * dy + 1.0):
            return 1 if diff > 0 else -1
    cx, cy, r = (_exact(v) for v in (disk.center[0], disk.center[1], disk.radius))
    px, py = _exact(p[0]), _exact(p[1])
    diff = r * r - ((px - cx) ** 2 + (py - cy) ** 2)
    return (diff > 0) - (diff < 0)

def _halfspace_sign(h: Halfspace3, p: Point) -> int:
    px, py, pz = (_exact(v) for v in p)
    diff = _exact(h.a) * px + _exact(h.b) * py + _exact(h.c) - pz
    return (diff > 0) - (diff < 0)

def region_contains(r: Region, p: Point) -> bool:
    """
    닫힌 영역 포함 판정 (경계는 안쪽).

    Args:
        r: 영역
        p: 점 좌표

    Returns:
        bool: p ∈ r

    Raises:
        DimensionMismatchError: 차원이 맞지 않는 경우
    """
    if len(p) != r.dimension:
        raise DimensionMismatchError(f"{r.kind} 는 {r.dimension}차원인데 점은 {len(p)}차원입니다")
    if isinstance(r, (Box, Rect)):
        return all(lo <= c <= hi for lo, c, hi in zip(r.lo, p, r.hi))
    if isinstance(r, Disk):
        return _disk_sign(r, p) >= 0
    if isinstance(r, Triangle):
        a, b, c = r.vertices
        signs = (orient2d(a, b, p), orient2d(b, c, p), orient2d(c, a, p))
        return all(s >= 0 for s in signs) or all(s <= 0 for s in signs)
    if isinstance(r, Halfspace3):
        return _halfspace_sign(r, p) >= 0
    if isinstance(r, VerticalRay3):
        ax, ay, az = r.apex
        if p[0] != ax or p[1] != ay:
            return False
        return p[2] >= az if r.up else p[2] <= az
    raise InvalidInstanceError(f"알 수 없는 영역 종류입니다: {type(r).__name__}")

def triangle_fatness(t: Triangle) -> float:
    """가장 긴 변 길이 / 그 변에 대한 높이 = L² / (2·넓이)"""
    (ax, ay), (bx, by), (cx, cy) = ((float(u), float(v)) for u, v in t.vertices)
    longest_sq = max(
        (bx - ax) ** 2 + (by - ay) ** 2,
        (cx - bx) ** 2 + (cy - by) ** 2,
        (ax - cx) ** 2 + (ay - cy) ** 2,
    )
    area = abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)) / 2.0
    return longest_sq / (2.0 * area)

def triangle_area(t: Triangle) -> float:
    (ax, ay), (bx, by), (cx, cy) = ((float(u), float(v)) for u, v in t.vertices)
    return abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)) / 2.0

def count_faces_by_depth(regions: Sequence[Region], sample_points: Iterable[Point]) -> Dict[int, int]:
    """
    표본점의 포함 영역 집합(서명)을 모아 깊이별 면 개수를 셉니다.

    같은 서명을 가진 표본은 한 번만 셉니다.
    """
    signatures = {
        frozenset(i for i, r in enumerate(regions) if region_contains(r, p))
        for p in sample_points
    }
    return dict(sorted(Counter(len(s) for s in signatures).items()))

def scaled_about_centroid(t: Triangle, factor: float) -> Triangle:
    cx = math.fsum(float(v[0]) for v in t.vertices) / 3.0
    cy = math.fsum(float(v[1]) for v in t.vertices) / 3.0
    return Triangle(tuple(
        (cx + factor * (float(x) - cx), cy + factor * (float(y) - cy)) for x, y in t.vertices
    ))
