# core/services/instance_generator.py - 무작위 인스턴스와 난이도 환원 생성기

import math
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from loguru import logger

from app.schemas import GeneratorKind, GeneratorSpec
from core.services.geometry import scaled_about_centroid, triangle_fatness
from core.services.random_streams import make_rng, STREAM_GENERATOR
from domain.exceptions import InvalidInstanceError
from domain.regions import (
    Box, ClassTag, Direction, Disk, GeometricInstance, InstancePoint, InstanceRegion, Rect, Triangle,
)

JITTER_RELATIVE = 1e-9
# 세 짝 환원의 호 중심 (도) 과 각 호의 폭 상한
ARC_CENTERS = (90.0, 210.0, 330.0)
ARC_SPAN = 4.0
OUTWARD_SCALE = 1 + 1e-7
SEGMENT_WIDTH = 1e-3
FAT_TRIANGLE_TRIES = 100
FLOWER_PETALS = 2
DIAMETER_APEX_SHRINK = 0.999

def _values(rng: np.random.Generator, count: int, spec: GeneratorSpec, capacities: bool) -> List:
    if capacities:
        lo, hi = spec.cap_range
        return [int(v) for v in rng.integers(lo, hi + 1, size=count)]
    lo, hi = spec.weight_range
    return [float(v) for v in rng.uniform(lo, hi, size=count)]

def _assemble(spec: GeneratorSpec, rng: np.random.Generator, coords: Sequence[Sequence[float]],
              regions: Sequence, tag: ClassTag) -> GeometricInstance:
    """방향에 맞춰 점/영역 값을 채웁니다."""
    points_capacitated = spec.direction == Direction.PACK_REGIONS
    point_values = _values(rng, len(coords), spec, capacities=points_capacitated)
    region_values = _values(rng, len(regions), spec, capacities=not points_capacitated)
    return GeometricInstance(
        direction=spec.direction,
        points=tuple(InstancePoint(tuple(c), v) for c, v in zip(coords, point_values)),
        regions=tuple(InstanceRegion(r, v) for r, v in zip(regions, region_values)),
        class_tag=tag,
    )

def _fat_triangle(rng: np.random.Generator, center: Sequence[float], size: float, bound: float) -> Triangle:
    base = rng.uniform(0.0, 2.0 * math.pi)
    for _ in range(FAT_TRIANGLE_TRIES):
        angles = base + np.array([0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0]) + rng.uniform(-0.5, 0.5, 3)
        radii = size * rng.uniform(0.7, 1.3, 3)
        t = Triangle(tuple(
            (center[0] + r * math.cos(a), center[1] + r * math.sin(a)) for a, r in zip(angles, radii)
        ))
        if triangle_fatness(t) <= bound:
            return t
    return Triangle(tuple(
        (center[0] + size * math.cos(base + j * 2.0 * math.pi / 3.0),
         center[1] + size * math.sin(base + j * 2.0 * math.pi / 3.0)) for j in range(3)
    ))

def _random_disks(spec: GeneratorSpec, rng: np.random.Generator) -> GeometricInstance:
    centers = rng.uniform(0.0, 1.0, (spec.n_regions, 2))
    radii = rng.uniform(*spec.radius_range, spec.n_regions)
    points = rng.uniform(0.0, 1.0, (spec.n_points, 2))
    regions = [Disk(tuple(c), float(r)) for c, r in zip(centers.tolist(), radii)]
    return _assemble(spec, rng, points.tolist(), regions, ClassTag.DISK)

def _random_boxes(spec: GeneratorSpec, rng: np.random.Generator, dim: int) -> GeometricInstance:
    corners = rng.uniform(0.0, 1.0, (spec.n_regions, dim))
    extents = rng.uniform(*spec.extent_range, (spec.n_regions, dim))
    points = rng.uniform(0.0, 1.0, (spec.n_points, dim))
    kind = Rect if dim == 2 else Box
    regions = [kind(tuple(map(float, lo)), tuple(map(float, lo + ext))) for lo, ext in zip(corners, extents)]
    return _assemble(spec, rng, points.tolist(), regions, ClassTag.RECT if dim == 2 else ClassTag.BOX)

def _random_fat_triangles(spec: GeneratorSpec, rng: np.random.Generator) -> GeometricInstance:
    centers = rng.uniform(0.0, 1.0, (spec.n_regions, 2))
    sizes = rng.uniform(*spec.extent_range, spec.n_regions)
    regions = [_fat_triangle(rng, c, float(s), spec.fatness_bound) for c, s in zip(centers.tolist(), sizes)]
    points = rng.uniform(0.0, 1.0, (spec.n_points, 2))
    return _assemble(spec, rng, points.tolist(), regions, ClassTag.FAT_TRIANGLE)

def _flower(spec: GeneratorSpec, rng: np.random.Generator) -> GeometricInstance:
    """원판 두 개가 용량 2 인 중심 점을 함께 덮는 꽃 모양."""
    petals = FLOWER_PETALS
    regions = []
    for j in range(petals):
        angle = 2.0 * math.pi * j / petals
        regions.append(InstanceRegion(Disk((0.5 * math.cos(angle), 0.5 * math.sin(angle)), 0.75), 1.0))
    center = InstancePoint((0.0, 0.0), FLOWER_PETALS)
    return GeometricInstance(Direction.PACK_REGIONS, (center,), tuple(regions), ClassTag.DISK)

def _thin_triangle(a: np.ndarray, b: np.ndarray) -> Triangle:
    """선분 ab 를 감싸는 가는 삼각형. 양 끝점은 내부에 들어갑니다."""
    length = float(np.linalg.norm(b - a))
    along = (b - a) / length
    normal = np.array([-along[1], along[0]])
    width = SEGMENT_WIDTH * length
    left = a - length * along - width * normal
    right = b + length * along - width * normal
    apex = (a + b) / 2.0 + width * normal
    return Triangle(tuple(tuple(map(float, v)) for v in (left, right, apex)))

def _k3_segments(spec: GeneratorSpec, rng: np.random.Generator) -> GeometricInstance:
    """세 선분이 서로 한 점씩 만나는 K3: 점 용량 1, 선분 가중치 1."""
    groups = max(1, spec.n_regions // 3)
    corners = np.array([[0.0, 0.0], [1.0, 0.0], [0.4, 0.9]])
    points, regions = [], []
    for g in range(groups):
        shifted = corners + np.array([3.0 * g, 0.0])
        for i in range(3):
            a, b = shifted[i], shifted[(i + 1) % 3]
            regions.append(InstanceRegion(_thin_triangle(a, b), 1.0))
        points.extend(InstancePoint(tuple(map(float, c)), 1) for c in shifted)
    return GeometricInstance(Direction.PACK_REGIONS, tuple(points), tuple(regions), ClassTag.GENERIC)

def _circle_point(angle_deg: float) -> Tuple[float, float]:
    rad = math.radians(angle_deg)
    return (math.cos(rad), math.sin(rad))

def _tri_matching_hard(spec: GeneratorSpec, rng: np.random.Generator) -> GeometricInstance:
    """
    최대 3차원 매칭 → 단위 용량 점에 뚱뚱한 삼각형 패킹.

    세 부류의 원소를 90°, 210°, 330° 주변 4° 이내 호에 두고, 세 짝마다 세 대표점을
    원점 기준으로 살짝 밖으로 민 꼭짓점의 삼각형을 만듭니다.
    """
    if not spec.triples:
        raise InvalidInstanceError("tri_matching_hard 에는 triples 가 필요합니다")
    for t in spec.triples:
        if len(t) != 3 or min(t) < 0:
            raise InvalidInstanceError(f"잘못된 세 짝입니다: {t}")
    if len(set(map(tuple, spec.triples))) != len(spec.triples):
        raise InvalidInstanceError("중복된 세 짝이 있습니다")
    classes: List[List[int]] = [sorted({t[c] for t in spec.triples}) for c in range(3)]

    points: List[InstancePoint] = []
    index: Dict[Tuple[int, int], int] = {}
    for c, members in enumerate(classes):
        step = ARC_SPAN / max(len(members) - 1, 1)
        for j, element in enumerate(members):
            angle = ARC_CENTERS[c] - ARC_SPAN / 2.0 + j * step if len(members) > 1 else ARC_CENTERS[c]
            index[(c, element)] = len(points)
            points.append(InstancePoint(_circle_point(angle), 1))

    regions = []
    for t in spec.triples:
        verts = [points[index[(c, t[c])]].coords for c in range(3)]
        regions.append(InstanceRegion(
            Triangle(tuple((OUTWARD_SCALE * x, OUTWARD_SCALE * y) for x, y in verts)), 1.0
        ))
    return GeometricInstance(Direction.PACK_REGIONS, tuple(points), tuple(regions), ClassTag.FAT_TRIANGLE)

def _graph_is_hard(spec: GeneratorSpec, rng: np.random.Generator) -> GeometricInstance:
    """
    그래프 독립 집합 → 용량 1 인 2-뚱뚱한 삼각형에 점 패킹.

    정점은 원 위의 서로 다른 점, 간선마다 두 끝점과 현 중점에서 원 중심 쪽으로 L/2 떨어진
    꼭짓점으로 삼각형을 만듭니다.
    """
    n = spec.graph_vertices if spec.graph_vertices is not None else spec.n_points
    if n < 1:
        raise InvalidInstanceError("graph_is_hard 에는 정점이 1개 이상 필요합니다")
    edges = set()
    for u, v in spec.graph_edges:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise InvalidInstanceError(f"잘못된 간선입니다: ({u}, {v})")
        edges.add((min(u, v), max(u, v)))

    coords = [np.array(_circle_point(360.0 * i / n)) for i in range(n)]
    regions = []
    for u, v in sorted(edges):
        a, b = coords[u], coords[v]
        mid = (a + b) / 2.0
        length = float(np.linalg.norm(b - a))
        norm = float(np.linalg.norm(mid))
        height = length / 2.0
        if norm > 1e-12:
            inward = -mid / norm
        else:
            # 지름 간선: 꼭짓점이 원 위의 다른 점과 겹치지 않게 안으로 당김
            inward = np.array([-(b - a)[1], (b - a)[0]]) / length
            height *= DIAMETER_APEX_SHRINK
        apex = mid + inward * height
        tri = Triangle(tuple(tuple(map(float, p)) for p in (a, b, apex)))
        regions.append(InstanceRegion(scaled_about_centroid(tri, 1 + 1e-6), 1))
    # pack_points 방향: 삼각형 값은 정수 용량, 점 값은 실수 가중치
    points = tuple(InstancePoint(tuple(map(float, c)), 1.0) for c in coords)
    return GeometricInstance(Direction.PACK_POINTS, points, tuple(regions), ClassTag.FAT_TRIANGLE)

_GENERATORS: Dict[GeneratorKind, Callable[[GeneratorSpec, np.random.Generator], GeometricInstance]] = {
    GeneratorKind.RANDOM_DISKS: _random_disks,
    GeneratorKind.RANDOM_RECTS: lambda spec, rng: _random_boxes(spec, rng, 2),
    GeneratorKind.RANDOM_BOXES: lambda spec, rng: _random_boxes(spec, rng, 3),
    GeneratorKind.RANDOM_FAT_TRIANGLES: _random_fat_triangles,
    GeneratorKind.FLOWER: _flower,
    GeneratorKind.K3_SEGMENTS: _k3_segments,
    GeneratorKind.TRI_MATCHING_HARD: _tri_matching_hard,
    GeneratorKind.GRAPH_IS_HARD: _graph_is_hard,
}

def jitter_points(inst: GeometricInstance, rng: np.random.Generator) -> GeometricInstance:
    """점 좌표를 경계 상자 크기의 1e-9 배 이내로 흔들어 좌표 중복을 없앱니다."""
    if not inst.points:
        return inst
    coords = np.array([[float(c) for c in p.coords] for p in inst.points])
    extent = float(np.max(coords.max(axis=0) - coords.min(axis=0))) or 1.0
    noise = rng.uniform(-1.0, 1.0, coords.shape) * JITTER_RELATIVE * extent
    moved = coords + noise
    points = tuple(InstancePoint(tuple(map(float, c)), p.value) for c, p in zip(moved, inst.points))
    return GeometricInstance(inst.direction, points, inst.regions, inst.class_tag)

def generate_instance(spec: GeneratorSpec) -> GeometricInstance:
    """
    생성기 명세에서 기하 인스턴스를 만듭니다. 같은 명세는 같은 인스턴스를 줍니다.

    Args:
        spec: 생성기 명세 (seed 필수)

    Returns:
        GeometricInstance: 일반 위치로 흔든 인스턴스

    Raises:
        InvalidInstanceError: 세 짝이나 그래프 입력이 잘못된 경우
    """
    rng = make_rng(spec.seed, STREAM_GENERATOR)
    inst = _GENERATORS[spec.kind](spec, rng)
    if spec.jitter:
        inst = jitter_points(inst, make_rng(spec.seed, STREAM_GENERATOR, 1))
    logger.debug(
        f"인스턴스 생성: {spec.kind.value}, 점 {len(inst.points)}, 영역 {len(inst.regions)}, seed={spec.seed}"
    )
    return inst
