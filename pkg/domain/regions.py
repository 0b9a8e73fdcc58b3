# domain/regions.py - 기하 영역과 기하 인스턴스

import math
from enum import Enum
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Any, Callable, ClassVar, Dict, FrozenSet, List, Optional, Tuple, Union

from domain.exceptions import DimensionMismatchError, InvalidInstanceError

Scalar = Union[float, Fraction]
Coords = Tuple[Scalar, ...]

class Direction(str, Enum):
    """패킹 방향"""
    PACK_REGIONS = "pack_regions"   # 영역에 가중치, 점에 용량
    PACK_POINTS = "pack_points"     # 점에 가중치, 영역에 용량

class ClassTag(str, Enum):
    """γ 선택용 인스턴스 클래스"""
    DISK = "disk"
    PSEUDO_DISK = "pseudo_disk"
    SIMILAR_FAT = "similar_fat"
    FAT_TRIANGLE = "fat_triangle"
    RECT = "rect"
    BOX = "box"
    HALFSPACE = "halfspace"
    GENERIC = "generic"

def _as_number(value: Any) -> Scalar:
    if isinstance(value, Fraction):
        return value
    number = float(value)
    if not math.isfinite(number):
        raise InvalidInstanceError(f"좌표는 유한해야 합니다: {value}")
    return number

def _point(values: Any, dim: int) -> Coords:
    coords = tuple(_as_number(v) for v in values)
    if len(coords) != dim:
        raise DimensionMismatchError(f"{dim}차원 좌표가 필요합니다: {values}")
    return coords

@dataclass(frozen=True)
class Disk:
    center: Coords
    radius: Scalar
    kind: ClassVar[str] = "disk"
    dimension: ClassVar[int] = 2

    def __post_init__(self):
        object.__setattr__(self, "center", _point(self.center, 2))
        if not self.radius > 0:
            raise InvalidInstanceError(f"반지름은 양수여야 합니다: {self.radius}")
        object.__setattr__(self, "radius", _as_number(self.radius))

    def to_params(self) -> Dict[str, Any]:
        return {"center": [float(c) for c in self.center], "radius": float(self.radius)}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> 'Disk':
        return cls(tuple(params["center"]), params["radius"])

@dataclass(frozen=True)
class Rect:
    lo: Coords
    hi: Coords
    kind: ClassVar[str] = "rect"
    dimension: ClassVar[int] = 2

    def __post_init__(self):
        lo, hi = _point(self.lo, self.dimension), _point(self.hi, self.dimension)
        if any(a > b for a, b in zip(lo, hi)):
            raise InvalidInstanceError(f"최소 모서리가 최대 모서리보다 큽니다: {lo} > {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def to_params(self) -> Dict[str, Any]:
        return {"min": [float(c) for c in self.lo], "max": [float(c) for c in self.hi]}

    @classmethod
    def from_params(cls, params: Dict[str, Any]):
        return cls(tuple(params["min"]), tuple(params["max"]))

@dataclass(frozen=True)
class Box(Rect):
    kind: ClassVar[str] = "box"
    dimension: ClassVar[int] = 3

@dataclass(frozen=True)
class Triangle:
    vertices: Tuple[Coords, Coords, Coords]
    kind: ClassVar[str] = "triangle"
    dimension: ClassVar[int] = 2

    def __post_init__(self):
        if len(self.vertices) != 3:
            raise InvalidInstanceError("삼각형은 꼭짓점 3개가 필요합니다")
        verts = tuple(_point(v, 2) for v in self.vertices)
        (ax, ay), (bx, by), (cx, cy) = (tuple(Fraction(c) for c in v) for v in verts)
        if (bx - ax) * (cy - ay) - (by - ay) * (cx - ax) == 0:
            raise InvalidInstanceError(f"퇴화된 삼각형입니다: {verts}")
        object.__setattr__(self, "vertices", verts)

    def to_params(self) -> Dict[str, Any]:
        return {"vertices": [[float(c) for c in v] for v in self.vertices]}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> 'Triangle':
        return cls(tuple(tuple(v) for v in params["vertices"]))

@dataclass(frozen=True)
class Halfspace3:
    """아래쪽 반공간 z ≤ a·x + b·y + c"""
    a: Scalar
    b: Scalar
    c: Scalar
    kind: ClassVar[str] = "halfspace3"
    dimension: ClassVar[int] = 3

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _as_number(getattr(self, name)))

    def to_params(self) -> Dict[str, Any]:
        return {"a": float(self.a), "b": float(self.b), "c": float(self.c)}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> 'Halfspace3':
        return cls(params["a"], params["b"], params["c"])

@dataclass(frozen=True)
class VerticalRay3:
    apex: Coords
    up: bool = True
    kind: ClassVar[str] = "ray3"
    dimension: ClassVar[int] = 3

    def __post_init__(self):
        object.__setattr__(self, "apex", _point(self.apex, 3))

    def to_params(self) -> Dict[str, Any]:
        return {"apex": [float(c) for c in self.apex], "up": self.up}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> 'VerticalRay3':
        return cls(tuple(params["apex"]), bool(params.get("up", True)))

Region = Union[Disk, Rect, Box, Triangle, Halfspace3, VerticalRay3]

REGION_KINDS: Dict[str, Any] = {
    cls.kind: cls for cls in (Disk, Rect, Box, Triangle, Halfspace3, VerticalRay3)
}

@dataclass(frozen=True)
class InstancePoint:
    """점 좌표와 값 (방향에 따라 용량 또는 가중치)"""
    coords: Coords
    value: Scalar

@dataclass(frozen=True)
class InstanceRegion:
    """영역과 값 (방향에 따라 가중치 또는 용량)"""
    region: Region
    value: Scalar

@dataclass(frozen=True)
class GeometricInstance:
    """점 + 영역 + 방향 플래그"""
    direction: Direction
    points: Tuple[InstancePoint, ...]
    regions: Tuple[InstanceRegion, ...]
    class_tag: ClassTag = ClassTag.GENERIC

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        object.__setattr__(self, "class_tag", ClassTag(self.class_tag))
        points = tuple(self.points)
        regions = tuple(self.regions)
        dims = {len(p.coords) for p in points}
        if len(dims) > 1:
            raise DimensionMismatchError(f"점 차원이 섞여 있습니다: {sorted(dims)}")
        if dims and regions:
            dim = dims.pop()
            for r in regions:
                if r.region.dimension != dim:
                    raise DimensionMismatchError(
                        f"영역 {r.region.kind} 은 {r.region.dimension}차원인데 점은 {dim}차원입니다"
                    )
        capacitated = points if self.direction == Direction.PACK_REGIONS else regions
        weighted = regions if self.direction == Direction.PACK_REGIONS else points
        for item in capacitated:
            if int(item.value) != item.value or item.value < 1:
                raise InvalidInstanceError(f"용량은 1 이상의 정수여야 합니다: {item.value}")
        for item in weighted:
            if not math.isfinite(float(item.value)) or item.value < 0:
                raise InvalidInstanceError(f"가중치는 0 이상 유한해야 합니다: {item.value}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "regions", regions)

    @property
    def region_kinds(self) -> FrozenSet[str]:
        return frozenset(r.region.kind for r in self.regions)

    def point_coords(self) -> List[Coords]:
        return [p.coords for p in self.points]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GeometricInstance':
        """딕셔너리에서 GeometricInstance 객체를 생성합니다."""
        try:
            direction = Direction(data["direction"])
            value_key_points = "cap" if direction == Direction.PACK_REGIONS else "w"
            value_key_regions = "w" if direction == Direction.PACK_REGIONS else "cap"
            points = []
            for p in data.get("points", []):
                coords = (p["x"], p["y"]) + ((p["z"],) if "z" in p else ())
                points.append(InstancePoint(tuple(float(c) for c in coords), p[value_key_points]))
            regions = []
            for r in data.get("regions", []):
                region_cls = REGION_KINDS[r["kind"]]
                regions.append(InstanceRegion(region_cls.from_params(r["params"]), r[value_key_regions]))
            return cls(direction, tuple(points), tuple(regions), ClassTag(data.get("class", "generic")))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInstanceError(f"기하 인스턴스 문서 형식 오류: {e}")

    def to_dict(self) -> Dict[str, Any]:
        """GeometricInstance 객체를 딕셔너리로 변환합니다."""
        point_key = "cap" if self.direction == Direction.PACK_REGIONS else "w"
        region_key = "w" if self.direction == Direction.PACK_REGIONS else "cap"
        points = []
        for p in self.points:
            item: Dict[str, Any] = {"x": float(p.coords[0]), "y": float(p.coords[1])}
            if len(p.coords) == 3:
                item["z"] = float(p.coords[2])
            item[point_key] = int(p.value) if point_key == "cap" else float(p.value)
            points.append(item)
        regions = []
        for r in self.regions:
            value = int(r.value) if region_key == "cap" else float(r.value)
            regions.append({"kind": r.region.kind, "params": r.region.to_params(), region_key: value})
        return {
            "direction": self.direction.value,
            "points": points,
            "regions": regions,
            "class": self.class_tag.value,
        }

@dataclass(frozen=True)
class TriangleCover:
    """측도 분할 덮개: 원래 삼각형과 닮은 조각들"""
    pieces: Tuple[Triangle, ...]
    k: int
    source: Triangle
    # 조각별 닮음 변환 (축척, 180° 회전 여부)
    transforms: Tuple[Tuple[float, bool], ...] = ()

@dataclass(frozen=True)
class CanonicalRectSet:
    """정규 사각형 집합과 질의별 덮개"""
    canonical: Tuple[Rect, ...]
    members: Tuple[Tuple[int, ...], ...]
    cover_map: Dict[int, Tuple[int, ...]]
    conflict_edges: FrozenSet[Tuple[int, int]]
    k: int
    resolver: Optional[Callable[[Rect], Optional[Tuple[int, ...]]]] = field(
        default=None, compare=False, repr=False
    )

    def cover(self, query: Rect) -> Optional[Tuple[int, ...]]:
        """질의 사각형을 덮는 정규 사각형 id (≤2개), 계약 밖이면 None"""
        if self.resolver is None:
            return None
        return self.resolver(query)

@dataclass(frozen=True)
class CanonicalRegion:
    """정규 영역: 점 집합과 그것을 실현하는 증인 삼각형 꼭짓점"""
    members: FrozenSet[int]
    family: int
    witness: Tuple[Coords, Coords, Coords]

@dataclass(frozen=True)
class CanonicalFatRegionSet:
    """뚱뚱한 삼각형용 정규 영역 집합과 질의별 덮개 (≤9 조각)"""
    regions: Tuple[CanonicalRegion, ...]
    cover_map: Dict[int, Optional[Tuple[int, ...]]]
    k: int
    alpha_max: float
    resolver: Optional[Callable[[Triangle], Optional[Tuple[int, ...]]]] = field(
        default=None, compare=False, repr=False
    )

    def cover(self, query: Triangle) -> Optional[Tuple[int, ...]]:
        if self.resolver is None:
            return None
        return self.resolver(query)
