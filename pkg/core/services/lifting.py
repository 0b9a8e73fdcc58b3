# core/services/lifting.py - 포물면 올림과 점/평면 쌍대

from fractions import Fraction
from typing import Tuple

from domain.exceptions import InvalidInstanceError
from domain.regions import (
    ClassTag, Direction, Disk, GeometricInstance, Halfspace3, InstancePoint,
    InstanceRegion, VerticalRay3,
)

Point3 = Tuple[Fraction, Fraction, Fraction]

def lift_point(p) -> Point3:
    """(a, b) ↦ (a, b, a² + b²)"""
    a, b = Fraction(p[0]), Fraction(p[1])
    return a, b, a * a + b * b

def lift_disk(disk: Disk) -> Halfspace3:
    """원판 ↦ z ≤ 2c₁x + 2c₂y + (r² − c₁² − c₂²)"""
    c1, c2 = Fraction(disk.center[0]), Fraction(disk.center[1])
    r = Fraction(disk.radius)
    return Halfspace3(2 * c1, 2 * c2, r * r - c1 * c1 - c2 * c2)

def dual_plane(p: Point3) -> Halfspace3:
    """점 (a, b, c) ↦ 평면 z = ax + by − c 의 아래쪽 반공간"""
    return Halfspace3(p[0], p[1], -Fraction(p[2]))

def dual_point(h: Halfspace3) -> Point3:
    """평면 z = ax + by + c ↦ 점 (a, b, −c)"""
    return Fraction(h.a), Fraction(h.b), -Fraction(h.c)

def lift_instance(inst: GeometricInstance) -> GeometricInstance:
    """
    원판/점 인스턴스를 포물면으로 올립니다. 방향과 값은 그대로입니다.

    Raises:
        InvalidInstanceError: 원판이 아닌 영역이 있는 경우
    """
    for r in inst.regions:
        if not isinstance(r.region, Disk):
            raise InvalidInstanceError(f"올림은 원판만 지원합니다: {r.region.kind}")
    return GeometricInstance(
        direction=inst.direction,
        points=tuple(InstancePoint(lift_point(p.coords), p.value) for p in inst.points),
        regions=tuple(InstanceRegion(lift_disk(r.region), r.value) for r in inst.regions),
        class_tag=ClassTag.HALFSPACE,
    )

def dualize_instance(lifted: GeometricInstance) -> GeometricInstance:
    """
    올린 인스턴스에 점/평면 쌍대를 적용합니다.

    점 p 는 평면 p* 의 아래쪽 반공간이, 반공간 h 는 점 h* 가 되며
    p ∈ h ⟺ h* ∈ p* 이므로 방향이 뒤집혀도 같은 하이퍼그래프가 나옵니다.
    """
    flipped = Direction.PACK_REGIONS if lifted.direction == Direction.PACK_POINTS else Direction.PACK_POINTS
    return GeometricInstance(
        direction=flipped,
        points=tuple(InstancePoint(dual_point(r.region), r.value) for r in lifted.regions),
        regions=tuple(InstanceRegion(dual_plane(p.coords), p.value) for p in lifted.points),
        class_tag=ClassTag.HALFSPACE,
    )

def dual_rays(dual: GeometricInstance) -> Tuple[VerticalRay3, ...]:
    """
    쌍대 인스턴스의 점마다 위로 향하는 수직 반직선.

    반직선이 평면 p* 와 꼭짓점 위에서 만나는 것은 꼭짓점이 p* 아래에 있을 때입니다.
    """
    return tuple(VerticalRay3(p.coords, up=True) for p in dual.points)

def lift_and_dualize(inst: GeometricInstance) -> Tuple[GeometricInstance, GeometricInstance]:
    """
    원판 인스턴스를 반공간 인스턴스로 올리고, 이어서 반직선/평면 형태로 쌍대화합니다.

    Args:
        inst: 영역이 모두 원판인 인스턴스

    Returns:
        Tuple[GeometricInstance, GeometricInstance]: (올린 인스턴스, 쌍대 인스턴스)
    """
    lifted = lift_instance(inst)
    return lifted, dualize_instance(lifted)
