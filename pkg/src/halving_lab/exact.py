"""Exact rational geometry kernel.

Every coordinate, predicate and transform in this package runs on
`fractions.Fraction`.  The separations that the constructions rely on go far
below double precision (steps like 2**-48 between sibling points), so nothing
in this module is allowed to round, ever.  Angles are the one thing a rational
kernel cannot represent; rotations are therefore parameterised by a rational
half-angle tangent, which keeps the matrix entries rational and exactly
orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

Scalar = Fraction
RationalLike = Union[int, str, Fraction]
Point = Tuple[Fraction, ...]
Point2 = Tuple[Fraction, Fraction]


class DimensionMismatch(ValueError):
    """Points of different (or unsupported) dimensions were combined."""


class HorizontalSegmentError(ValueError):
    """The operation is undefined for horizontal segments."""


def frac(value: RationalLike, den: int | None = None) -> Fraction:
    """Coerce to an exact rational (never through float)."""
    if den is not None:
        return Fraction(value, den)
    if isinstance(value, float):
        raise TypeError("refusing to build an exact scalar from a float")
    return Fraction(value)


def pt(*coords: RationalLike) -> Point:
    return tuple(Fraction(c) for c in coords)


def _require_2d(*points: Point) -> None:
    for p in points:
        if len(p) != 2:
            raise DimensionMismatch(f"expected a 2D point, got dimension {len(p)}")


def orientation(a: Point2, b: Point2, c: Point2) -> int:
    """Sign of the determinant of (b - a, c - a): +1 ccw, -1 cw, 0 collinear."""
    _require_2d(a, b, c)
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


def squared_distance(a: Point, b: Point) -> Fraction:
    if len(a) != len(b):
        raise DimensionMismatch(f"dimension {len(a)} vs {len(b)}")
    return sum(((x - y) * (x - y) for x, y in zip(a, b)), start=Fraction(0))


@dataclass(frozen=True)
class Segment:
    """A 2D segment with distinct endpoints."""

    a: Point2
    b: Point2

    def __post_init__(self) -> None:
        _require_2d(self.a, self.b)
        if self.a == self.b:
            raise ValueError("degenerate segment: identical endpoints")

    @property
    def is_horizontal(self) -> bool:
        return self.a[1] == self.b[1]

    def x_at(self, y: Fraction) -> Fraction:
        """x-coordinate of the segment's supporting line at height y."""
        if self.is_horizontal:
            raise HorizontalSegmentError("horizontal line has no unique x at a height")
        (ax, ay), (bx, by) = self.a, self.b
        return ax + (y - ay) * (bx - ax) / (by - ay)


def extension(s: Segment) -> Segment:
    """Clip the supporting line of `s` to the slab 0 <= y <= 1.

    Defined for non-horizontal segments whose endpoints already lie in the
    slab; the result spans exactly from y=0 to y=1.
    """
    if s.is_horizontal:
        raise HorizontalSegmentError("extension of a horizontal segment is undefined")
    for p in (s.a, s.b):
        if not (0 <= p[1] <= 1):
            raise ValueError(f"segment endpoint {p} outside the unit y-slab")
    zero = Fraction(0)
    one = Fraction(1)
    return Segment((s.x_at(zero), zero), (s.x_at(one), one))


def horizontal_distance(line_through: Segment, q: Point2) -> Fraction:
    """Length of the horizontal segment from q to the line through `line_through`."""
    _require_2d(q)
    return abs(q[0] - line_through.x_at(q[1]))


@dataclass(frozen=True)
class Strip:
    """Points within horizontal distance `half_width` of a base segment's line,
    inside the closed horizontal slab spanned by the base segment."""

    base_segment: Segment
    half_width: Fraction

    def __post_init__(self) -> None:
        if self.base_segment.is_horizontal:
            raise HorizontalSegmentError("strip of a horizontal segment is undefined")
        if self.half_width <= 0:
            raise ValueError("strip half-width must be positive")

    @classmethod
    def around(cls, s: Segment, half_width: RationalLike) -> "Strip":
        """Strip of the extension of `s` (the usual construction)."""
        return cls(extension(s), Fraction(half_width))


def in_alpha_strip(strip: Strip, q: Point2) -> bool:
    """Exact membership test: inside the slab and within the half-width."""
    _require_2d(q)
    lo, hi = sorted((strip.base_segment.a[1], strip.base_segment.b[1]))
    if not (lo <= q[1] <= hi):
        return False
    return horizontal_distance(strip.base_segment, q) <= strip.half_width


def side_of_line(s: Segment, q: Point2) -> int:
    """Sign of q against the line of `s`, canonically oriented.

    The segment is oriented from its lower endpoint to its upper one (ties
    broken by x), so the sign is a function of the line and the point only,
    not of the endpoint order.  For the slope-about-1 lines produced by the
    constructions, -1 means below the line and +1 above it.
    """
    lo, hi = sorted((s.a, s.b), key=lambda p: (p[1], p[0]))
    return orientation(lo, hi, q)


@dataclass(frozen=True)
class Rotation2:
    """Exactly orthogonal rational rotation: cos**2 + sin**2 == 1 identically."""

    cos: Fraction
    sin: Fraction

    @classmethod
    def identity(cls) -> "Rotation2":
        return cls(Fraction(1), Fraction(0))

    @classmethod
    def from_half_tangent(cls, t: RationalLike) -> "Rotation2":
        t = Fraction(t)
        den = 1 + t * t
        return cls((1 - t * t) / den, 2 * t / den)

    def compose(self, other: "Rotation2") -> "Rotation2":
        return Rotation2(
            self.cos * other.cos - self.sin * other.sin,
            self.sin * other.cos + self.cos * other.sin,
        )

    def inverse(self) -> "Rotation2":
        return Rotation2(self.cos, -self.sin)

    def apply(self, p: Point2) -> Point2:
        _require_2d(p)
        x, y = p
        return (self.cos * x - self.sin * y, self.sin * x + self.cos * y)

    def powers(self, k: int) -> list["Rotation2"]:
        """[R**0, R**1, ..., R**k], composed exactly."""
        out = [Rotation2.identity()]
        for _ in range(k):
            out.append(out[-1].compose(self))
        return out


def rational_rotation(t: RationalLike) -> Rotation2:
    """Rotation with cos=(1-t**2)/(1+t**2), sin=2t/(1+t**2); determinant exactly 1."""
    return Rotation2.from_half_tangent(t)


def negate(p: Point) -> Point:
    return tuple(-c for c in p)


def translate(p: Point, delta: Sequence[Fraction]) -> Point:
    if len(p) != len(delta):
        raise DimensionMismatch("translation dimension mismatch")
    return tuple(c + d for c, d in zip(p, delta))


def lcm_denominator(points: Iterable[Point]) -> int:
    """Least common denominator over every coordinate of every point."""
    import math

    den = 1
    for p in points:
        for c in p:
            den = math.lcm(den, c.denominator)
    return den


def integer_scaled(points: Sequence[Point]) -> tuple[list[tuple[int, ...]], int]:
    """Scale a point set by its common denominator.

    Uniform positive scaling preserves orientations, sidedness and distance
    ratios, so oracles may run on the integer image; callers get the scale
    back in case absolute quantities are needed.
    """
    den = lcm_denominator(points)
    scaled = [tuple(int(c * den) for c in p) for p in points]
    return scaled, den
