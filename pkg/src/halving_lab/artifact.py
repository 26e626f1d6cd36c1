"""Point-set artifacts: the carrier objects every construction stage emits."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Sequence

from .exact import Point


@dataclass
class PointSetArtifact:
    """A point set plus the construction's own claims about it.

    `claimed_halving` lists index tuples (pairs in the plane, d-tuples in
    dimension d) the construction asserts to be halving; oracles re-derive the
    truth from coordinates alone.  `roles` optionally tags points (the
    recursive construction distinguishes plain and bold vertices).
    """

    dimension: int
    points: list[Point]
    provenance: dict[str, Any] = field(default_factory=dict)
    claimed_halving: list[tuple[int, ...]] = field(default_factory=list)
    roles: list[str] | None = None

    def __post_init__(self) -> None:
        for p in self.points:
            if len(p) != self.dimension:
                raise ValueError("point dimension disagrees with artifact dimension")
        if self.roles is not None and len(self.roles) != len(self.points):
            raise ValueError("roles must tag every point")
        n = len(self.points)
        for tup in self.claimed_halving:
            if any(not (0 <= i < n) for i in tup):
                raise ValueError(f"claimed halving tuple {tup} out of range")

    @property
    def count(self) -> int:
        return len(self.points)

    def with_points(self, points: Sequence[Point], **prov: Any) -> "PointSetArtifact":
        """Same claims over a transformed copy of the points."""
        new_prov = dict(self.provenance)
        new_prov.update(prov)
        return replace(self, points=list(points), provenance=new_prov)


def x_gap_bounds(points: Sequence[Point]) -> tuple[Fraction, Fraction]:
    """Exact (min, max) pairwise |x-difference|; min is 0 on repeated x."""
    xs = sorted(p[0] for p in points)
    if len(xs) < 2:
        raise ValueError("need at least two points")
    min_gap = min(b - a for a, b in zip(xs, xs[1:]))
    return min_gap, xs[-1] - xs[0]


def squared_distance_bounds(points: Sequence[Point]) -> tuple[Fraction, Fraction]:
    """Exact (min, max) squared pairwise distance by full scan."""
    from .exact import integer_scaled

    if len(points) < 2:
        raise ValueError("need at least two points")
    ints, den = integer_scaled(list(points))
    lo = hi = None
    n = len(ints)
    for i in range(n):
        pi = ints[i]
        for j in range(i + 1, n):
            pj = ints[j]
            d = sum((a - b) * (a - b) for a, b in zip(pi, pj))
            if lo is None or d < lo:
                lo = d
            if hi is None or d > hi:
                hi = d
    scale = Fraction(1, den * den)
    return Fraction(lo) * scale, Fraction(hi) * scale
