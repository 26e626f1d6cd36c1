"""Rosette amplification: n+1 rotated copies of a flattened base set.

The base (any planar artifact with a certified halving family) is normalized
to x in [-1/2, 1/2], lifted to the annulus x in [1, 2] with its y squashed by
epsilon**2, and then copied around the origin in n+1 equal exact-rational
rotation steps.  Each copy's halving lines pass so close to the origin that
the other n copies split evenly around them, which the verifier certifies
per line by counting whole copies per side and re-running the oracle.

Rotation angles are realized as powers of one rational rotation whose step is
chosen (with ordinary float math, then frozen as an exact rational) within a
small fraction of the ideal spacing; nothing downstream trusts that choice -
the oracle re-establishes correctness on the exact coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import oracle
from .artifact import PointSetArtifact, squared_distance_bounds
from .exact import Point2, Rotation2
from .reporting import VerificationReport


def choose_half_tangent(angle: float, tolerance: float) -> Fraction:
    """Rational t with |2*atan(t) - angle| < tolerance (choice only; exact after)."""
    if not (0 < angle < math.pi):
        raise ValueError("angle must be in (0, pi)")
    bits = max(8, math.ceil(math.log2(4 / tolerance)))
    return Fraction(round(math.tan(angle / 2) * 2**bits), 2**bits)


def normalize_width(artifact: PointSetArtifact) -> PointSetArtifact:
    """Scale/shift so x spans exactly [-1/2, 1/2] (uniform scale keeps shape)."""
    xs = [p[0] for p in artifact.points]
    lo, hi = min(xs), max(xs)
    if lo == hi:
        raise ValueError("degenerate x-range")
    center = (lo + hi) / 2
    s = Fraction(1) / (hi - lo)
    pts = [((x - center) * s, y * s) for x, y in artifact.points]
    return artifact.with_points(pts, normalized="x-width-1")


def lift(base: PointSetArtifact, epsilon: Fraction) -> PointSetArtifact:
    """Move the normalized base into the annulus: (x, y) -> (x + 3/2, eps**2 y).

    Requires x in [-1/2, 1/2]; afterwards x lies in [1, 2] and the set hugs
    the positive x-axis.  Affine, so the halving family is untouched.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    for x, _y in base.points:
        if not (Fraction(-1, 2) <= x <= Fraction(1, 2)):
            raise ValueError(f"x={x} outside the normalized range [-1/2, 1/2]")
    e2 = epsilon * epsilon
    pts = [(x + Fraction(3, 2), e2 * y) for x, y in base.points]
    return base.with_points(pts, lift_epsilon=str(epsilon))


def default_epsilon(n: int) -> Fraction:
    return Fraction(1, 2**12 * n * n)


def assemble_rosette(lifted: PointSetArtifact, copies: int | None = None) -> PointSetArtifact:
    """Union of `copies` rotated images of the lifted set (default n+1).

    The rotation step approximates 2*pi/copies with cumulative angular error
    under pi/(8*copies); copies must not share any point (checked exactly).
    """
    n = lifted.count
    if copies is None:
        copies = n + 1
    if copies < 1:
        raise ValueError("need at least one copy")
    beta = 2 * math.pi / copies
    t = choose_half_tangent(beta, math.pi / (8 * copies * max(n, 1) * 2))
    step = Rotation2.from_half_tangent(t)
    turns = step.powers(copies - 1)

    points: list[Point2] = []
    claimed: list[tuple[int, int]] = []
    for k in range(copies):
        rot = turns[k]
        offset = k * n
        points.extend(rot.apply(p) for p in lifted.points)
        claimed.extend((offset + i, offset + j) for i, j in lifted.claimed_halving)
    if len(set(points)) != len(points):
        raise ValueError("rosette copies overlap")
    return PointSetArtifact(
        dimension=2,
        points=points,
        provenance={
            "construction": "rosette",
            "base": lifted.provenance,
            "rosette_base_count": n,
            "copies": copies,
            "half_tangent": str(t),
        },
        claimed_halving=claimed,
    )


def verify_rosette(rosette: PointSetArtifact) -> VerificationReport:
    """Certify the union: every transplanted line halving, copies split evenly."""
    n = rosette.provenance["rosette_base_count"]
    copies = rosette.provenance["copies"]
    points = rosette.points
    report = VerificationReport(name=f"rosette(copies={copies}, n={n})")
    report.checked += 1
    if rosette.count != n * copies:
        report.record_violation(("count", rosette.count))

    for pair in rosette.claimed_halving:
        ok, sides = oracle.is_halving([points[pair[0]], points[pair[1]]], points)
        report.checked += 1
        if not ok:
            report.record_violation(("not-halving", pair, sides))
    report.details["transplanted_family"] = len(rosette.claimed_halving)

    half_copies = (copies - 1) // 2 if (copies - 1) % 2 == 0 else None
    for pair in rosette.claimed_halving:
        own = pair[0] // n
        a, b = points[pair[0]], points[pair[1]]
        left = right = 0
        for other in range(copies):
            if other == own:
                continue
            signs = {_orient_sign(a, b, points[other * n + i]) for i in range(n)}
            report.checked += 1
            if len(signs) != 1 or 0 in signs:
                report.record_violation(("copy-split", pair, other))
            elif signs == {1}:
                left += 1
            else:
                right += 1
        if half_copies is not None and not (left == right == half_copies):
            report.record_violation(("copy-balance", pair, left, right))
    return report


def _orient_sign(a: Point2, b: Point2, c: Point2) -> int:
    s = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (s > 0) - (s < 0)


def build_rosette(
    base: PointSetArtifact,
    epsilon: Fraction | None = None,
    copies: int | None = None,
    max_retries: int = 4,
) -> tuple[PointSetArtifact, VerificationReport]:
    """normalize -> lift -> assemble -> certify, halving epsilon on failure."""
    normalized = normalize_width(base)
    eps = epsilon if epsilon is not None else default_epsilon(base.count)
    last_report = None
    for attempt in range(max_retries + 1):
        rosette = assemble_rosette(lift(normalized, eps), copies)
        report = verify_rosette(rosette)
        report.details["epsilon"] = eps
        report.details["retries"] = attempt
        if report.passed:
            return rosette, report
        last_report = report
        eps = eps / 2
    return rosette, last_report  # type: ignore[return-value]


def pad_regular_polygon(
    artifact: PointSetArtifact, target: int, max_phase_retries: int = 32
) -> tuple[PointSetArtifact, VerificationReport]:
    """Pad with antipodal pairs of exact radius-3 circle points.

    Rational rotations are exactly orthogonal, so powers of one step applied
    to (3, 0) give points exactly on the radius-3 circle, nearly equally
    spaced; taking each together with its antipode keeps every claimed line
    balanced.  A phase nudge retries if any vertex lands on a claimed line.
    """
    count = artifact.count
    if target % 2 != 0:
        raise ValueError("target count must be even")
    extra = target - count
    if extra < 0:
        raise ValueError("target smaller than current count")
    base_n = artifact.provenance.get("rosette_base_count", math.isqrt(count))
    if extra >= 4 * base_n + 6:
        raise ValueError(f"padding larger than the allowed {4 * base_n + 6 - 1} extra points")
    report = VerificationReport(name=f"polygon-pad({count}->{target})")
    if extra == 0:
        report.details["added"] = 0
        return artifact, report

    half = extra // 2
    points = artifact.points
    lines = [(points[i], points[j]) for i, j in artifact.claimed_halving]
    step = Rotation2.from_half_tangent(choose_half_tangent(2 * math.pi / max(extra, 3), 0.01))
    nudge = Rotation2.from_half_tangent(Fraction(1, 97))
    existing = set(points)

    base_pt: Point2 = (Fraction(3), Fraction(0))
    phase = Rotation2.identity()
    for attempt in range(max_phase_retries):
        turns = step.powers(half - 1) if half > 1 else [Rotation2.identity()]
        uppers = [turns[s].apply(phase.apply(base_pt)) for s in range(half)]
        vertices = uppers + [(-x, -y) for x, y in uppers]
        ok = len(set(vertices)) == extra and not (set(vertices) & existing)
        if ok:
            for a, b in lines:
                for v in uppers:
                    s1 = _orient_sign(a, b, v)
                    s2 = _orient_sign(a, b, (-v[0], -v[1]))
                    if s1 == 0 or s2 == 0 or s1 == s2:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            report.details["added"] = extra
            report.details["phase_retries"] = attempt
            padded = PointSetArtifact(
                dimension=2,
                points=list(points) + vertices,
                provenance={**artifact.provenance, "polygon_padding": {"added": extra}},
                claimed_halving=list(artifact.claimed_halving),
            )
            for i, j in padded.claimed_halving:
                ok2, sides = oracle.is_halving([padded.points[i], padded.points[j]], padded.points)
                report.checked += 1
                if not ok2:
                    report.record_violation(("not-halving-after-pad", (i, j), sides))
            return padded, report
        phase = phase.compose(nudge)
    raise ValueError("could not place polygon padding off the claimed lines")


def density_check(
    artifact: PointSetArtifact, gamma: Fraction, d: int | None = None
) -> VerificationReport:
    """Exact density verdict: max distance <= gamma * n**(1/d) * min distance.

    Compared without roots: max_sq**d <= gamma**(2d) * n**2 * min_sq**d.  The
    report carries the exact squared extremes and the smallest gamma (as a
    float, display only) the set would satisfy.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    dim = d if d is not None else artifact.dimension
    n = artifact.count
    min_sq, max_sq = squared_distance_bounds(artifact.points)
    report = VerificationReport(name=f"density(gamma={gamma}, d={dim})")
    report.checked = n * (n - 1) // 2
    dense = max_sq**dim <= gamma ** (2 * dim) * n**2 * min_sq**dim
    report.passed = dense
    if not dense:
        report.violation_count = 1
        report.violations.append(("ratio-exceeds", gamma))
    report.details["min_sq_dist"] = min_sq
    report.details["max_sq_dist"] = max_sq
    report.details["achieved_gamma_approx"] = float(
        (max_sq / min_sq) ** 0.5 / n ** (1.0 / dim)
    )
    return report
