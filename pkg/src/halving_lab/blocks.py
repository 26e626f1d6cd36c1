"""Block amplification: many rotated copies of a quantized, flattened base.

The pipeline takes a certified base set (the finalized diagonal construction),
snaps its x-coordinates onto an index-staggered grid (which keeps every listed
segment halving - the tolerated horizontal motion is certified first), squashes
y, and then lays out 2N+1 copies as thin spokes around the origin: N+1 of them
at even multiples of a tiny rotation step on the right, N at odd multiples on
the left.  Every listed segment of every copy then has whole copies on each
side, N of them per side, so it remains halving in the union; the verifier
certifies exactly that, plus the exact minimum x-gap the grid guarantees.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import oracle
from .artifact import PointSetArtifact, x_gap_bounds
from .exact import Point2, Rotation2, negate
from .recursive import GeometricGraph
from .reporting import VerificationReport


def perturbation_tolerance(point_count: int) -> Fraction:
    """Horizontal slack every listed segment provably survives: n**-9."""
    return Fraction(1, point_count**9)


def verify_perturbation_tolerance(
    g: GeometricGraph, magnitude: Fraction, trials: int, seed: int
) -> VerificationReport:
    """Seeded random horizontal shifts up to `magnitude` keep the family halving.

    Only diagonal graphs are accepted, and the magnitude must stay within the
    provable tolerance; each trial draws one exact rational shift per point
    and re-certifies every listed segment with the oracle.
    """
    if g.order != g.index:
        raise ValueError("perturbation tolerance applies to the diagonal construction")
    n = len(g.points)
    tol = perturbation_tolerance(n)
    if magnitude > tol:
        raise ValueError(f"magnitude {magnitude} exceeds the tolerance {tol}")
    report = VerificationReport(name=f"perturbation-tolerance(level={g.index}, trials={trials})")
    report.details["magnitude"] = magnitude
    report.details["tolerance"] = tol
    rng = random.Random(seed)
    grain = 2**20
    base = [p.coords for p in g.points]
    for trial in range(trials):
        moved = [
            (x + Fraction(rng.randint(-grain, grain), grain) * magnitude, y)
            for (x, y) in base
        ]
        for rec in g.segments:
            a = moved[g.position_of(rec.plain_id)]
            b = moved[g.position_of(rec.bold_id)]
            ok, sides = oracle.is_halving([a, b], moved)
            report.checked += 1
            if not ok:
                report.record_violation((trial, rec.id, sides))
    return report


def snap_coordinate(x: Fraction, j: int, n: int, exponent: int) -> Fraction:
    """Grid image of one coordinate: floor(n**Q x)/n**Q + j/n**(Q+1), j 1-based."""
    return Fraction(math.floor(x * n**exponent), n**exponent) + Fraction(j, n ** (exponent + 1))


def quantize(points: list[Point2], n: int, exponent: int) -> tuple[list[Point2], VerificationReport]:
    """Snap x_j to floor(n**Q x_j)/n**Q + j/n**(Q+1), then shift into [1, 3].

    The 1-based index term makes all x pairwise distinct with gaps of at least
    n**-(Q+1).  Preconditions certified exactly: every horizontal move stays
    within the n**-9 tolerance (so the halving family provably survives), and
    the final shift (an integer multiple of n**-Q, preserving the grid form)
    lands every x in [1, 3].
    """
    if len(points) != n:
        raise ValueError("n must equal the point count")
    q_den = n**exponent
    fine_den = n ** (exponent + 1)
    tol = perturbation_tolerance(n)
    report = VerificationReport(name=f"quantize(n={n}, Q={exponent})")
    moved: list[Point2] = []
    max_move = Fraction(0)
    for j, (x, y) in enumerate(points, start=1):
        x_new = snap_coordinate(x, j, n, exponent)
        max_move = max(max_move, abs(x_new - x))
        moved.append((x_new, y))
    report.details["max_move"] = max_move
    report.details["tolerance"] = tol
    report.checked += n
    if max_move > tol:
        raise ValueError(
            f"quantization exponent {exponent} too small for n={n}: "
            f"max move {max_move} exceeds tolerance {tol}"
        )
    min_x = min(x for x, _ in moved)
    shift_steps = math.ceil((1 - min_x) * q_den)
    shift = Fraction(shift_steps, q_den)
    shifted = [(x + shift, y) for x, y in moved]
    report.details["shift_steps"] = shift_steps
    for x, _ in shifted:
        report.checked += 1
        if not (1 <= x <= 3):
            report.record_violation(("x-range", x))
    min_gap, _ = x_gap_bounds(shifted)
    report.details["min_gap"] = min_gap
    report.checked += 1
    if min_gap < Fraction(1, fine_den):
        report.record_violation(("gap", min_gap))
    return shifted, report


def flatten(points: list[Point2], delta: Fraction) -> list[Point2]:
    """Squash y by delta**2 (an affine map; halving relations are unchanged)."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    d2 = delta * delta
    return [(x, d2 * y) for x, y in points]


def default_delta(n: int, blocks: int, exponent: int) -> Fraction:
    """Rotation step small enough that spoke rotations never disturb the grid.

    A rotation by at most (2N+1) steps moves an x-coordinate by roughly
    4 * angle**2 / 2 + |y| * angle; keeping that under a quarter of the grid
    gap n**-(Q+1) needs delta <= n**-(Q+1)/2 / (10 N); rounded down to a power
    of two for small denominators.
    """
    target = 10 * blocks * n ** ((exponent + 2) // 2)
    return Fraction(1, 1 << (target - 1).bit_length())


@dataclass
class BlockParameters:
    base: PointSetArtifact
    blocks: int  # N: N+1 right spokes, N left spokes
    quant_exp: int = 9
    delta: Fraction | None = None

    def __post_init__(self) -> None:
        if self.blocks < 1:
            raise ValueError("need at least one block")
        if self.quant_exp < 1:
            raise ValueError("quantization exponent must be positive")
        if self.base.count % 2 != 0:
            raise ValueError("base point count must be even")
        if not self.base.claimed_halving:
            raise ValueError("base artifact carries no halving family to transplant")
        if self.delta is not None and self.delta <= 0:
            raise ValueError("delta must be positive")


@dataclass
class BlockSet:
    positive_blocks: list[list[Point2]]
    negative_blocks: list[list[Point2]]
    scale: Fraction
    params: BlockParameters
    delta: Fraction
    quantize_report: VerificationReport

    @property
    def block_count(self) -> int:
        return len(self.positive_blocks) + len(self.negative_blocks)

    @property
    def all_blocks(self) -> list[list[Point2]]:
        return self.positive_blocks + self.negative_blocks

    def to_artifact(self) -> PointSetArtifact:
        base = self.params.base
        n = base.count
        points: list[Point2] = []
        spans = []
        for b, block in enumerate(self.all_blocks):
            kind = "positive" if b < len(self.positive_blocks) else "negative"
            spans.append({"kind": kind, "start": b * n, "count": n})
            points.extend(block)
        claimed = [
            (b * n + i, b * n + j)
            for b in range(self.block_count)
            for (i, j) in base.claimed_halving
        ]
        return PointSetArtifact(
            dimension=2,
            points=points,
            provenance={
                "construction": "block-union",
                "base": base.provenance,
                "base_count": n,
                "blocks": self.params.blocks,
                "quant_exp": self.params.quant_exp,
                "delta": str(self.delta),
                "scale": str(self.scale),
                "spans": spans,
            },
            claimed_halving=claimed,
        )


def assemble_blocks(params: BlockParameters) -> BlockSet:
    base = params.base
    n = base.count
    big_n = params.blocks
    q = params.quant_exp
    delta = params.delta if params.delta is not None else default_delta(n, big_n, q)

    quantized, q_report = quantize(list(base.points), n, q)
    flat = flatten(quantized, delta)

    step = Rotation2.from_half_tangent(delta / 2)
    turns = step.powers(2 * big_n)
    q_den = n**q

    def spoke(k: int, turn: Rotation2, mirror: bool) -> list[Point2]:
        shift = Fraction(k, q_den)
        out = []
        for x, y in flat:
            p = turn.apply((x + shift, y))
            out.append(negate(p) if mirror else p)
        return out

    positive = [spoke(k, turns[2 * k], mirror=False) for k in range(big_n + 1)]
    negative = [spoke(k, turns[2 * k + 1], mirror=True) for k in range(big_n)]

    scale = Fraction(q_den, 6 * big_n)
    positive = [[(x * scale, y * scale) for x, y in blk] for blk in positive]
    negative = [[(x * scale, y * scale) for x, y in blk] for blk in negative]
    return BlockSet(positive, negative, scale, params, delta, q_report)


def verify_blocks(block_set: BlockSet) -> VerificationReport:
    """Certify the assembled union.

    - every transplanted segment is halving in the union (oracle), so the
      certified family has exactly (2N+1) * m members;
    - for each transplanted line, every other block lies strictly on one side,
      N blocks per side;
    - the minimum pairwise x-gap is at least n / (12 N n**(Q+1) / n**Q) =
      1/(12 n N), and its exact value is reported.
    """
    params = block_set.params
    base = params.base
    n = base.count
    big_n = params.blocks
    artifact = block_set.to_artifact()
    points = artifact.points
    report = VerificationReport(name=f"block-union(N={big_n}, n={n})")

    for pair in artifact.claimed_halving:
        ok, sides = oracle.is_halving([points[pair[0]], points[pair[1]]], points)
        report.checked += 1
        if not ok:
            report.record_violation(("not-halving", pair, sides))
    report.details["transplanted_family"] = len(artifact.claimed_halving)

    blocks = block_set.all_blocks
    m = len(base.claimed_halving)
    for b, block in enumerate(blocks):
        for i, j in base.claimed_halving:
            a_pt, b_pt = block[i], block[j]
            left = right = 0
            for other in range(len(blocks)):
                if other == b:
                    continue
                signs = {
                    _orient_sign(a_pt, b_pt, p) for p in blocks[other]
                }
                report.checked += 1
                if len(signs) != 1 or 0 in signs:
                    report.record_violation(("block-split", b, (i, j), other))
                elif signs == {1}:
                    left += 1
                else:
                    right += 1
            if not (left == right == big_n):
                report.record_violation(("block-balance", b, (i, j), left, right))
    report.details["lines_checked_against_blocks"] = (2 * big_n + 1) * m

    min_gap, max_gap = x_gap_bounds(points)
    bound = Fraction(1, 12 * n * big_n)
    report.details["min_dx"] = min_gap
    report.details["max_dx"] = max_gap
    report.details["min_dx_bound"] = bound
    report.checked += 1
    if min_gap < bound:
        report.record_violation(("min-gap", min_gap, bound))
    return report


def _orient_sign(a: Point2, b: Point2, c: Point2) -> int:
    s = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (s > 0) - (s < 0)


def pad_to_count(artifact: PointSetArtifact, target: int) -> tuple[PointSetArtifact, VerificationReport]:
    """Grow the set to `target` points without disturbing its halving family.

    Extra points come in pairs, one far above and one far below every claimed
    line, at x-positions splitting the widest gaps of the existing x-values;
    every pair therefore feeds both sides of every claimed line equally.  The
    report re-certifies the whole family on the padded set.
    """
    if target % 2 != 0:
        raise ValueError("target count must be even")
    if target < artifact.count:
        raise ValueError("target smaller than current count")
    report = VerificationReport(name=f"pad-to-count({artifact.count}->{target})")
    extra = target - artifact.count
    if extra == 0:
        report.details["added"] = 0
        return artifact, report

    points = list(artifact.points)
    lines = [(points[i], points[j]) for i, j in artifact.claimed_halving]
    for a, b in lines:
        if a[0] == b[0]:
            raise ValueError("padding scheme requires non-vertical claimed lines")

    xs = sorted({p[0] for p in points})
    gaps = sorted(
        ((hi - lo, lo, hi) for lo, hi in zip(xs, xs[1:])),
        key=lambda t: (-t[0], t[1]),
    )
    if extra > len(gaps):
        raise ValueError("not enough distinct x-gaps to place the padding")

    def line_y_at(x: Fraction) -> list[Fraction]:
        return [a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0]) for a, b in lines]

    added: list[Point2] = []
    for t in range(extra):
        _width, lo, hi = gaps[t]
        x = (lo + hi) / 2
        ys = line_y_at(x)
        if t % 2 == 0:
            p = (x, max(ys) + 1)
        else:
            p = (x, min(ys) - 1)
        added.append(p)
    points.extend(added)

    for i, j in artifact.claimed_halving:
        ok, sides = oracle.is_halving([points[i], points[j]], points)
        report.checked += 1
        if not ok:
            report.record_violation(("not-halving-after-pad", (i, j), sides))
    min_gap, max_gap = x_gap_bounds(points)
    report.details["added"] = extra
    report.details["min_dx"] = min_gap
    report.details["max_dx"] = max_gap

    padded = PointSetArtifact(
        dimension=2,
        points=points,
        provenance={**artifact.provenance, "padding": {"added": extra}},
        claimed_halving=list(artifact.claimed_halving),
        roles=None,
    )
    return padded, report
