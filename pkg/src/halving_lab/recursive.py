"""Recursive construction of point sets with a certified halving family.

Starting from one plain and one bold point joined by a segment, every round
replaces each plain point by a short horizontal run of plain points, each bold
point by a slightly longer run, and drops a new bold point just left of the
midpoint of every listed segment, joined to all replacement points of that
segment's endpoints.  The runs shrink fast enough (powers of two chosen from
the target depth) that every listed segment stays a halving segment at every
depth; verifiers below certify that and the supporting strip/slope facts
exactly, with the independent oracle as the authority on halving itself.

Genealogy (which point/segment replaced which) is stored as explicit id links
rather than recovered from coordinates: the strip claims quantify over
descendants, so identity must be combinatorial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import oracle
from .artifact import PointSetArtifact, x_gap_bounds
from .exact import Point2, Segment, extension
from .reporting import VerificationReport

#: depth beyond which oracle certification stops being a desk-scale affair
#: (point counts grow like 2**(i*i/2); depth 4 already holds 5450 points)
MAX_DEPTH = 4

PLAIN = "plain"
BOLD = "bold"


def recursion_parameters(order: int, i: int) -> tuple[int, Fraction, Fraction]:
    """(run length a_i, step eps_i, run width d_i) for round i at a given order.

    a_i = 2**i, eps_i = 2**-(4*order+4)*i, d_i = a_i * eps_i.
    """
    if i < 1 or i > order:
        raise ValueError(f"round index {i} outside 1..{order}")
    a = 2**i
    eps = Fraction(1, 2 ** ((4 * order + 4) * i))
    return a, eps, a * eps


@dataclass
class TaggedPoint:
    id: int
    x: Fraction
    y: Fraction
    kind: str  # PLAIN or BOLD
    level: int
    parent: int | None = None
    assigned_segment: int | None = None  # bold points: segment they were born on

    @property
    def coords(self) -> Point2:
        return (self.x, self.y)


@dataclass
class HalvingSegmentRecord:
    id: int
    plain_id: int
    bold_id: int
    level: int
    parent: int | None = None


@dataclass
class RecursiveChain:
    """All levels 0..depth of one construction, with genealogy."""

    order: int
    depth: int
    points: list[TaggedPoint] = field(default_factory=list)
    segments: list[HalvingSegmentRecord] = field(default_factory=list)
    level_points: list[list[int]] = field(default_factory=list)
    level_segments: list[list[int]] = field(default_factory=list)
    point_children: dict[int, list[int]] = field(default_factory=dict)
    segment_children: dict[int, list[int]] = field(default_factory=dict)

    # -- views ---------------------------------------------------------------

    def graph(self, i: int) -> "GeometricGraph":
        if not (0 <= i <= self.depth):
            raise ValueError(f"level {i} not built (depth {self.depth})")
        return GeometricGraph(
            order=self.order,
            index=i,
            points=[self.points[pid] for pid in self.level_points[i]],
            segments=[self.segments[sid] for sid in self.level_segments[i]],
            chain=self,
        )

    def segment_endpoints(self, sid: int) -> tuple[Point2, Point2]:
        s = self.segments[sid]
        return self.points[s.plain_id].coords, self.points[s.bold_id].coords

    def segment_geometry(self, sid: int) -> Segment:
        a, b = self.segment_endpoints(sid)
        return Segment(a, b)

    def descendant_segments(self, sid: int) -> list[int]:
        """Strict descendants, breadth-first."""
        out: list[int] = []
        frontier = list(self.segment_children.get(sid, ()))
        while frontier:
            out.extend(frontier)
            frontier = [c for f in frontier for c in self.segment_children.get(f, ())]
        return out

    def descendant_endpoint_ids(self, sid: int) -> set[int]:
        """Point ids that appear as endpoints of strict descendant segments."""
        ids: set[int] = set()
        for did in self.descendant_segments(sid):
            rec = self.segments[did]
            ids.add(rec.plain_id)
            ids.add(rec.bold_id)
        return ids


@dataclass
class GeometricGraph:
    """One level: the point set S_i together with its listed segments H_i."""

    order: int
    index: int
    points: list[TaggedPoint]
    segments: list[HalvingSegmentRecord]
    chain: RecursiveChain

    @property
    def coords(self) -> list[Point2]:
        return [p.coords for p in self.points]

    def position_of(self, point_id: int) -> int:
        return self.chain.level_points[self.index].index(point_id)


def build_chain(order: int, depth: int | None = None, max_depth: int = MAX_DEPTH) -> RecursiveChain:
    if order < 0:
        raise ValueError("order must be non-negative")
    if depth is None:
        depth = order
    if depth > order:
        raise ValueError(f"index {depth} exceeds order {order}")
    if depth > max_depth:
        raise ValueError(f"depth {depth} beyond the configured limit {max_depth}")

    chain = RecursiveChain(order=order, depth=depth)

    def new_point(x: Fraction, y: Fraction, kind: str, level: int, parent=None, assigned=None) -> int:
        pid = len(chain.points)
        chain.points.append(TaggedPoint(pid, x, y, kind, level, parent, assigned))
        chain.point_children.setdefault(pid, [])
        if parent is not None:
            chain.point_children[parent].append(pid)
        return pid

    def new_segment(plain_id: int, bold_id: int, level: int, parent=None) -> int:
        sid = len(chain.segments)
        chain.segments.append(HalvingSegmentRecord(sid, plain_id, bold_id, level, parent))
        chain.segment_children.setdefault(sid, [])
        if parent is not None:
            chain.segment_children[parent].append(sid)
        return sid

    p0 = new_point(Fraction(1), Fraction(1), PLAIN, 0)
    b0 = new_point(Fraction(0), Fraction(0), BOLD, 0)
    s0 = new_segment(p0, b0, 0)
    chain.level_points.append([p0, b0])
    chain.level_segments.append([s0])

    for i in range(1, depth + 1):
        a, eps, _ = recursion_parameters(order, i)
        level_pts: list[int] = []
        level_segs: list[int] = []
        # progression replacement; plain runs grow rightward, bold runs leftward
        replacement: dict[int, list[int]] = {}
        for pid in chain.level_points[i - 1]:
            tp = chain.points[pid]
            if tp.kind == PLAIN:
                kids = [new_point(tp.x + k * eps, tp.y, PLAIN, i, parent=pid) for k in range(a)]
            else:
                kids = [new_point(tp.x - k * eps, tp.y, PLAIN, i, parent=pid) for k in range(a + 1)]
            replacement[pid] = kids
            level_pts.extend(kids)
        # one new bold point per listed segment, wired to both replacement runs
        for sid in chain.level_segments[i - 1]:
            rec = chain.segments[sid]
            (px, py) = chain.points[rec.plain_id].coords
            (bx, by) = chain.points[rec.bold_id].coords
            q = new_point(
                (px + bx) / 2 - eps / 4,
                (py + by) / 2,
                BOLD,
                i,
                parent=rec.bold_id,
                assigned=sid,
            )
            level_pts.append(q)
            for kid in replacement[rec.plain_id]:
                level_segs.append(new_segment(kid, q, i, parent=sid))
            for kid in replacement[rec.bold_id]:
                level_segs.append(new_segment(kid, q, i, parent=sid))
        chain.level_points.append(level_pts)
        chain.level_segments.append(level_segs)

    return chain


def build(order: int, index: int, max_depth: int = MAX_DEPTH) -> GeometricGraph:
    """The level-`index` graph of the given order (levels 0..index get built)."""
    return build_chain(order, index, max_depth=max_depth).graph(index)


# --------------------------------------------------------------- fast lattice


class _IntLattice:
    """Integer image of a chain's coordinates (they are all dyadic)."""

    def __init__(self, chain: RecursiveChain):
        den = 1
        for p in chain.points:
            den = _lcm(den, p.x.denominator)
            den = _lcm(den, p.y.denominator)
        self.den = den
        self.xy = [(int(p.x * den), int(p.y * den)) for p in chain.points]

    def side(self, sid_points: tuple[int, int], qid: int, chain: RecursiveChain) -> int:
        """Orientation of q against the canonically oriented segment line."""
        aid, bid = sid_points
        a = self.xy[aid]
        b = self.xy[bid]
        if (a[1], a[0]) > (b[1], b[0]):
            a, b = b, a
        q = self.xy[qid]
        s = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
        return (s > 0) - (s < 0)


def _lcm(a: int, b: int) -> int:
    import math

    return math.lcm(a, b)


# ------------------------------------------------------------------ verifiers


def verify_halving_all(g: GeometricGraph) -> VerificationReport:
    """Every listed segment is certified halving by the coordinate oracle."""
    report = VerificationReport(name=f"halving-all(order={g.order}, level={g.index})")
    coords = g.coords
    for rec in g.segments:
        defining = [g.chain.points[rec.plain_id].coords, g.chain.points[rec.bold_id].coords]
        ok, sides = oracle.is_halving(defining, coords)
        report.checked += 1
        if not ok:
            report.record_violation((rec.id, sides))
    report.details["segments"] = len(g.segments)
    return report


def _alpha(order: int, i: int) -> Fraction:
    """Strip half-width used by the containment/exclusion claims at level i."""
    return 2 ** (i + 2) * Fraction(1, 2 ** ((4 * order + 3) * (i + 1)))


def verify_claim_strip_containment(chain: RecursiveChain) -> VerificationReport:
    """Extensions of all descendant segments stay within the ancestor's strip.

    Both x-intercepts (at y=0 and y=1) of a descendant's extension must be
    within the half-width of the ancestor extension's intercepts.
    """
    report = VerificationReport(name=f"strip-containment(order={chain.order})")
    for i in range(chain.depth + 1):
        alpha = _alpha(chain.order, i)
        for sid in chain.level_segments[i]:
            ext_s = extension(chain.segment_geometry(sid))
            sx0, sx1 = ext_s.a[0], ext_s.b[0]
            for did in chain.descendant_segments(sid):
                ext_r = extension(chain.segment_geometry(did))
                report.checked += 2
                if abs(ext_r.a[0] - sx0) > alpha or abs(ext_r.b[0] - sx1) > alpha:
                    report.record_violation((sid, did))
    return report


def verify_claim_strip_exclusion(chain: RecursiveChain) -> VerificationReport:
    """Non-descendants never enter the doubled strip of a listed segment.

    For every segment s at level i and every point q at levels i..depth that
    is neither an endpoint of s nor an endpoint of a descendant of s, q lies
    outside the width-2*alpha strip of s, exactly.
    """
    report = VerificationReport(name=f"strip-exclusion(order={chain.order})")
    lattice = _IntLattice(chain)
    den = lattice.den
    for i in range(chain.depth + 1):
        two_alpha = 2 * _alpha(chain.order, i)
        an, ad = two_alpha.numerator, two_alpha.denominator
        for sid in chain.level_segments[i]:
            rec = chain.segments[sid]
            excluded = chain.descendant_endpoint_ids(sid)
            excluded.add(rec.plain_id)
            excluded.add(rec.bold_id)
            ax, ay = lattice.xy[rec.plain_id]
            bx, by = lattice.xy[rec.bold_id]
            dx, dy = bx - ax, by - ay
            # |horizontal distance| <= 2*alpha  <=>  |cross| * ad <= an * den * |dy|
            bound = an * den * abs(dy)
            for j in range(i, chain.depth + 1):
                for qid in chain.level_points[j]:
                    if qid in excluded:
                        continue
                    qx, qy = lattice.xy[qid]
                    report.checked += 1
                    # slab of the extension is 0 <= y <= 1 in true coordinates
                    if not (0 <= qy <= den):
                        continue
                    cross = dx * (qy - ay) - dy * (qx - ax)
                    if abs(cross) * ad <= bound:
                        report.record_violation((sid, qid))
    return report


def verify_side_preservation(chain: RecursiveChain) -> VerificationReport:
    """Children inherit their parent's side of the listed-segment lines.

    For a segment s at level i, a non-endpoint point q at level i, any child
    q' of q and any child s' of s: q and q' are on the same side of the
    respective lines.  A zero orientation anywhere is itself a violation.
    """
    report = VerificationReport(name=f"side-preservation(order={chain.order})")
    lattice = _IntLattice(chain)
    for i in range(chain.depth):
        for sid in chain.level_segments[i]:
            rec = chain.segments[sid]
            child_segs = [(chain.segments[c].plain_id, chain.segments[c].bold_id) for c in chain.segment_children[sid]]
            for qid in chain.level_points[i]:
                if qid in (rec.plain_id, rec.bold_id):
                    continue
                side = lattice.side((rec.plain_id, rec.bold_id), qid, chain)
                if side == 0:
                    report.record_violation(("on-line", sid, qid))
                    continue
                for q_child in chain.point_children[qid]:
                    for s_child in child_segs:
                        report.checked += 1
                        if lattice.side(s_child, q_child, chain) != side:
                            report.record_violation((sid, qid, q_child, s_child))
    return report


def verify_slopes(g: GeometricGraph) -> VerificationReport:
    """Every non-horizontal pair has x-difference / y-difference in [7/8, 9/8]."""
    report = VerificationReport(name=f"slope-bounds(order={g.order}, level={g.index})")
    lo, hi = Fraction(7, 8), Fraction(9, 8)
    pts = [p.coords for p in g.points]
    n = len(pts)
    for i in range(n):
        xi, yi = pts[i]
        for j in range(i + 1, n):
            xj, yj = pts[j]
            if yi == yj:
                continue
            cot = (xi - xj) / (yi - yj)
            report.checked += 1
            if not (lo <= cot <= hi):
                report.record_violation((i, j, cot))
    return report


def finalize_lemma1(g: GeometricGraph) -> tuple[PointSetArtifact, VerificationReport]:
    """Diagonal graph -> artifact with x shrunk by 8/9 and certified x-gaps.

    Only the diagonal construction (order == index) is finalized.  The report
    certifies that every pairwise x-difference lies in [n**-8, 1], exactly.
    """
    if g.order != g.index:
        raise ValueError("only the diagonal construction is finalized")
    scale = Fraction(8, 9)
    points: list[Point2] = [(p.x * scale, p.y) for p in g.points]
    pos = {pid: k for k, pid in enumerate(g.chain.level_points[g.index])}
    claimed = [(pos[rec.plain_id], pos[rec.bold_id]) for rec in g.segments]
    roles = [p.kind for p in g.points]
    artifact = PointSetArtifact(
        dimension=2,
        points=points,
        provenance={
            "construction": "recursive-diagonal",
            "order": g.order,
            "index": g.index,
            "x_scale": "8/9",
        },
        claimed_halving=claimed,
        roles=roles,
    )
    report = VerificationReport(name=f"x-gap-bounds(level={g.index})")
    min_dx, max_dx = x_gap_bounds(points)
    n = len(points)
    report.checked = n * (n - 1) // 2
    report.details["min_dx"] = min_dx
    report.details["max_dx"] = max_dx
    report.details["required_min"] = Fraction(1, n**8)
    if min_dx < Fraction(1, n**8):
        report.record_violation(("min", min_dx))
    if max_dx > 1:
        report.record_violation(("max", max_dx))
    return artifact, report


def graph_artifact(g: GeometricGraph) -> PointSetArtifact:
    """Raw (unscaled) artifact of one level, with roles and the listed family."""
    pos = {pid: k for k, pid in enumerate(g.chain.level_points[g.index])}
    return PointSetArtifact(
        dimension=2,
        points=[p.coords for p in g.points],
        provenance={"construction": "recursive", "order": g.order, "index": g.index},
        claimed_halving=[(pos[rec.plain_id], pos[rec.bold_id]) for rec in g.segments],
        roles=[p.kind for p in g.points],
    )
