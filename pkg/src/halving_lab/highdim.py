"""Spatial assembly: planar gadget blocks on a packed family of axes.

Two planar gadgets are used.  Block A carries a certified halving family in
its "important" half (a normalized copy of a planar construction output,
squashed until it hugs the axis) plus a split counterweight half; block B is
a nearly origin-symmetric double run whose single asymmetry is the point of
the whole construction: a plane through one of its points misses perfect
balance by exactly one.

Axes come from a symmetric packing of well-separated directions on the unit
sphere (rational approximations; separation is certified exactly).  Half the
axes get an A block, half a B block.  A candidate hyperplane picks a halving
pair from one A block's important part and one point from each of d-2
distinct B blocks; its signed point imbalance is at most d-1 and has the
parity of d, so appending a short stack of apex points high on the last axis
turns the most common imbalance class into exact halving hyperplanes, which
the d-dimensional oracle then certifies one by one.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

from . import oracle
from .artifact import PointSetArtifact, squared_distance_bounds
from .exact import Point, Point2
from .oracle import _int_det  # exact integer determinant
from .reporting import VerificationReport


def inv_sqrt_floor(q: Fraction, bits: int = 24) -> Fraction:
    """Largest 2**-bits-grid rational at most 1/sqrt(q), for q > 0."""
    if q <= 0:
        raise ValueError("need a positive value")
    scaled = (q.denominator << (2 * bits)) // q.numerator
    return Fraction(math.isqrt(scaled), 1 << bits)


def _row_ints(vec: Sequence[Fraction]) -> list[int]:
    den = 1
    for c in vec:
        den = math.lcm(den, c.denominator)
    return [int(c * den) for c in vec]


def _dependent(vectors: Sequence[Sequence[Fraction]]) -> bool:
    """Linear dependence of len(vectors) vectors in R^d (len <= d)."""
    rows = [_row_ints(v) for v in vectors]
    k = len(rows)
    d = len(rows[0])
    if k > d:
        return True
    for cols in combinations(range(d), k):
        if _int_det([[row[c] for c in cols] for row in rows]) != 0:
            return False
    return True


# ------------------------------------------------------------- planar blocks


@dataclass
class PlanarBlock:
    kind: str  # "A" or "B"
    points: list[Point2]  # local in-plane coordinates
    epsilon: Fraction
    important_count: int = 0
    claimed_pairs: list[tuple[int, int]] = field(default_factory=list)


def block_A(m: int, epsilon: Fraction, important: PointSetArtifact) -> PlanarBlock:
    """Important half: the given certified set, moved to x in [1, 2] and
    squashed below epsilon**3; counterweight half: two short runs at height
    +-epsilon**2 on the negative side, built to straddle every important
    halving line.  Construction fails if the oracle refutes that straddle
    (epsilon too large for this important set)."""
    if m < 2 or m % 2 != 0:
        raise ValueError("block A needs an even m >= 2")
    if important.count != m:
        raise ValueError("important part must have exactly m points")
    if not important.claimed_halving:
        raise ValueError("important part carries no halving family")
    if epsilon <= 0 or epsilon >= 1:
        raise ValueError("epsilon must lie in (0, 1)")

    xs = [p[0] for p in important.points]
    spread = max(xs) - min(xs)
    if spread > 1:
        raise ValueError("important part x-spread exceeds 1")
    shift = 1 - min(xs)
    y_max = max(abs(p[1]) for p in important.points)
    y_scale = Fraction(1) if y_max == 0 else epsilon**3 / (2 * y_max)
    local = [(x + shift, y * y_scale) for x, y in important.points]
    for _x, y in local:
        if not abs(y) < epsilon**3:
            raise ValueError("flattening failed to bring y under epsilon**3")

    half = m // 2
    uppers = [(Fraction(-2) + Fraction(i, m), epsilon**2) for i in range(1, half + 1)]
    lowers = [(Fraction(-3, 2) + Fraction(i, m), -(epsilon**2)) for i in range(1, half + 1)]
    points = local + uppers + lowers

    pairs = [tuple(p) for p in important.claimed_halving]
    for i, j in pairs:
        ok, sides = oracle.is_halving([points[i], points[j]], points)
        if not ok:
            raise ValueError(f"epsilon too large: pair {(i, j)} not halving in block A ({sides})")
        upper_signs = {_orient2(points[i], points[j], p) for p in uppers}
        lower_signs = {_orient2(points[i], points[j], p) for p in lowers}
        if len(upper_signs) != 1 or len(lower_signs) != 1 or upper_signs == lower_signs or 0 in upper_signs | lower_signs:
            raise ValueError(f"epsilon too large: counterweights not split by pair {(i, j)}")
    return PlanarBlock("A", points, epsilon, important_count=m, claimed_pairs=pairs)


def block_B(m: int, epsilon: Fraction) -> PlanarBlock:
    """Exactly origin-symmetric double run: (-2+i/m, +eps) and its point
    reflections, i = 1..m.

    Exact symmetry is load-bearing: a near-origin plane through one point w
    then splits the remaining 2m-1 points into m-1 whole antipodal pairs plus
    the single orphan -w, so the block's imbalance is exactly +-1."""
    if m < 1:
        raise ValueError("block B needs m >= 1")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    upper = [(Fraction(-2) + Fraction(i, m), epsilon) for i in range(1, m + 1)]
    lower = [(-x, -y) for x, y in upper]
    return PlanarBlock("B", upper + lower, epsilon)


def _orient2(a: Point2, b: Point2, c: Point2) -> int:
    s = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (s > 0) - (s < 0)


# ---------------------------------------------------------------- directions


@dataclass
class DirectionSet:
    """Antipodally closed family of well-separated rational near-unit axes.

    `centers` stores one representative per +- pair; the separation bound is
    |cos(angle)| <= 1 - 1/(2 m**2) between any two representatives, which
    certifies an angle of at least 1/m between any two of the 2k directions.
    """

    centers: list[Point]
    m: int
    dimension: int
    seed: int

    @property
    def pair_count(self) -> int:
        return len(self.centers)

    @property
    def cos_bound(self) -> Fraction:
        return 1 - Fraction(1, 2 * self.m * self.m)

    def all_directions(self) -> list[Point]:
        return list(self.centers) + [tuple(-c for c in v) for v in self.centers]


def _separated(u: Point, v: Point, cos_bound: Fraction) -> bool:
    dot = sum(a * b for a, b in zip(u, v))
    uu = sum(a * a for a in u)
    vv = sum(b * b for b in v)
    return dot * dot <= cos_bound * cos_bound * uu * vv


def sphere_directions(
    m: int,
    d: int,
    seed: int,
    pairs: int | None = None,
    proposal_budget: int | None = None,
) -> DirectionSet:
    """Greedy symmetric packing of near-unit rational directions.

    Deterministic for a given seed: the d coordinate axes are proposed first,
    then seeded random directions; every proposal is jittered off any exact
    axis, shrunk onto (just inside) the unit sphere, and accepted when the
    exact separation test passes against everything already kept.  Maximality
    is not asserted - only separation, antipodal closure, and the degeneracy
    conditions, which `verify_directions` re-checks.
    """
    if d < 3:
        raise ValueError("direction packing targets dimension >= 3")
    if m < 1:
        raise ValueError("m must be positive")
    rng = random.Random(seed)
    cos_bound = 1 - Fraction(1, 2 * m * m)
    budget = proposal_budget if proposal_budget is not None else max(200, 50 * m ** (d - 1))
    grain = 1 << 12

    def jittered(vec: list[Fraction]) -> Point | None:
        vec = [c + Fraction(rng.randint(-grain, grain), grain * 1024) for c in vec]
        norm_sq = sum(c * c for c in vec)
        if norm_sq == 0:
            return None
        rho = inv_sqrt_floor(norm_sq)
        out = tuple(c * rho for c in vec)
        if all(c == 0 for c in out[:-1]):
            return None  # on the last coordinate axis
        return out

    proposals: Iterator[list[Fraction]] = iter(
        [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    )
    accepted: list[Point] = []
    tried = 0
    while tried < budget and (pairs is None or len(accepted) < pairs):
        vec = next(proposals, None)
        if vec is None:
            vec = [Fraction(round(rng.gauss(0, 1) * grain), grain) for _ in range(d)]
        tried += 1
        cand = jittered(vec)
        if cand is None:
            continue
        if any(not _separated(cand, other, cos_bound) for other in accepted):
            continue
        if len(accepted) < 64 and any(
            _dependent(list(sub) + [cand]) for sub in combinations(accepted, d - 1)
        ):
            continue
        accepted.append(cand)

    if pairs is not None and len(accepted) < pairs:
        raise ValueError(
            f"cannot place {pairs} separated direction pairs at m={m} "
            f"within {budget} proposals (got {len(accepted)})"
        )
    return DirectionSet(accepted, m, d, seed)


def verify_directions(ds: DirectionSet) -> VerificationReport:
    report = VerificationReport(name=f"directions(m={ds.m}, d={ds.dimension}, k={ds.pair_count})")
    cos_bound = ds.cos_bound
    worst = Fraction(0)
    for u, v in combinations(ds.centers, 2):
        report.checked += 1
        dot = sum(a * b for a, b in zip(u, v))
        uu = sum(a * a for a in u)
        vv = sum(b * b for b in v)
        ratio = dot * dot / (uu * vv)
        worst = max(worst, ratio)
        if ratio > cos_bound * cos_bound:
            report.record_violation(("separation", u, v))
    for c in ds.centers:
        report.checked += 1
        if all(x == 0 for x in c[:-1]):
            report.record_violation(("last-axis", c))
    d = ds.dimension
    subsets = math.comb(ds.pair_count, d) if ds.pair_count >= d else 0
    if subsets and subsets <= 200_000:
        report.details["independence_mode"] = "exhaustive"
        for sub in combinations(ds.centers, d):
            report.checked += 1
            if _dependent(list(sub)):
                report.record_violation(("dependent", sub))
    elif subsets:
        rng = random.Random(ds.seed)
        report.details["independence_mode"] = "sampled(2000)"
        for _ in range(2000):
            sub = rng.sample(ds.centers, d)
            report.checked += 1
            if _dependent(sub):
                report.record_violation(("dependent", tuple(sub)))
    report.details["pairs"] = ds.pair_count
    report.details["worst_cos_sq"] = worst
    return report


# ------------------------------------------------------------------ assembly


@dataclass
class SpatialAssembly:
    dimension: int
    points: list[Point]
    block_meta: list[dict]
    m: int
    epsilon: Fraction
    provenance: dict
    apex_count: int = 0
    reflected: bool = False
    retained_candidates: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.points)

    def candidate_tuples(self) -> list[tuple[int, ...]]:
        """All candidate hyperplanes: one important halving pair of one A
        block, plus one point from each of d-2 distinct B blocks."""
        a_blocks = [b for b in self.block_meta if b["kind"] == "A"]
        b_blocks = [b for b in self.block_meta if b["kind"] == "B"]
        need = self.dimension - 2
        out: list[tuple[int, ...]] = []
        for blk in a_blocks:
            for i, j in blk["pairs"]:
                for chosen in combinations(b_blocks, need):
                    ranges = [range(c["start"], c["start"] + c["count"]) for c in chosen]
                    for ws in product(*ranges):
                        out.append((blk["start"] + i, blk["start"] + j, *ws))
        return out

    def to_artifact(self) -> PointSetArtifact:
        return PointSetArtifact(
            dimension=self.dimension,
            points=list(self.points),
            provenance=dict(self.provenance),
            claimed_halving=list(self.retained_candidates),
        )


def _normal_and_offsets(
    ints: list[tuple[int, ...]], tup: Sequence[int]
) -> tuple[tuple[int, ...], list[int]] | None:
    from .oracle import _normal_of

    normal = _normal_of(ints, tup)
    if not any(normal):
        return None
    base = ints[tup[0]]
    offsets = []
    skip = set(tup)
    for k, p in enumerate(ints):
        if k in skip:
            offsets.append(0)
            continue
        offsets.append(sum(nv * (pc - bc) for nv, pc, bc in zip(normal, p, base)))
    return normal, offsets


def diff_of_hyperplane(points: Sequence[Point], defining: Sequence[int]) -> int:
    """(points strictly above) - (points strictly below), measured along the
    last coordinate.  Raises on affinely dependent or vertical hyperplanes and
    on stray points lying exactly on the hyperplane."""
    ints, _ = oracle_scaled(points)
    res = _normal_and_offsets(ints, tuple(defining))
    if res is None:
        raise ValueError(f"degenerate hyperplane through {tuple(defining)}")
    normal, offsets = res
    if normal[-1] == 0:
        raise ValueError("hyperplane parallel to the last coordinate axis")
    up = 1 if normal[-1] > 0 else -1
    above = below = 0
    skip = set(defining)
    for k, off in enumerate(offsets):
        if k in skip:
            continue
        if off == 0:
            raise ValueError(f"point {k} lies exactly on the hyperplane")
        if off * up > 0:
            above += 1
        else:
            below += 1
    return above - below


def oracle_scaled(points: Sequence[Point]) -> tuple[list[tuple[int, ...]], int]:
    from .exact import integer_scaled

    return integer_scaled(list(points))


def assemble(
    d: int,
    m: int,
    epsilon: Fraction,
    directions: DirectionSet,
    important: PointSetArtifact,
    seed: int,
    max_jitter_retries: int = 5,
) -> SpatialAssembly:
    """Embed one A or B gadget per axis and nudge everything into general
    position.  The jitter magnitude starts a safe factor below the smallest
    exact margin between any candidate hyperplane and any stray point, and is
    shrunk and retried until the exact post-checks (candidate imbalance at
    most d-1 with the parity of d, nobody on a candidate plane) all pass.
    """
    if d < 3:
        raise ValueError("assembly targets dimension >= 3")
    if directions.dimension != d:
        raise ValueError("direction set dimension mismatch")
    k = directions.pair_count
    if k < 2 or k % 2 != 0:
        raise ValueError("need an even number of direction pairs, at least 2")
    if d - 2 > k // 2:
        raise ValueError("not enough B-axes for candidate hyperplanes")

    rng = random.Random(seed)
    gadget_a = block_A(m, epsilon, important)
    gadget_b = block_B(m, epsilon)
    shrink = 1 - epsilon

    def plane_basis(center: Point, others: list[Point]) -> tuple[Point, Point]:
        cc = sum(c * c for c in center)
        grain = 1 << 12
        for _attempt in range(64):
            w = [Fraction(rng.randint(-grain, grain), grain) for _ in range(d)]
            wc = sum(a * b for a, b in zip(w, center))
            raw = tuple(a - c * wc / cc for a, c in zip(w, center))
            if all(c == 0 for c in raw):
                continue
            if any(_dependent([center, raw, other]) for other in others):
                continue  # the plane would pass through another axis
            rho = inv_sqrt_floor(sum(c * c for c in raw))
            u2 = tuple(c * rho * shrink for c in raw)
            u1 = tuple(c * shrink for c in center)
            return u1, u2
        raise ValueError("could not find a block plane avoiding the other axes")

    points: list[Point] = []
    block_meta: list[dict] = []
    half = k // 2
    for idx, center in enumerate(directions.centers):
        gadget = gadget_a if idx < half else gadget_b
        others = [c for j, c in enumerate(directions.centers) if j != idx]
        u1, u2 = plane_basis(center, others)
        start = len(points)
        for lx, ly in gadget.points:
            points.append(tuple(lx * a + ly * b for a, b in zip(u1, u2)))
        meta = {
            "kind": gadget.kind,
            "axis": idx,
            "start": start,
            "count": len(gadget.points),
        }
        if gadget.kind == "A":
            meta["pairs"] = list(gadget.claimed_pairs)
        block_meta.append(meta)

    assembly = SpatialAssembly(
        dimension=d,
        points=points,
        block_meta=block_meta,
        m=m,
        epsilon=epsilon,
        provenance={
            "construction": "spatial-blocks",
            "dimension": d,
            "m": m,
            "epsilon": str(epsilon),
            "axes": k,
            "seed": seed,
            "important": important.provenance,
        },
    )
    candidates = assembly.candidate_tuples()

    # exact margin between candidate planes and stray points bounds the jitter
    ints, den = oracle_scaled(points)
    margin = None
    for tup in candidates:
        res = _normal_and_offsets(ints, tup)
        if res is None:
            continue
        normal, offsets = res
        weight = sum(abs(nv) for nv in normal) * den
        skip = set(tup)
        for kk, off in enumerate(offsets):
            if kk in skip or off == 0:
                continue
            gap = Fraction(abs(off), weight)
            if margin is None or gap < margin:
                margin = gap
    if margin is None or margin <= 0:
        margin = Fraction(1, 2**40)
    eta = Fraction(1, 2 ** (max(1, 14 - _floor_log2(margin))))

    grain = 1 << 16
    base_points = list(points)
    for attempt in range(max_jitter_retries + 1):
        jittered = [
            tuple(c + Fraction(rng.randint(-grain, grain), grain) * eta for c in p)
            for p in base_points
        ]
        if _candidates_clean(jittered, candidates, d):
            assembly.points = jittered
            assembly.provenance["jitter"] = str(eta)
            assembly.provenance["jitter_retries"] = attempt
            return assembly
        eta = eta / 4
    raise ValueError("general-position jitter failed within the retry budget")


def _floor_log2(x: Fraction) -> int:
    if x >= 1:
        return x.numerator.bit_length() - x.denominator.bit_length()
    return -((x.denominator // x.numerator).bit_length())


def _candidates_clean(points: list[Point], candidates: list[tuple[int, ...]], d: int) -> bool:
    ints, _ = oracle_scaled(points)
    for tup in candidates:
        res = _normal_and_offsets(ints, tup)
        if res is None:
            return False
        normal, offsets = res
        if normal[-1] == 0:
            return False
        skip = set(tup)
        above = below = 0
        up = 1 if normal[-1] > 0 else -1
        for kk, off in enumerate(offsets):
            if kk in skip:
                continue
            if off == 0:
                return False
            if off * up > 0:
                above += 1
            else:
                below += 1
        diff = above - below
        if abs(diff) > d - 1 or (diff - d) % 2 != 0:
            return False
    return True


def parity_fix(assembly: SpatialAssembly) -> tuple[SpatialAssembly, VerificationReport]:
    """Turn the most common imbalance class into certified halving hyperplanes.

    Computes diff for every candidate, reflects the last coordinate if the
    majority value is positive, appends that many apex points high on the
    last axis, and re-certifies every retained candidate with the oracle.
    """
    report = VerificationReport(name=f"parity-fix(d={assembly.dimension})")
    candidates = assembly.candidate_tuples()
    d = assembly.dimension
    diffs = {}
    histogram: dict[int, int] = {}
    for tup in candidates:
        diff = diff_of_hyperplane(assembly.points, tup)
        diffs[tup] = diff
        histogram[diff] = histogram.get(diff, 0) + 1
        report.checked += 1
        if abs(diff) > d - 1:
            report.record_violation(("imbalance", tup, diff))
        if (diff - d) % 2 != 0:
            report.record_violation(("parity", tup, diff))
    report.details["diff_histogram"] = dict(sorted(histogram.items()))

    majority = min(sorted(histogram), key=lambda v: (-histogram[v], abs(v), v))
    reflected = False
    points = list(assembly.points)
    if majority > 0:
        reflected = True
        points = [(*p[:-1], -p[-1]) for p in points]
        diffs = {tup: -v for tup, v in diffs.items()}
        majority = -majority
    report.details["target_diff"] = majority
    report.details["reflected"] = reflected

    n = len(points)
    apexes: list[Point] = []
    for i in range(-majority):
        tail = Fraction(2) + Fraction(i, n)
        apexes.append(tuple([Fraction(0)] * (assembly.dimension - 1) + [tail]))
    points.extend(apexes)

    retained = [tup for tup in candidates if diffs[tup] == majority]
    for tup in retained:
        defining = [points[i] for i in tup]
        ok, sides = oracle.is_halving(defining, points)
        report.checked += 1
        if not ok:
            report.record_violation(("not-halving-after-fix", tup, sides))
    report.details["retained"] = len(retained)
    report.details["apex_points"] = len(apexes)
    report.checked += 1
    if (len(points) + assembly.dimension) % 2 != 0:
        report.record_violation(("final-parity", len(points)))

    fixed = SpatialAssembly(
        dimension=assembly.dimension,
        points=points,
        block_meta=assembly.block_meta,
        m=assembly.m,
        epsilon=assembly.epsilon,
        provenance={
            **assembly.provenance,
            "apex_points": len(apexes),
            "reflected": reflected,
            "target_diff": majority,
        },
        apex_count=len(apexes),
        reflected=reflected,
        retained_candidates=retained,
    )
    return fixed, report


def verify_assembly(assembly: SpatialAssembly) -> VerificationReport:
    """Distance envelope and general position of the final point set."""
    report = VerificationReport(name=f"assembly(d={assembly.dimension}, n={assembly.count})")
    min_sq, max_sq = squared_distance_bounds(assembly.points)
    report.checked += 1
    if max_sq > 16:
        report.record_violation(("diameter", max_sq))
    report.details["min_sq_dist"] = min_sq
    report.details["max_sq_dist"] = max_sq
    gp = oracle.general_position_check(assembly.points, assembly.dimension)
    report.merge_child(gp)
    report.details["general_position_mode"] = gp.details["mode"]
    return report
