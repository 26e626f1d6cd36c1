"""Independent halving oracles.

Everything here certifies halving status from coordinates alone - no
genealogy, no construction metadata - so that a claim by a construction
module and its certificate can never share a bug.  Two planar algorithms are
provided (the cubic scan and the quadratic-log rotational sweep) and are
cross-checked against each other in the test suite; dimension d gets the
brute-force tuple scan.

A pair (or d-tuple) counts as halving only if the remaining points split
exactly evenly with nobody on the spanned line (hyperplane).  Construction
outputs legitimately contain collinear horizontal runs, so collinearity is
reported as a degeneracy witness instead of raised.

Set HALVING_LAB_THREADS to allow the cubic scan and the hyperplane scan to
fan out over worker processes; results are merged deterministically and are
identical to the sequential ones.
"""

from __future__ import annotations

import bisect
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact import Point, integer_scaled
from .reporting import WITNESS_CAP, VerificationReport

IntPoint = tuple[int, ...]


def oracle_workers() -> int:
    """Worker-process cap from HALVING_LAB_THREADS (default 1 = in-process)."""
    raw = os.environ.get("HALVING_LAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, min(n, os.cpu_count() or 1))


@dataclass
class OracleResult:
    halving_count: int
    halving_pairs: list[tuple[int, ...]]
    side_counts: dict[tuple[int, ...], tuple[int, int, int]]
    degeneracies: list[tuple[int, ...]] = field(default_factory=list)
    degeneracy_count: int = 0

    @property
    def has_degeneracies(self) -> bool:
        return self.degeneracy_count > 0


def _prepare(points: Sequence[Point]) -> list[IntPoint]:
    if len(set(points)) != len(points):
        raise ValueError("duplicate points in oracle input")
    ints, _ = integer_scaled(list(points))
    return ints


def _check_even(n: int, d: int) -> None:
    if (n - d) % 2 != 0:
        raise ValueError(f"halving is undefined: {n} points, {d} on the divider")


# ---------------------------------------------------------------- naive scan


def _naive_rows(ints: list[IntPoint], rows: range) -> tuple[
    list[tuple[int, int]], dict[tuple[int, int], tuple[int, int, int]], set[tuple[int, int, int]]
]:
    n = len(ints)
    half = (n - 2) // 2
    pairs: list[tuple[int, int]] = []
    sides: dict[tuple[int, int], tuple[int, int, int]] = {}
    collinear: set[tuple[int, int, int]] = set()
    for i in rows:
        xi, yi = ints[i]
        for j in range(i + 1, n):
            xj, yj = ints[j]
            dx = xj - xi
            dy = yj - yi
            left = right = on = 0
            for k in range(n):
                if k == i or k == j:
                    continue
                xk, yk = ints[k]
                s = dx * (yk - yi) - dy * (xk - xi)
                if s > 0:
                    left += 1
                elif s < 0:
                    right += 1
                else:
                    on += 1
                    if len(collinear) < 10 * WITNESS_CAP:
                        collinear.add(tuple(sorted((i, j, k))))  # type: ignore[arg-type]
            sides[(i, j)] = (left, right, on)
            if left == half and right == half:
                pairs.append((i, j))
    return pairs, sides, collinear


def count_halving_lines_naive(points: Sequence[Point], keep_side_counts: bool = False) -> OracleResult:
    """Exact count over all pairs, O(n^3); the slowest and most trustworthy."""
    n = len(points)
    _check_even(n, 2)
    ints = _prepare(points)

    workers = oracle_workers()
    if workers > 1 and n >= 64:
        # split rows into contiguous chunks; merge preserves global pair order
        chunk_bounds = [((n * w) // workers, (n * (w + 1)) // workers) for w in range(workers)]
        results = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_naive_rows, ints, range(a, b)) for a, b in chunk_bounds]
            results = [f.result() for f in futures]
        pairs: list[tuple[int, int]] = []
        sides: dict[tuple[int, int], tuple[int, int, int]] = {}
        collinear: set[tuple[int, int, int]] = set()
        for p, s, c in results:
            pairs.extend(p)
            sides.update(s)
            collinear.update(c)
    else:
        pairs, sides, collinear = _naive_rows(ints, range(n))

    witnesses = sorted(collinear)
    return OracleResult(
        halving_count=len(pairs),
        halving_pairs=pairs,
        side_counts=sides if keep_side_counts else {p: sides[p] for p in pairs},
        degeneracies=witnesses[:WITNESS_CAP],
        degeneracy_count=len(witnesses),
    )


# ----------------------------------------------------------- rotational sweep


def _ray_key(dx: int, dy: int) -> tuple[int, int, Fraction]:
    """Total order on rays: angle in [0,2pi) from the +x axis, exactly.

    Key is (half-plane, on-axis marker, -dx/dy); within either open half the
    cotangent is strictly decreasing in angle, so -dx/dy increases with it.
    """
    if dy > 0 or (dy == 0 and dx > 0):
        half = 0
    else:
        half = 1
    if dy == 0:
        return (half, 0, Fraction(0))
    return (half, 1, Fraction(-dx, dy))


def count_halving_lines_sweep(points: Sequence[Point]) -> OracleResult:
    """Angular sort around every pivot; O(n^2 log n), same verdicts as naive."""
    n = len(points)
    _check_even(n, 2)
    ints = _prepare(points)
    half = (n - 2) // 2

    pair_sides: dict[tuple[int, int], tuple[int, int, int]] = {}
    collinear: set[tuple[int, int, int]] = set()

    for i in range(n):
        xi, yi = ints[i]
        keyed: dict[tuple[int, int, Fraction], list[int]] = {}
        for j in range(n):
            if j == i:
                continue
            key = _ray_key(ints[j][0] - xi, ints[j][1] - yi)
            keyed.setdefault(key, []).append(j)

        order = sorted(keyed)
        pos = {key: r for r, key in enumerate(order)}
        sizes = [len(keyed[key]) for key in order]
        prefix = [0]
        for s in sizes:
            prefix.append(prefix[-1] + s)
        total = prefix[-1]

        for r, key in enumerate(order):
            members = keyed[key]
            same = len(members)
            if same >= 2 and len(collinear) < 10 * WITNESS_CAP:
                for a, b in combinations(members, 2):
                    collinear.add(tuple(sorted((i, a, b))))  # type: ignore[arg-type]
            opp_key = (1 - key[0], key[1], key[2])
            if opp_key in pos:
                r_opp = pos[opp_key]
                opp = sizes[r_opp]
                if len(collinear) < 10 * WITNESS_CAP:
                    for a in members:
                        for b in keyed[opp_key]:
                            collinear.add(tuple(sorted((i, a, b))))  # type: ignore[arg-type]
            else:
                r_opp = bisect.bisect_left(order, opp_key)
                opp = 0
            # points strictly ccw-between the ray and its opposite are left of i->j
            if r < r_opp:
                left = prefix[r_opp] - prefix[r + 1]
            else:
                left = (total - prefix[r + 1]) + prefix[r_opp]
            on = same - 1 + opp
            right = (n - 2) - left - on
            for j in members:
                # normalise to the low->high direction so the two pivots of a
                # pair must produce identical counts (cheap self-check)
                pair = (i, j) if i < j else (j, i)
                seen = (left, right, on) if i < j else (right, left, on)
                prev = pair_sides.get(pair)
                if prev is None:
                    pair_sides[pair] = seen
                elif prev != seen:
                    raise AssertionError(f"sweep self-check failed for pair {pair}: {prev} vs {seen}")

    pairs = sorted(p for p, (l, r, on) in pair_sides.items() if l == half and r == half)
    witnesses = sorted(collinear)
    return OracleResult(
        halving_count=len(pairs),
        halving_pairs=pairs,
        side_counts={p: pair_sides[p] for p in pairs},
        degeneracies=witnesses[:WITNESS_CAP],
        degeneracy_count=len(witnesses),
    )


# ----------------------------------------------------------- hyperplane scan


def _int_det(rows: list[list[int]]) -> int:
    """Exact determinant by cofactor expansion (meant for d <= 6)."""
    m = len(rows)
    if m == 1:
        return rows[0][0]
    if m == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if m == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    det = 0
    sign = 1
    for col in range(m):
        if rows[0][col]:
            minor = [[row[c] for c in range(m) if c != col] for row in rows[1:]]
            det += sign * rows[0][col] * _int_det(minor)
        sign = -sign
    return det


def _normal_of(ints: Sequence[IntPoint], tup: Sequence[int]) -> tuple[int, ...]:
    """Generalized cross product of the d-1 edge vectors; zero iff degenerate."""
    d = len(ints[0])
    base = ints[tup[0]]
    edges = [[ints[t][c] - base[c] for c in range(d)] for t in tup[1:]]
    normal = []
    sign = 1
    for c in range(d):
        minor = [[row[cc] for cc in range(d) if cc != c] for row in edges]
        normal.append(sign * _int_det(minor))
        sign = -sign
    return tuple(normal)


def _sides_of_tuple(
    ints: Sequence[IntPoint], tup: tuple[int, ...]
) -> tuple[int, int, int, tuple[int, ...]] | None:
    normal = _normal_of(ints, tup)
    if not any(normal):
        return None
    base = ints[tup[0]]
    skip = set(tup)
    left = right = on = 0
    for k, p in enumerate(ints):
        if k in skip:
            continue
        s = sum(nv * (pc - bc) for nv, pc, bc in zip(normal, p, base))
        if s > 0:
            left += 1
        elif s < 0:
            right += 1
        else:
            on += 1
    return left, right, on, normal


def _hyperplane_chunk(ints: list[IntPoint], tuples: list[tuple[int, ...]]) -> tuple[
    list[tuple[int, ...]], dict[tuple[int, ...], tuple[int, int, int]], list[tuple[int, ...]], int
]:
    n = len(ints)
    d = len(ints[0])
    half = (n - d) // 2
    pairs = []
    sides = {}
    degens = []
    degen_count = 0
    for tup in tuples:
        res = _sides_of_tuple(ints, tup)
        if res is None:
            degen_count += 1
            if len(degens) < WITNESS_CAP:
                degens.append(tup)
            continue
        left, right, on, _ = res
        if on:
            degen_count += 1
            if len(degens) < WITNESS_CAP:
                degens.append(tup)
        if left == half and right == half:
            pairs.append(tup)
            sides[tup] = (left, right, on)
    return pairs, sides, degens, degen_count


def count_halving_hyperplanes(points: Sequence[Point], d: int | None = None) -> OracleResult:
    """Exact count over all C(n, d) tuples, O(n^(d+1))."""
    if not points:
        raise ValueError("empty point set")
    dim = d if d is not None else len(points[0])
    if any(len(p) != dim for p in points):
        raise ValueError("point dimension disagrees with requested d")
    n = len(points)
    _check_even(n, dim)
    ints = _prepare(points)

    tuples = list(combinations(range(n), dim))
    workers = oracle_workers()
    if workers > 1 and len(tuples) >= 4096:
        chunks = [tuples[w::workers] for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = [f.result() for f in [pool.submit(_hyperplane_chunk, ints, ch) for ch in chunks]]
        pairs = sorted(p for part in parts for p in part[0])
        sides = {}
        degens: list[tuple[int, ...]] = []
        degen_count = 0
        for part in parts:
            sides.update(part[1])
            degen_count += part[3]
            for w in part[2]:
                if len(degens) < WITNESS_CAP:
                    degens.append(w)
    else:
        pairs, sides, degens, degen_count = _hyperplane_chunk(ints, tuples)
        pairs = sorted(pairs)

    return OracleResult(
        halving_count=len(pairs),
        halving_pairs=pairs,
        side_counts=sides,
        degeneracies=degens,
        degeneracy_count=degen_count,
    )


def is_halving(defining_points: Sequence[Point], all_points: Sequence[Point]) -> tuple[bool, tuple[int, int, int]]:
    """Exact verdict for one candidate divider given by its defining points.

    The defining points must occur in `all_points`; the verdict is computed on
    the remaining ones.  n == d is vacuously halving.
    """
    d = len(defining_points)
    if not defining_points or any(len(p) != len(defining_points[0]) for p in defining_points):
        raise ValueError("defining points must share a dimension")
    if len(defining_points[0]) != d:
        raise ValueError(f"{d} defining points require dimension {d}")
    index_of = {}
    for k, p in enumerate(all_points):
        index_of.setdefault(p, k)
    try:
        tup = tuple(index_of[p] for p in defining_points)
    except KeyError as missing:
        raise ValueError(f"defining point {missing} not in the point set") from None
    if len(set(tup)) != d:
        raise ValueError("defining points are not distinct")

    ints = _prepare(all_points)
    res = _sides_of_tuple(ints, tup)
    if res is None:
        raise ValueError(f"degenerate divider: points {tup} are affinely dependent")
    left, right, on, _ = res
    n = len(all_points)
    half = (n - d) // 2 if (n - d) % 2 == 0 else None
    return (half is not None and left == half and right == half and on == 0), (left, right, on)


# ------------------------------------------------------- general position


def general_position_check(
    points: Sequence[Point],
    d: int | None = None,
    exhaustive_threshold: int | None = None,
    seed: int = 0,
    samples: int = 5000,
) -> VerificationReport:
    """No d+1 points on a common hyperplane (no 3 collinear in the plane).

    Exhaustive below the threshold (60 points in 2D, 30 above), seeded random
    (d+1)-subsets beyond it; the report says which mode ran.
    """
    dim = d if d is not None else len(points[0])
    n = len(points)
    report = VerificationReport(name=f"general-position-{dim}d")
    ints = _prepare(points)
    if exhaustive_threshold is None:
        exhaustive_threshold = 60 if dim == 2 else 30

    def dependent(tup: tuple[int, ...]) -> bool:
        base = ints[tup[0]]
        rows = [[ints[t][c] - base[c] for c in range(dim)] for t in tup[1:]]
        return _int_det(rows) == 0

    if n <= exhaustive_threshold:
        report.details["mode"] = "exhaustive"
        for tup in combinations(range(n), dim + 1):
            report.checked += 1
            if dependent(tup):
                report.record_violation(tup)
    else:
        import random

        rng = random.Random(seed)
        report.details["mode"] = f"sampled({samples}, seed={seed})"
        for _ in range(samples):
            tup = tuple(sorted(rng.sample(range(n), dim + 1)))
            report.checked += 1
            if dependent(tup):
                report.record_violation(tup)
    return report
