"""Deterministic SVG rendering of point-set artifacts.

The emitter is a pure reader: same artifact in, identical bytes out, every
time.  Points render as circles (bold filled, everything else hollow), the
claimed halving family as lines.  Coordinates are converted to decimal only
at the formatting boundary, at 30 significant digits.
"""

from __future__ import annotations

import decimal
from fractions import Fraction

from .artifact import PointSetArtifact
from .exact import Point, Point2

SIZE = 1000
MARGIN = 40
POINT_RADIUS = 4

# fixed oblique projection for 3D input: (x, y, z) -> (x + 7z/20, y + 9z/25)
PROJECTION_3D = (Fraction(7, 20), Fraction(9, 25))


def _dec30(value: Fraction) -> str:
    ctx = decimal.Context(prec=30)
    d = ctx.divide(decimal.Decimal(value.numerator), decimal.Decimal(value.denominator))
    out = format(d, "f")
    if "." in out:
        out = out.rstrip("0").rstrip(".")
    return out if out else "0"


def _project(p: Point) -> Point2:
    if len(p) == 2:
        return (p[0], p[1])
    if len(p) == 3:
        ax, ay = PROJECTION_3D
        return (p[0] + ax * p[2], p[1] + ay * p[2])
    raise ValueError(f"cannot render dimension {len(p)}")


def emit_svg(artifact: PointSetArtifact) -> bytes:
    if artifact.dimension > 3:
        raise ValueError("SVG rendering supports dimensions 2 and 3 only")
    flat = [_project(p) for p in artifact.points]
    xs = [p[0] for p in flat]
    ys = [p[1] for p in flat]
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y)
    if span == 0:
        span = Fraction(1)
    scale = Fraction(SIZE - 2 * MARGIN) / span

    def place(p: Point2) -> tuple[str, str]:
        x = MARGIN + (p[0] - lo_x) * scale
        y = MARGIN + (hi_y - p[1]) * scale  # svg y grows downward
        return _dec30(x), _dec30(y)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    for tup in artifact.claimed_halving:
        if len(tup) != 2:
            continue  # only pairs have a canonical line rendering
        (x1, y1), (x2, y2) = place(flat[tup[0]]), place(flat[tup[1]])
        lines.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
            f'stroke="#888888" stroke-width="1"/>'
        )
    roles = artifact.roles or ["plain"] * artifact.count
    for p, role in zip(flat, roles):
        cx, cy = place(p)
        if role == "bold":
            style = 'fill="black"'
        else:
            style = 'fill="none" stroke="black" stroke-width="1.5"'
        lines.append(f'<circle cx="{cx}" cy="{cy}" r="{POINT_RADIUS}" {style}/>')
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")
