"""Point-set documents: exact JSON and CSV serialization.

Coordinates travel as pairs of base-10 integer strings (numerator,
denominator), so every rational survives a round trip bit-exactly; floats
appear only in the explicitly opt-in "approx" CSV columns, which are labelled
lossy.  Parsing followed by emission reproduces the byte stream.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .artifact import PointSetArtifact

SCHEMA_VERSION = 1


def json_safe(value: Any) -> Any:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    return value


def to_document(artifact: PointSetArtifact) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "dimension": artifact.dimension,
        "count": artifact.count,
        "coordinates": [
            [[str(c.numerator), str(c.denominator)] for c in p] for p in artifact.points
        ],
        "provenance": json_safe(artifact.provenance),
    }
    if artifact.claimed_halving:
        doc["claimed_halving"] = [list(t) for t in artifact.claimed_halving]
    if artifact.roles is not None:
        doc["roles"] = list(artifact.roles)
    return doc


def document_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def parse_document(source: str | dict) -> PointSetArtifact:
    doc = json.loads(source) if isinstance(source, str) else source
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    dimension = int(doc["dimension"])
    coords = doc["coordinates"]
    if int(doc["count"]) != len(coords):
        raise ValueError("count field disagrees with the coordinate list")
    points = []
    for row in coords:
        if len(row) != dimension:
            raise ValueError("coordinate arity disagrees with dimension")
        point = []
        for num_s, den_s in row:
            num, den = int(num_s), int(den_s)
            if den <= 0:
                raise ValueError(f"non-positive denominator {den_s!r}")
            point.append(Fraction(num, den))
        points.append(tuple(point))
    claimed = [tuple(int(i) for i in t) for t in doc.get("claimed_halving", [])]
    roles = doc.get("roles")
    return PointSetArtifact(
        dimension=dimension,
        points=points,
        provenance=doc.get("provenance", {}),
        claimed_halving=claimed,
        roles=list(roles) if roles is not None else None,
    )


def emit_json(artifact: PointSetArtifact) -> str:
    return document_json(to_document(artifact))


# ------------------------------------------------------------------ CSV side

_AXES = "xyzw"


def _axis_name(i: int) -> str:
    return _AXES[i] if i < len(_AXES) else f"c{i}"


def emit_csv(artifact: PointSetArtifact, include_decimal: bool = False) -> str:
    """Exact CSV (idx,x_num,x_den,...); optional lossy decimal columns."""
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["idx"]
    for i in range(artifact.dimension):
        header += [f"{_axis_name(i)}_num", f"{_axis_name(i)}_den"]
    if include_decimal:
        header += [f"{_axis_name(i)}_approx_lossy" for i in range(artifact.dimension)]
    writer.writerow(header)
    for idx, p in enumerate(artifact.points):
        row: list[str] = [str(idx)]
        for c in p:
            row += [str(c.numerator), str(c.denominator)]
        if include_decimal:
            row += [repr(float(c)) for c in p]
        writer.writerow(row)
    return buf.getvalue()


def parse_csv(text: str) -> list[tuple[Fraction, ...]]:
    """Points back from the exact columns (approx columns are ignored)."""
    import csv
    import io

    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty CSV")
    header = rows[0]
    exact_cols = [i for i, name in enumerate(header) if name.endswith(("_num", "_den"))]
    if not exact_cols or len(exact_cols) % 2 != 0:
        raise ValueError("malformed CSV header")
    points = []
    for row in rows[1:]:
        if not row:
            continue
        coords = []
        for k in range(0, len(exact_cols), 2):
            num = int(row[exact_cols[k]])
            den = int(row[exact_cols[k + 1]])
            if den <= 0:
                raise ValueError("non-positive denominator in CSV")
            coords.append(Fraction(num, den))
        points.append(tuple(coords))
    return points
