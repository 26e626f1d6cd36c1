"""Matplotlib figures for the report path (presentation only; lossy floats)."""

from __future__ import annotations

from pathlib import Path

from .artifact import PointSetArtifact
from .svgplot import _project


def render_point_figure(artifact: PointSetArtifact, path: str | Path, title: str | None = None) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    flat = [_project(p) for p in artifact.points]
    xs = [float(p[0]) for p in flat]
    ys = [float(p[1]) for p in flat]
    roles = artifact.roles or ["plain"] * artifact.count

    fig, ax = plt.subplots(figsize=(7, 7))
    for i, j, *_rest in artifact.claimed_halving:
        ax.plot([xs[i], xs[j]], [ys[i], ys[j]], color="0.75", linewidth=0.7, zorder=1)
    hollow = [k for k, r in enumerate(roles) if r != "bold"]
    filled = [k for k, r in enumerate(roles) if r == "bold"]
    ax.scatter([xs[k] for k in hollow], [ys[k] for k in hollow],
               facecolors="none", edgecolors="k", s=26, zorder=2)
    if filled:
        ax.scatter([xs[k] for k in filled], [ys[k] for k in filled],
                   color="k", s=26, zorder=3)
    ax.set_aspect("equal", adjustable="datalim")
    if title is None:
        title = str(artifact.provenance.get("construction", "point set"))
    ax.set_title(f"{title} (n={artifact.count})")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
