"""Phase portraits of the joint dynamics, rendered to SVG bytes.

Rendering goes through a standalone Figure (no pyplot state) with a pinned
hash salt and no date metadata, so identical inputs produce byte-identical
SVG documents.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import matplotlib
from matplotlib import rc_context
from matplotlib.figure import Figure

from .analysis import steady_state
from .fields import DynamicKind, br_geometry
from .game import ModelParams
from .solver import Trajectory

_HASH_SALT = "coordcycle"

_RC = {
    "svg.hashsalt": _HASH_SALT,
    "svg.fonttype": "path",
    "font.family": "DejaVu Sans",
    "figure.dpi": 100,
}

_DEFAULT_COLORS = ("#c1272d", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e")


@dataclass(frozen=True)
class PortraitStyle:
    title: str = ""
    colors: tuple[str, ...] = _DEFAULT_COLORS
    labels: tuple[str, ...] = ()
    figsize: tuple[float, float] = (6.0, 6.0)
    line_width: float = 1.1


def render_phase_portrait(trajectories: Sequence[Trajectory], p: ModelParams,
                          style: PortraitStyle | None = None,
                          fmt: str = "svg") -> bytes:
    """Draw trajectories over the diagonal and the x = k nullcline.

    Marks the steady state, and for best-response runs the two ends of the
    sliding set on the diagonal.  The x axis is the unit interval; the y axis
    ranges over the data.
    """
    if not trajectories:
        raise ValueError("need at least one trajectory to render")
    style = style or PortraitStyle()
    kind = trajectories[0].kind

    y_lo = min(float(min(tr.y.min(), tr.x.min())) for tr in trajectories)
    y_hi = max(float(max(tr.y.max(), tr.x.max())) for tr in trajectories)
    pad = 0.05 * max(y_hi - y_lo, 1e-3)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    with rc_context(_RC):
        fig = Figure(figsize=style.figsize)
        ax = fig.subplots()
        ax.plot([0.0, 1.0], [0.0, 1.0], color="0.35", lw=0.8, zorder=1)
        ax.axvline(p.k, color="0.55", lw=0.8, ls="--", zorder=1)
        for i, traj in enumerate(trajectories):
            color = style.colors[i % len(style.colors)]
            label = style.labels[i] if i < len(style.labels) else None
            ax.plot(traj.x, traj.y, color=color, lw=style.line_width,
                    label=label, zorder=2)
        rest = steady_state(kind, p)
        ax.plot([rest.x], [rest.y], marker="o", ms=5, color="black", zorder=3)
        if kind is DynamicKind.BEST_RESPONSE and p.r > 0.0:
            geo = br_geometry(p)
            ax.plot([geo.alpha, geo.beta], [geo.alpha, geo.beta], marker="D",
                    ms=4, color="0.2", ls="none", zorder=3)
        ax.set_xlim(0.0, 1.0)
        ax.set_ylim(y_lo, y_hi)
        ax.set_xlabel("population share x")
        ax.set_ylabel("indifference state y")
        if style.title:
            ax.set_title(style.title)
        if style.labels:
            ax.legend(loc="best", fontsize=8)
        buf = io.BytesIO()
        fig.savefig(buf, format=fmt, metadata={"Date": None} if fmt == "svg" else None)
    return buf.getvalue()


def write_phase_portrait(trajectories: Sequence[Trajectory], p: ModelParams,
                         path: Path, style: PortraitStyle | None = None) -> None:
    path = Path(path)
    fmt = path.suffix.lstrip(".") or "svg"
    path.write_bytes(render_phase_portrait(trajectories, p, style, fmt=fmt))
