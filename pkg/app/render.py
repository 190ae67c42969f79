"""
SVG and PNG pictures of an embedding.

The picture uses the unstretched y axis. An edge between (x0, y0) and
(x1, y1) is the straight segment between their stretched images, so it is
drawn as the curve x -> log_base of the linearly interpolated stretched Y,
which bows toward the higher endpoint exactly as the true segment does.
"""

from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import matplotlib as mpl
from matplotlib.figure import Figure

from .embedding import Embedding
from .sparsegrid import count_points, iter_points
from .tritree import TriTree
from .versioning import VERSION

logger = logging.getLogger("p3t.render")

MAX_PIXELS = 4000
DPI = 100


@dataclass(frozen=True)
class RenderOptions:
    scale: float = 8.0
    arc_samples: int = 32
    show_grid: bool = False
    stretched_y: bool = False
    grid_limit: int = 20000

    def __post_init__(self):
        if self.arc_samples < 2:
            raise ValueError(f"arc_samples must be at least 2, got {self.arc_samples}")
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    @classmethod
    def from_config(cls, config: Mapping[str, Any], **overrides) -> "RenderOptions":
        values = {
            "scale": float(config.get("render_scale", cls.scale)),
            "arc_samples": int(config.get("render_arc_samples", cls.arc_samples)),
            "show_grid": bool(config.get("render_show_grid", cls.show_grid)),
            "grid_limit": int(config.get("render_grid_limit", cls.grid_limit)),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def _log_interp(y0: int, y1: int, t: float, log_base: float) -> float:
    """log_base((1 - t) base^y0 + t base^y1) without forming the powers."""
    if y0 == y1:
        return float(y0)
    lo, hi, w_hi = (y0, y1, t) if y0 < y1 else (y1, y0, 1.0 - t)
    if w_hi <= 0.0:
        return float(lo)
    tail = (1.0 - w_hi) * math.exp((lo - hi) * log_base)
    return hi + math.log(w_hi + tail) / log_base


def arc_points(
    p: tuple[int, int], q: tuple[int, int], base: int, samples: int
) -> list[tuple[float, float]]:
    """Samples of the preimage of the stretched segment pq."""
    (x0, y0), (x1, y1) = p, q
    log_base = math.log(base)
    out = []
    for i in range(samples):
        t = i / (samples - 1)
        out.append((x0 + t * (x1 - x0), _log_interp(y0, y1, t, log_base)))
    return out


def _stretched_view(y: int, y_max: int, base: int, side: int) -> float:
    # Stretched Y normalized to the tallest vertex; lower rows collapse to 0
    return side * math.exp((y - y_max) * math.log(base))


def render_figure(tree: TriTree, emb: Embedding, options: RenderOptions) -> Figure:
    params = emb.params
    side = params.side
    base = params.stretch_base
    pixels = min(side * options.scale, MAX_PIXELS)
    inches = pixels / DPI

    fig = Figure(figsize=(inches, inches), dpi=DPI)
    ax = fig.add_axes((0, 0, 1, 1))
    ax.set_axis_off()
    pad = side * 0.02
    ax.set_xlim(-pad, side + pad)
    ax.set_ylim(-pad, side + pad)

    positions = {v: (int(p[0]), int(p[1])) for v, p in emb.positions.items()}
    y_max = max(y for _, y in positions.values())

    def view_y(y: int) -> float:
        return _stretched_view(y, y_max, base, side) if options.stretched_y else y

    if options.show_grid:
        total = count_points(params)
        if total <= options.grid_limit:
            grid = list(iter_points(params))
            ax.scatter(
                [p.x for p in grid],
                [view_y(p.y) for p in grid],
                s=0.5,
                c="0.8",
                linewidths=0,
                gid="grid",
            )
        else:
            logger.warning(
                "grid has %d points (limit %d); not drawn", total, options.grid_limit
            )

    for u, v in tree.edges():
        if options.stretched_y:
            xs = [positions[u][0], positions[v][0]]
            ys = [view_y(positions[u][1]), view_y(positions[v][1])]
        else:
            samples = arc_points(positions[u], positions[v], base, options.arc_samples)
            xs = [x for x, _ in samples]
            ys = [y for _, y in samples]
        (line,) = ax.plot(xs, ys, color="0.25", linewidth=0.8)
        line.set_gid(f"edge-{u}-{v}")

    for v, (x, y) in sorted(positions.items()):
        (mark,) = ax.plot([x], [view_y(y)], marker="o", markersize=3, color="tab:red")
        mark.set_gid(f"vertex-{v}")

    return fig


def _save(fig: Figure, target, fmt: str) -> None:
    with mpl.rc_context({"svg.hashsalt": "p3t", "svg.fonttype": "none"}):
        fig.savefig(
            target,
            format=fmt,
            metadata={"Creator": f"p3t {VERSION}"}
            | ({"Date": None} if fmt == "svg" else {}),
        )


def render_svg(
    tree: TriTree, emb: Embedding, options: RenderOptions | None = None
) -> str:
    fig = render_figure(tree, emb, options or RenderOptions())
    buffer = io.BytesIO()
    _save(fig, buffer, "svg")
    return buffer.getvalue().decode("utf-8")


def write_svg(
    tree: TriTree,
    emb: Embedding,
    path: Path | str,
    options: RenderOptions | None = None,
) -> None:
    Path(path).write_text(render_svg(tree, emb, options), encoding="utf-8")


def write_png(
    tree: TriTree,
    emb: Embedding,
    path: Path | str,
    options: RenderOptions | None = None,
) -> None:
    fig = render_figure(tree, emb, options or RenderOptions())
    _save(fig, str(path), "png")
