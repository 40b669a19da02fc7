"""Plain SVG markup for surfaces, trajectories and line plots."""

from __future__ import annotations

import colorsys
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .model import TranslationSurface

SIZE = 600
PAD = 30


def palette(n: int) -> list[str]:
    out = []
    for k in range(n):
        r, g, b = colorsys.hsv_to_rgb((k * 0.618033988749895) % 1.0, 0.75, 0.85)
        out.append(f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}")
    return out


class _Frame:
    """Maps plane coordinates into the drawing box, y pointing up."""

    def __init__(self, points: Sequence[tuple[float, float]]):
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        self.x0, self.y0 = min(xs), min(ys)
        span = max(max(xs) - self.x0, max(ys) - self.y0, 1e-12)
        self.s = (SIZE - 2 * PAD) / span

    def __call__(self, p) -> str:
        x = PAD + (float(p[0]) - self.x0) * self.s
        y = SIZE - PAD - (float(p[1]) - self.y0) * self.s
        return f"{x:.3f},{y:.3f}"


def _doc(body: list[str], title: str = "") -> str:
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">'
    parts = [head, '<rect width="100%" height="100%" fill="white"/>']
    if title:
        parts.append(f'<title>{escape(title)}</title>')
    return "\n".join(parts + body + ["</svg>"]) + "\n"


def surface_svg(surface: TranslationSurface, slits=None, trajectory=None,
                title: Optional[str] = None) -> str:
    """Polygons in grey, glued edges in matching colors, cone points as dots.

    ``slits`` (a list of :class:`SlitPair`) draws both copies of each slit
    in one color instead of coloring the triangulation edges.
    ``trajectory`` overlays the straight segments of a traced orbit.
    """
    polys = [[(float(x), float(y)) for x, y in p] for p in surface.polygons]
    frame = _Frame([v for p in polys for v in p])
    body = []
    for p in polys:
        pts = " ".join(frame(v) for v in p)
        body.append(f'<polygon points="{pts}" fill="#f4f4f4" stroke="#bbbbbb" stroke-width="0.6"/>')
    if slits is None:
        colors = palette(len(surface.pairings))
        for k, pr in enumerate(surface.pairings):
            for p, e in ((pr.poly_a, pr.edge_a), (pr.poly_b, pr.edge_b)):
                a, b = surface.edge(p, e)
                body.append(f'<line class="pairing" data-pair="{k}" x1="{frame(a).split(",")[0]}" '
                            f'y1="{frame(a).split(",")[1]}" x2="{frame(b).split(",")[0]}" '
                            f'y2="{frame(b).split(",")[1]}" stroke="{colors[k]}" stroke-width="2"/>')
    else:
        colors = palette(len(slits))
        for k, s in enumerate(slits):
            for anchor in (s.anchor_a, s.anchor_b):
                a = (float(anchor[0]), float(anchor[1]))
                b = (a[0] + float(s.vector[0]), a[1] + float(s.vector[1]))
                ax, ay = frame(a).split(",")
                bx, by = frame(b).split(",")
                body.append(f'<line class="slit" data-pair="{k}" x1="{ax}" y1="{ay}" x2="{bx}" '
                            f'y2="{by}" stroke="{colors[k]}" stroke-width="3"/>')
    if trajectory is not None:
        for seg in trajectory.segments:
            d = trajectory.direction.vector
            q, t_anchor = seg.anchor, float(seg.anchor_time)
            ends = []
            for t in (float(seg.t_in), float(seg.t_out)):
                dt = t - t_anchor
                ends.append((float(q[0]) + dt * float(d[0]), float(q[1]) + dt * float(d[1])))
            (ax, ay), (bx, by) = (frame(e).split(",") for e in ends)
            body.append(f'<line class="orbit" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" '
                        f'stroke="#222222" stroke-width="0.8"/>')
    for cp in surface.cone_points:
        for p, i in cp.corners:
            x, y = frame(surface.polygons[p][i]).split(",")
            body.append(f'<circle class="cone" cx="{x}" cy="{y}" r="4" fill="black"/>')
    return _doc(body, title or surface.provenance or "")


def line_plot_svg(xs: Sequence[float], ys: Sequence[float], title: str = "",
                  logx: bool = True) -> str:
    """Polyline of ``ys`` against ``xs`` with the y range starting at zero."""
    import math

    if len(xs) != len(ys) or not xs:
        raise ValueError("need matching nonempty xs and ys")
    tx = [math.log10(x) if logx else float(x) for x in xs]
    lo, hi = min(tx), max(tx)
    top = max(max(ys), 1e-12)
    w = SIZE - 2 * PAD

    def pt(x, y):
        px = PAD + (x - lo) / (hi - lo if hi > lo else 1) * w
        py = SIZE - PAD - y / top * w
        return f"{px:.2f},{py:.2f}"

    # thin out very long series; the plot cannot show more than a few thousand points
    step = max(1, len(xs) // 4000)
    pts = " ".join(pt(tx[k], float(ys[k])) for k in range(0, len(xs), step))
    body = [
        f'<line x1="{PAD}" y1="{SIZE - PAD}" x2="{SIZE - PAD}" y2="{SIZE - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{SIZE - PAD}" stroke="black"/>',
        f'<polyline points="{pts}" fill="none" stroke="#1f5fbf" stroke-width="1.5"/>',
        f'<text x="{PAD}" y="{PAD - 8}" font-size="12">{escape(title)}  (max {top:.4g})</text>',
    ]
    return _doc(body, title)
