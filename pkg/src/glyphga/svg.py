"""Debug rendering of glyphs as standalone SVG documents."""
from __future__ import annotations

import math

from .geometry import LINE, Glyph, squared_distance


def _f(v: float) -> str:
    return f"{v:.3f}"


def glyph_svg(g: Glyph, canvas: tuple[int, int] = (100, 100), beta: float = 10.0, scale: float = 4.0) -> str:
    """Lines as segments, open curves as the quadratic through max_point, near-closed
    curves as the circle whose diameter runs from the start to max_point."""
    w, h = canvas
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(w * scale)}" height="{_f(h * scale)}" '
        f'viewBox="-2 -2 {w + 3} {h + 3}">',
        f'<rect x="-2" y="-2" width="{w + 3}" height="{h + 3}" fill="white"/>',
        '<g fill="none" stroke-width="0.8" stroke-linecap="round">',
    ]
    for e in g.edges:
        s, t, m = e.start, e.end, e.max_point
        if e.kind is LINE:
            out.append(f'<line x1="{_f(s.x)}" y1="{_f(s.y)}" x2="{_f(t.x)}" y2="{_f(t.y)}" stroke="black"/>')
        elif squared_distance(s, t) < beta * beta:
            r = math.sqrt(squared_distance(s, m)) / 2.0
            out.append(f'<path d="M {_f(s.x)} {_f(s.y)} A {_f(r)} {_f(r)} 0 1 1 {_f(m.x)} {_f(m.y)} '
                       f'A {_f(r)} {_f(r)} 0 1 1 {_f(s.x)} {_f(s.y)}" stroke="steelblue"/>')
        else:
            # quadratic control point that makes the curve pass through m at t = 1/2
            cx, cy = 2 * m.x - (s.x + t.x) / 2, 2 * m.y - (s.y + t.y) / 2
            out.append(f'<path d="M {_f(s.x)} {_f(s.y)} Q {_f(cx)} {_f(cy)} {_f(t.x)} {_f(t.y)}" stroke="steelblue"/>')
    out.append("</g>")
    for v in g.vertices:
        out.append(f'<circle cx="{_f(v.x)}" cy="{_f(v.y)}" r="1.2" fill="crimson"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
