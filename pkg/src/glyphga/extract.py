"""Skeleton tracing: thin normalized raster -> character graph.

Vertices are stroke endpoints and junctions; each pixel chain between two
vertices becomes one edge, classified as a line or a curve by the spread of
angles seen from a probe point ``gamma`` units along the chain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyImage
from .geometry import CURVE, EPS, LINE, Edge, EdgeKind, Glyph, Params, Point, angle_at, squared_distance
from .raster import BinaryRaster, neighbour_counts

CORNER_ANGLE_MAX = 120.0

_OFFSETS = ((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))  # (dx, dy), y-major order


@dataclass(frozen=True)
class PixelChain:
    pixels: tuple[Point, ...]
    from_vertex: Point
    to_vertex: Point

    @property
    def closed(self) -> bool:
        return len(self.pixels) > 2 and self.pixels[0] == self.pixels[-1]

    def reversed(self) -> "PixelChain":
        return PixelChain(self.pixels[::-1], self.to_vertex, self.from_vertex)


def _pixel_key(p: Sequence[float]) -> tuple[float, float]:
    return (p[1], p[0])


def _ink_set(r: BinaryRaster) -> set[tuple[int, int]]:
    ys, xs = np.nonzero(r.bits)
    return set(zip(xs.tolist(), ys.tolist()))


def _neighbours(p: tuple[int, int], ink: set[tuple[int, int]]) -> list[tuple[int, int]]:
    x, y = p
    return [(x + dx, y + dy) for dx, dy in _OFFSETS if (x + dx, y + dy) in ink]


def _components(pixels: Iterable[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    remaining = set(pixels)
    comps = []
    for seed in sorted(remaining, key=_pixel_key):
        if seed not in remaining:
            continue
        remaining.discard(seed)
        comp, stack = [seed], [seed]
        while stack:
            for q in _neighbours(stack.pop(), remaining):
                remaining.discard(q)
                comp.append(q)
                stack.append(q)
        comps.append(sorted(comp, key=_pixel_key))
    return comps


def find_nodes(r: BinaryRaster) -> set[Point]:
    """Endpoints (1 neighbour) and junction pixels (>= 3); one designated pixel per node-free loop."""
    counts = neighbour_counts(r.bits)
    ink = r.bits
    nodes = {(int(x), int(y)) for y, x in zip(*np.nonzero(ink & ((counts == 1) | (counts >= 3))))}
    for comp in _components(_ink_set(r)):
        if len(comp) > 2 and not any(p in nodes for p in comp):
            nodes.add(comp[0])
    return {Point(float(x), float(y)) for x, y in nodes}


def trace_chains(r: BinaryRaster, nodes: Iterable[Sequence[float]]) -> list[PixelChain]:
    """Walk every stroke between nodes. Deterministic: nodes and neighbours in (y, x) order."""
    ink = _ink_set(r)
    node_px = {(int(round(p[0])), int(round(p[1]))) for p in nodes}
    used_steps: set[frozenset] = set()
    visited: set[tuple[int, int]] = set()
    chains: list[PixelChain] = []

    for n in sorted(node_px, key=_pixel_key):
        for q in _neighbours(n, ink):
            step = frozenset((n, q))
            if step in used_steps or q in visited:
                continue
            used_steps.add(step)
            path = [n, q]
            prev, cur = n, q
            while cur not in node_px:
                visited.add(cur)
                nxt = [c for c in _neighbours(cur, ink) if c != prev and c not in visited
                       and frozenset((cur, c)) not in used_steps]
                if not nxt:
                    break
                # prefer 4-neighbours so diagonal shortcuts past a corner are not taken
                nxt.sort(key=lambda c: (abs(c[0] - cur[0]) + abs(c[1] - cur[1]), c[1], c[0]))
                prev, cur = cur, nxt[0]
                used_steps.add(frozenset((prev, cur)))
                path.append(cur)
            if len(path) < 2:
                continue
            pts = tuple(Point(float(x), float(y)) for x, y in path)
            chains.append(PixelChain(pts, pts[0], pts[-1]))
    return chains


def _arc_lengths(pts: Sequence[Point]) -> np.ndarray:
    a = np.asarray(pts, dtype=np.float64)
    if len(a) < 2:
        return np.zeros(len(a))
    return np.concatenate(([0.0], np.cumsum(np.hypot(*np.diff(a, axis=0).T))))


def _smoothed(pts: Sequence[Point], half: int = 2) -> list[Point]:
    """Moving average over +-``half`` pixels (window shrinks at the ends; end pixels fixed)."""
    a = np.asarray(pts, dtype=np.float64)
    n = len(a)
    if n < 3:
        return list(pts)
    c = np.vstack([np.zeros((1, 2)), np.cumsum(a, axis=0)])
    idx = np.arange(n)
    k = np.minimum(np.minimum(idx, n - 1 - idx), half)
    out = (c[idx + k + 1] - c[idx - k]) / (2 * k + 1)[:, None]
    return [Point(float(x), float(y)) for x, y in out]


def classify_chain(c: PixelChain, p: Params) -> EdgeKind:
    # lattice staircases would otherwise read as bends at the probe scale
    pts = _smoothed(c.pixels)
    arc = _arc_lengths(pts)
    if len(pts) < 2 or arc[-1] < 2 * p.gamma:
        return LINE
    probe = pts[int(np.searchsorted(arc, p.gamma))]
    start = pts[0]
    lo, hi = math.inf, -math.inf
    for k in range(int(np.searchsorted(arc, 2 * p.gamma)), len(pts)):
        a = angle_at(probe, start, pts[k])
        lo, hi = min(lo, a), max(hi, a)
    return LINE if hi - lo <= p.line_angle_spread_max else CURVE


def max_distance_point(c: PixelChain) -> Point:
    start = c.pixels[0]
    best, best_d = c.pixels[0], -1.0
    for q in c.pixels:
        d = squared_distance(start, q)
        if d > best_d:
            best, best_d = q, d
    return best


def _sharpest_corner(c: PixelChain, gamma: float) -> tuple[int, float]:
    pts = c.pixels
    arc = _arc_lengths(pts)
    best_i, best_a = -1, 180.0
    for i in range(1, len(pts) - 1):
        ia = int(np.searchsorted(arc, arc[i] - gamma, side="right")) - 1
        ib = int(np.searchsorted(arc, arc[i] + gamma))
        if ia < 0 or ib >= len(pts) or arc[i] - arc[ia] < gamma - EPS:
            continue
        a = angle_at(pts[i], pts[ia], pts[ib])
        if a < best_a:
            best_i, best_a = i, a
    return best_i, best_a


def split_corners(c: PixelChain, p: Params) -> list[PixelChain]:
    """Split a curve-classified chain at its sharpest interior corner, recursively."""
    if len(c.pixels) < 3 or classify_chain(c, p) is LINE:
        return [c]
    i, a = _sharpest_corner(c, 2 * p.gamma)
    if i < 0 or a >= CORNER_ANGLE_MAX:
        return [c]
    corner = c.pixels[i]
    head = PixelChain(c.pixels[: i + 1], c.from_vertex, corner)
    tail = PixelChain(c.pixels[i:], corner, c.to_vertex)
    return split_corners(head, p) + split_corners(tail, p)


def _merge_close(points: list[Point], weights: list[int], radius: float) -> list[int]:
    """Greedy agglomeration: merge the closest pair under ``radius`` until none remain.

    Returns, for each input point, the index of its surviving cluster in ``points``
    (which is rewritten in place with weighted centroids).
    """
    owner = list(range(len(points)))
    alive = set(owner)
    r2 = radius * radius
    while True:
        best = None
        for i in sorted(alive):
            for j in sorted(alive):
                if j <= i:
                    continue
                d = squared_distance(points[i], points[j])
                if d < r2 - EPS and (best is None or d < best[0]):
                    best = (d, i, j)
        if best is None:
            break
        _, i, j = best
        wi, wj = weights[i], weights[j]
        points[i] = Point((points[i].x * wi + points[j].x * wj) / (wi + wj),
                          (points[i].y * wi + points[j].y * wj) / (wi + wj))
        weights[i] = wi + wj
        alive.discard(j)
        owner = [i if o == j else o for o in owner]
    return owner


def extract_graph(r: BinaryRaster, p: Params) -> Glyph:
    """Thin, normalized raster -> Glyph (vertices sorted by (y, x), edges in trace order)."""
    if not r.bits.any():
        raise EmptyImage("raster has no ink")
    nodes = find_nodes(r)
    chains: list[PixelChain] = []
    for c in trace_chains(r, nodes):
        chains.extend(split_corners(c, p))

    # node clusters: adjacent node pixels collapse to one centroid
    node_px = {(int(n.x), int(n.y)) for n in nodes}
    corner_px = {(int(c.from_vertex.x), int(c.from_vertex.y)) for c in chains} | \
                {(int(c.to_vertex.x), int(c.to_vertex.y)) for c in chains}
    seeds: list[Point] = []
    weights: list[int] = []
    px_to_seed: dict[tuple[int, int], int] = {}
    for comp in _components(node_px):
        k = len(seeds)
        seeds.append(Point(sum(x for x, _ in comp) / len(comp), sum(y for _, y in comp) / len(comp)))
        weights.append(len(comp))
        for q in comp:
            px_to_seed[q] = k
    for q in sorted(corner_px - node_px, key=_pixel_key):
        px_to_seed[q] = len(seeds)
        seeds.append(Point(float(q[0]), float(q[1])))
        weights.append(1)

    owner = _merge_close(seeds, weights, p.beta)

    def vertex_of(pt: Point) -> int:
        return owner[px_to_seed[(int(pt.x), int(pt.y))]]

    edges: list[tuple[int, int, EdgeKind, Point]] = []
    seen: set[tuple[int, int, EdgeKind]] = set()
    for c in chains:
        i, j = vertex_of(c.from_vertex), vertex_of(c.to_vertex)
        kind = classify_chain(c, p)
        mp = max_distance_point(c)
        if i == j:
            # only genuine loops survive vertex merging
            if kind is LINE or squared_distance(seeds[i], mp) < p.beta * p.beta:
                continue
        key = (min(i, j), max(i, j), kind)
        if key in seen:
            continue
        seen.add(key)
        edges.append((i, j, kind, mp))

    used = sorted({i for e in edges for i in e[:2]}, key=lambda k: _pixel_key(seeds[k]))
    verts = tuple(seeds[k] for k in used)
    out = []
    for i, j, kind, mp in edges:
        s, e = seeds[i], seeds[j]
        out.append(Edge(s, e, kind, e if kind is LINE else mp))
    return Glyph(verts, tuple(out))
