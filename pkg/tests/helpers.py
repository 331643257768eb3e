"""Random fixtures and independent reference implementations used as oracles."""
from __future__ import annotations

import itertools
import math

import numpy as np

from glyphga import Edge, Glyph, Params, Point
from glyphga.geometry import CURVE, LINE


def random_points(rng: np.random.Generator, n: int, beta: float = 10.0, size: float = 99.0) -> list[Point]:
    """n points on the canvas, pairwise at least ``beta`` apart (rejection sampling)."""
    pts: list[Point] = []
    while len(pts) < n:
        q = Point(float(rng.uniform(0, size)), float(rng.uniform(0, size)))
        if all(math.dist(q, p) >= beta + 1e-3 for p in pts):
            pts.append(q)
    return pts


def random_glyph(rng: np.random.Generator, max_vertices: int = 6, max_edges: int = 6,
                 beta: float = 10.0, loops: bool = True) -> Glyph:
    """A valid glyph: vertices >= beta apart, at most one line and one curve per
    vertex pair, every vertex on some edge. Loops are near-closed curves."""
    while True:
        n = int(rng.integers(1, max_vertices + 1))
        verts = random_points(rng, n, beta)
        slots = [(i, j, k) for i in range(n) for j in range(i + 1, n) for k in (LINE, CURVE)]
        if loops:
            slots += [(i, i, CURVE) for i in range(n)]
        if not slots:
            continue
        m = int(rng.integers(1, min(max_edges, len(slots)) + 1))
        pick = rng.choice(len(slots), size=m, replace=False)
        edges = []
        for s in sorted(pick.tolist()):
            i, j, kind = slots[s]
            a, b = verts[i], verts[j]
            if rng.integers(2):
                a, b = b, a
            if kind is LINE:
                edges.append(Edge(a, b, LINE, b))
            elif i == j:
                ang = rng.uniform(0, 2 * math.pi)
                r = rng.uniform(beta + 1, 30)
                edges.append(Edge(a, a, CURVE, Point(a.x + r * math.cos(ang), a.y + r * math.sin(ang))))
            else:
                mid = ((a.x + b.x) / 2, (a.y + b.y) / 2)
                off = rng.uniform(-20, 20, size=2)
                edges.append(Edge(a, b, CURVE, Point(mid[0] + off[0], mid[1] + off[1])))
        used = sorted({p for e in edges for p in (e.start, e.end)}, key=lambda p: verts.index(p))
        return Glyph(tuple(used), tuple(edges))


def random_adjacency(rng: np.random.Generator, max_vertices: int = 8) -> np.ndarray:
    n = int(rng.integers(1, max_vertices + 1))
    density = rng.uniform(0.1, 0.8)
    w = np.zeros((n, n), dtype=np.int8)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                w[i, j] = w[j, i] = int(rng.integers(1, 4))
    return w


def simple_path_exists(w: np.ndarray, i: int, j: int, l: int) -> bool:
    """Exhaustive: try every ordered choice of l-1 distinct intermediates."""
    n = w.shape[0]
    if i == j:
        return False
    others = [k for k in range(n) if k not in (i, j)]
    for mid in itertools.permutations(others, l - 1):
        path = (i, *mid, j)
        if all(w[a, b] > 0 for a, b in zip(path, path[1:])):
            return True
    return False


def optimal_assignment_deviation(g1: Glyph, g2: Glyph, p: Params) -> float:
    """Exact minimum over every partial pairing of edges; unpaired edges pay the
    null cost. Bitmask DP over which edges of g2 are already taken."""
    from functools import lru_cache

    from glyphga.deviation import edge_deviation

    a, b = list(g1.edges), list(g2.edges)
    pair = [[edge_deviation(x, y, p) for y in b] for x in a]
    null_a = [edge_deviation(x, None, p) for x in a]
    null_b = [edge_deviation(None, y, p) for y in b]

    @lru_cache(maxsize=None)
    def go(i: int, mask: int) -> float:
        if i == len(a):
            return sum(null_b[k] for k in range(len(b)) if not mask >> k & 1)
        best = null_a[i] + go(i + 1, mask)
        for k in range(len(b)):
            if not mask >> k & 1:
                best = min(best, pair[i][k] + go(i + 1, mask | 1 << k))
        return best

    return go(0, 0)


def zhang_suen_reference(img: np.ndarray) -> np.ndarray:
    """Textbook Zhang-Suen, pixel by pixel, until no change."""
    a = img.astype(np.uint8).copy()
    h, w = a.shape

    def nb(y, x):
        # P2..P9 clockwise from north
        return [a[y - 1, x], a[y - 1, x + 1], a[y, x + 1], a[y + 1, x + 1],
                a[y + 1, x], a[y + 1, x - 1], a[y, x - 1], a[y - 1, x - 1]]

    changed = True
    while changed:
        changed = False
        for step in (0, 1):
            kill = []
            for y in range(1, h - 1):
                for x in range(1, w - 1):
                    if not a[y, x]:
                        continue
                    p = nb(y, x)
                    b = sum(p)
                    t = sum(1 for k in range(8) if p[k] == 0 and p[(k + 1) % 8] == 1)
                    p2, p4, p6, p8 = p[0], p[2], p[4], p[6]
                    if step == 0:
                        ok = p2 * p4 * p6 == 0 and p4 * p6 * p8 == 0
                    else:
                        ok = p2 * p4 * p8 == 0 and p2 * p6 * p8 == 0
                    if 2 <= b <= 6 and t == 1 and ok:
                        kill.append((y, x))
            for y, x in kill:
                a[y, x] = 0
            changed |= bool(kill)
    return a.astype(bool)
