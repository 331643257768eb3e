"""Crossover by path splicing, and the per-character evolution loop.

Two parent glyphs share one vertex index space: matched vertex pairs first,
then the leftovers of each parent. Each parent becomes a 0..3 adjacency
matrix over that space (1 = line, 2 = curve, 3 = both). An offspring swaps a
bounded simple path of the first parent for a path between the same two
vertices in the second, then gets rebuilt with matched vertices averaged.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .deviation import graph_deviation
from .errors import EmptyTemplates, IllegalMultiEdge, IllegalState, OperationBroken
from .geometry import CURVE, EPS, LINE, Edge, EdgeKind, Glyph, Params, Point, squared_distance

STAGNATION_LIMIT = 3


# ------------------------------------------------------------------ matching

@dataclass(frozen=True)
class MatchAssignment:
    pairs: tuple[tuple[int, int], ...]
    unmatched_g1: tuple[int, ...]
    unmatched_g2: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.pairs) + len(self.unmatched_g1) + len(self.unmatched_g2)

    def order(self, side: int) -> list[int]:
        """Parent-vertex index for each shared slot (-1 where that parent has no vertex)."""
        out = [pr[side] for pr in self.pairs]
        if side == 0:
            return out + list(self.unmatched_g1) + [-1] * len(self.unmatched_g2)
        return out + [-1] * len(self.unmatched_g1) + list(self.unmatched_g2)

    def coordinates(self, g1: Glyph, g2: Glyph) -> list[Point]:
        pts = []
        for i, j in self.pairs:
            a, b = g1.vertices[i], g2.vertices[j]
            pts.append(Point((a.x + b.x) / 2.0, (a.y + b.y) / 2.0))
        pts.extend(g1.vertices[i] for i in self.unmatched_g1)
        pts.extend(g2.vertices[j] for j in self.unmatched_g2)
        return pts

    @classmethod
    def identity(cls, g: Glyph) -> "MatchAssignment":
        return cls(tuple((i, i) for i in range(len(g.vertices))), (), ())


def match_points(g1: Glyph, g2: Glyph, p: Params) -> MatchAssignment:
    """Pair the globally closest vertices under 2*beta, greedily; ties to the lowest (i, j)."""
    n, m = len(g1.vertices), len(g2.vertices)
    if n and m:
        a = np.asarray(g1.vertices, dtype=np.float64)
        b = np.asarray(g2.vertices, dtype=np.float64)
        d = ((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)
    limit = (2.0 * p.beta) ** 2
    pairs = []
    if n and m:
        cand = [(d[i, j], i, j) for i in range(n) for j in range(m) if d[i, j] < limit]
        cand.sort()
        used1, used2 = set(), set()
        for _, i, j in cand:
            if i not in used1 and j not in used2:
                pairs.append((i, j))
                used1.add(i)
                used2.add(j)
    pairs.sort()
    in1 = {i for i, _ in pairs}
    in2 = {j for _, j in pairs}
    return MatchAssignment(
        tuple(pairs),
        tuple(i for i in range(n) if i not in in1),
        tuple(j for j in range(m) if j not in in2),
    )


# ------------------------------------------------------------------ adjacency

class AdjacencyMatrix:
    """Symmetric n x n grid of edge codes 0..3 (bit 1 = line, bit 2 = curve)."""

    __slots__ = ("w",)

    def __init__(self, w):
        self.w = np.array(w, dtype=np.int8)
        if self.w.ndim != 2 or self.w.shape[0] != self.w.shape[1]:
            raise ValueError("adjacency matrix must be square")

    @classmethod
    def zeros(cls, n: int) -> "AdjacencyMatrix":
        return cls(np.zeros((n, n), dtype=np.int8))

    @property
    def n(self) -> int:
        return self.w.shape[0]

    def copy(self) -> "AdjacencyMatrix":
        return AdjacencyMatrix(self.w)

    def is_legal(self) -> bool:
        return bool((self.w == self.w.T).all() and (self.w >= 0).all() and (self.w <= 3).all())

    def __eq__(self, other):
        return isinstance(other, AdjacencyMatrix) and np.array_equal(self.w, other.w)

    def __repr__(self):
        return f"AdjacencyMatrix({self.w.tolist()})"


def generate_adjacency(g: Glyph, order: Sequence[int] | None = None) -> AdjacencyMatrix:
    """Encode ``g`` over the slot order given (slot -> vertex index, -1 for absent)."""
    if order is None:
        order = range(len(g.vertices))
    order = list(order)
    slot = {v: s for s, v in enumerate(order) if v >= 0}
    w = np.zeros((len(order), len(order)), dtype=np.int8)
    for (i, j), e in zip(g.index_pairs, g.edges):
        a, b = slot[i], slot[j]
        code = e.kind.value
        if w[a, b] & code or w[a, b] + code > 3:
            raise IllegalMultiEdge(f"second {e.kind.label} between vertices {i} and {j}")
        w[a, b] += code
        if a != b:
            w[b, a] += code
    return AdjacencyMatrix(w)


def remove_edge(w: AdjacencyMatrix, i: int, j: int, rng: np.random.Generator) -> EdgeKind:
    c = int(w.w[i, j])
    if c == 0:
        raise OperationBroken(f"no edge between {i} and {j}")
    if c > 3 or c < 0:
        raise IllegalState(f"adjacency code {c} out of range")
    if c == 3:
        kind = LINE if rng.integers(2) == 0 else CURVE
    else:
        kind = EdgeKind(c)
    w.w[i, j] = c - kind.value
    w.w[j, i] = w.w[i, j]
    return kind


def add_edge(w: AdjacencyMatrix, i: int, j: int, kind: EdgeKind) -> None:
    c = int(w.w[i, j])
    if c & kind.value or c + kind.value > 3:
        raise OperationBroken(f"{kind.label} already present between {i} and {j}")
    w.w[i, j] = c + kind.value
    w.w[j, i] = w.w[i, j]


# ------------------------------------------------------------------ path table

@dataclass
class PathTable:
    """f[(i, j, l)] = predecessor of j on the chosen simple l-edge path from i."""

    n: int
    max_len: int
    f: dict[tuple[int, int, int], int] = field(default_factory=dict)
    paths: dict[tuple[int, int, int], tuple[int, ...]] = field(default_factory=dict)

    def get(self, i: int, j: int, l: int) -> int | None:
        return self.f.get((i, j, l))


def _simple_paths(adj: list[list[int]], start: int, max_len: int):
    stack = [(start,)]
    while stack:
        path = stack.pop()
        if len(path) > 1:
            yield path
        if len(path) - 1 >= max_len:
            continue
        for nb in reversed(adj[path[-1]]):
            if nb not in path:
                stack.append(path + (nb,))


def find_paths(w: AdjacencyMatrix, p: Params, rng: np.random.Generator) -> PathTable:
    """Every simple path of 1..max_path_len edges, bucketed by (i, j, l).

    A bare predecessor table can lose paths: the only route to the chosen k
    may already pass through j. So each entry also keeps a witness path whose
    last hop is the chosen predecessor. Ties between predecessors, and between
    witnesses sharing one, are broken uniformly with ``rng``.
    """
    n = w.n
    adj = [[int(j) for j in np.nonzero(w.w[i])[0] if j != i] for i in range(n)]
    buckets: dict[tuple[int, int, int], dict[int, list[tuple[int, ...]]]] = {}
    for i in range(n):
        for path in _simple_paths(adj, i, p.max_path_len):
            key = (i, path[-1], len(path) - 1)
            buckets.setdefault(key, {}).setdefault(path[-2], []).append(path)
    t = PathTable(n, p.max_path_len)
    for key in sorted(buckets):
        by_pred = buckets[key]
        preds = sorted(by_pred)
        k = preds[int(rng.integers(len(preds)))] if len(preds) > 1 else preds[0]
        cands = sorted(by_pred[k])
        t.f[key] = k
        t.paths[key] = cands[int(rng.integers(len(cands)))] if len(cands) > 1 else cands[0]
    return t


def reconstruct_path(t: PathTable, i: int, j: int, l: int) -> list[int] | None:
    path = t.paths.get((i, j, l))
    return None if path is None else list(path)


# ------------------------------------------------------------------ regeneration

class _Splicer:
    """Everything make_graph needs that depends only on the parents and their matching,
    computed once so each spliced matrix decodes cheaply."""

    def __init__(self, g1: Glyph, g2: Glyph, m: MatchAssignment, beta: float | None):
        self.coords = m.coordinates(g1, g2)
        self.beta = beta
        self.src: dict[tuple[int, int, int], tuple[int, int, Point | None]] = {}
        for g, order in ((g1, m.order(0)), (g2, m.order(1))):
            slot = {v: s for s, v in enumerate(order) if v >= 0}
            for (i, j), e in zip(g.index_pairs, g.edges):
                a, b = slot[i], slot[j]
                key = (min(a, b), max(a, b), e.kind.value)
                if key in self.src:
                    continue
                if e.kind is LINE:
                    self.src[key] = (a, b, None)
                else:
                    # rigid shift by the mean displacement of the two endpoints
                    sa, sb = g.vertices[i], g.vertices[j]
                    ca, cb = self.coords[a], self.coords[b]
                    dx = ((ca.x - sa.x) + (cb.x - sb.x)) / 2.0
                    dy = ((ca.y - sa.y) + (cb.y - sb.y)) / 2.0
                    self.src[key] = (a, b, Point(e.max_point.x + dx, e.max_point.y + dy))
        self.close = False
        if beta is not None and len(self.coords) > 1:
            c = np.asarray(self.coords, dtype=np.float64)
            d = ((c[:, None, :] - c[None, :, :]) ** 2).sum(axis=2)
            np.fill_diagonal(d, np.inf)
            self.close = bool((d < beta * beta - EPS).any())

    def build(self, w: np.ndarray) -> Glyph:
        raw: list[tuple[int, int, int, Point | None]] = []
        iu, iv = np.nonzero(np.triu(w))
        for u, v in zip(iu.tolist(), iv.tolist()):
            code = int(w[u, v])
            if code >= 2:
                hit = self.src.get((u, v, 2))
                if hit is None:
                    raise IllegalState(f"no parent curve between slots {u} and {v}")
                raw.append((hit[0], hit[1], 2, hit[2]))
                code -= 2
            if code == 1:
                hit = self.src.get((u, v, 1))
                a, b = (hit[0], hit[1]) if hit else (u, v)
                raw.append((a, b, 1, None))
        coords = self.coords
        if self.close:
            coords, raw = _merge_vertices(coords, raw, self.beta)
        used = sorted({x for e in raw for x in e[:2]})
        index = {k: n for n, k in enumerate(used)}
        edges, pairs = [], []
        arr = np.empty((len(raw), 7), dtype=np.float64)
        for r, (a, b, code, mp) in enumerate(raw):
            s, e = coords[a], coords[b]
            if code == 1:
                mp = e
                edges.append(Edge(s, e, LINE, e))
            else:
                edges.append(Edge(s, e, CURVE, mp))
            pairs.append((index[a], index[b]))
            arr[r] = (s.x, s.y, e.x, e.y, mp.x, mp.y, code)
        return Glyph._trusted(tuple(coords[k] for k in used), tuple(edges), tuple(pairs), arr)


def make_graph(w: AdjacencyMatrix, g1: Glyph, g2: Glyph, m: MatchAssignment, beta: float | None = None) -> Glyph:
    """Decode ``w`` into a glyph over averaged vertex coordinates.

    Codes >= 2 give a curve (then subtract 2), a remaining 1 gives a line.
    Curves take orientation and max point from a parent edge of the same kind
    (first parent preferred), shifted by the mean displacement of its ends.
    Vertices left without edges are dropped. With ``beta`` set, vertices
    closer than beta are merged so the result is a valid glyph.
    """
    return _Splicer(g1, g2, m, beta).build(w.w)


def _merge_vertices(coords, raw, beta):
    coords = list(coords)
    used = sorted({x for e in raw for x in e[:2]})
    alias = {k: k for k in used}
    alive = list(used)
    limit = beta * beta - EPS
    while True:
        best = None
        for x in range(len(alive)):
            for y in range(x + 1, len(alive)):
                d = squared_distance(coords[alive[x]], coords[alive[y]])
                if d < limit and (best is None or d < best[0]):
                    best = (d, alive[x], alive[y])
        if best is None:
            break
        _, a, b = best
        coords[a] = Point((coords[a].x + coords[b].x) / 2.0, (coords[a].y + coords[b].y) / 2.0)
        alive.remove(b)
        for k, t in alias.items():
            if t == b:
                alias[k] = a
    out, seen = [], set()
    for a, b, code, mp in raw:
        a, b = alias[a], alias[b]
        if a == b and (code == 1 or squared_distance(coords[a], mp) < beta * beta):
            continue
        key = (min(a, b), max(a, b), code)
        if key in seen:
            continue
        seen.add(key)
        out.append((a, b, code, mp))
    return coords, out


# ------------------------------------------------------------------ crossover

@dataclass(frozen=True)
class Offspring:
    glyph: Glyph
    lineage: dict


def crossover(g1: Glyph, g2: Glyph, p: Params, rng: np.random.Generator) -> list[Offspring]:
    """Every legal splice of a g2 path into g1, plus the unspliced mean graph.

    Offspring whose edits break adjacency legality are dropped; their number
    is recorded in each survivor's lineage under ``"aborted"``.
    """
    return _crossover(g1, g2, p, lambda: rng)


def _crossover(g1: Glyph, g2: Glyph, p: Params, get_rng) -> list[Offspring]:
    m = match_points(g1, g2, p)
    n = m.size
    w1 = generate_adjacency(g1, m.order(0))
    w2 = generate_adjacency(g2, m.order(1))
    sp = _Splicer(g1, g2, m, p.beta)
    base = sp.build(w1.w)
    out = [Offspring(base, {"splice": None})]
    if w1 == w2:
        # every path pair would coincide: only the averaged graph remains
        out[0].lineage["aborted"] = 0
        return out
    rng = get_rng()
    t1 = find_paths(w1, p, rng)
    t2 = find_paths(w2, p, rng)
    aborted = 0
    seen = {base.key}
    seen_w = {w1.w.tobytes()}
    L = p.max_path_len
    for u in range(n):
        for v in range(u + 1, n):
            for l1 in range(1, L + 1):
                p1 = t1.paths.get((u, v, l1))
                if p1 is None:
                    continue
                for l2 in range(1, L + 1):
                    p2 = t2.paths.get((u, v, l2))
                    # same vertices over the same edge kinds is the same path
                    if p2 is None or (p1 == p2 and all(w1.w[a, b] == w2.w[a, b] for a, b in zip(p1, p1[1:]))):
                        continue
                    w = w1.copy()
                    try:
                        for a, b in zip(p1, p1[1:]):
                            remove_edge(w, a, b, rng)
                        for a, b in zip(p2, p2[1:]):
                            c = int(w2.w[a, b])
                            kind = (LINE if rng.integers(2) == 0 else CURVE) if c == 3 else EdgeKind(c)
                            add_edge(w, a, b, kind)
                    except OperationBroken:
                        aborted += 1
                        continue
                    wb = w.w.tobytes()
                    if wb in seen_w:
                        continue
                    seen_w.add(wb)
                    child = sp.build(w.w)
                    if not child.edges or child.key in seen:
                        continue
                    seen.add(child.key)
                    out.append(Offspring(child, {"splice": (u, v), "lengths": (l1, l2)}))
    for o in out:
        o.lineage["aborted"] = aborted
    return out


# ------------------------------------------------------------------ evolution

def pair_seed(base: int, k1: bytes, k2: bytes) -> int:
    h = hashlib.blake2b(base.to_bytes(8, "little") + k1 + k2, digest_size=8)
    return int.from_bytes(h.digest(), "little")


class CrossoverCache:
    """Memo of crossover results. Offspring depend only on the parents, Params and
    seed, never on the glyph being recognized, so they can be shared across inputs."""

    def __init__(self, max_entries: int = 200_000):
        self.max_entries = max_entries
        self._d: dict = {}

    def get(self, g1: Glyph, g2: Glyph, p: Params, base: int) -> list[Glyph]:
        key = (g1.key, g2.key, base, p.beta, p.max_path_len)
        hit = self._d.get(key)
        if hit is None:
            hit = [o.glyph for o in _crossover(
                g1, g2, p, lambda: np.random.default_rng(pair_seed(base, g1.key, g2.key)))]
            if len(self._d) < self.max_entries:
                self._d[key] = hit
        return hit


@dataclass(frozen=True)
class EvolveResult:
    best: float
    best_glyph: Glyph
    scored: int
    generations: int


def evolve_pool(templates: Sequence[Glyph], target: Glyph, p: Params, rng: np.random.Generator,
                cache: CrossoverCache | None = None) -> EvolveResult:
    """Grow a pool from the templates by crossover; return the best glyph ever scored.

    Each generation crosses every unordered pool pair that involves a member
    added in the previous generation (older pairs were already crossed, and
    crossover is deterministic per pair). The fitter member of a pair is the
    base that receives a path from the other. The pool keeps the ``pool_cap``
    lowest deviations, ties broken by glyph key.
    """
    if not templates:
        raise EmptyTemplates("no templates to evolve")
    base = int(rng.integers(2**63))
    scored: dict[bytes, float] = {}
    glyphs: dict[bytes, Glyph] = {}

    def score(g: Glyph) -> bool:
        if g.key in scored:
            return False
        scored[g.key] = graph_deviation(g, target, p)
        glyphs[g.key] = g
        return True

    for g in templates:
        score(g)
    pool = sorted(scored, key=lambda k: (scored[k], k))[: p.pool_cap]
    best_key = pool[0]
    if scored[best_key] == 0.0:
        return EvolveResult(0.0, glyphs[best_key], len(scored), 0)
    fresh = set(pool)
    stagnant = 0
    gens = 0
    for _ in range(p.ga_generations):
        if not fresh:
            break
        gens += 1
        born = []
        for x, a in enumerate(pool):
            for b in pool[x + 1:]:
                if a not in fresh and b not in fresh:
                    continue
                kids = (cache.get(glyphs[a], glyphs[b], p, base) if cache is not None
                        else [o.glyph for o in _crossover(
                            glyphs[a], glyphs[b], p, lambda: np.random.default_rng(pair_seed(base, a, b)))])
                born.extend(g.key for g in kids if score(g))
        merged = sorted(pool + born, key=lambda k: (scored[k], k))[: p.pool_cap]
        fresh = set(merged) - set(pool)
        pool = merged
        if scored[pool[0]] < scored[best_key]:
            best_key = pool[0]
            stagnant = 0
        else:
            stagnant += 1
            if stagnant >= STAGNATION_LIMIT:
                break
        if scored[best_key] == 0.0:
            break
    return EvolveResult(scored[best_key], glyphs[best_key], len(scored), gens)
