"""Value types shared by every stage, plus the two geometric primitives.

Coordinates are real-valued canvas units; a character graph ("glyph") is a
vertex list and an edge list where each edge is a line or a curve carrying
its point of maximum separation from the start vertex.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

EPS = 1e-6
EPS_SNAP = 1e-3


class Point(NamedTuple):
    x: float
    y: float


class EdgeKind(Enum):
    """Stroke shape. The value doubles as the adjacency-matrix code."""

    LINE = 1
    CURVE = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "EdgeKind":
        try:
            return cls[text.upper()]
        except KeyError:
            raise ValueError(f"unknown edge kind {text!r}") from None


LINE = EdgeKind.LINE
CURVE = EdgeKind.CURVE


class Edge(NamedTuple):
    start: Point
    end: Point
    kind: EdgeKind
    max_point: Point

    @classmethod
    def line(cls, start: Sequence[float], end: Sequence[float]) -> "Edge":
        s, e = Point(*map(float, start)), Point(*map(float, end))
        return cls(s, e, LINE, e)

    @classmethod
    def curve(cls, start: Sequence[float], end: Sequence[float], max_point: Sequence[float]) -> "Edge":
        return cls(Point(*map(float, start)), Point(*map(float, end)), CURVE, Point(*map(float, max_point)))

    def reversed(self) -> "Edge":
        # max_point is defined relative to the start, so a reversed line keeps max = new end
        if self.kind is LINE:
            return Edge(self.end, self.start, LINE, self.start)
        return Edge(self.end, self.start, CURVE, self.max_point)


def squared_distance(p: Sequence[float], q: Sequence[float]) -> float:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def angle_at(vertex: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    """Interior angle in degrees at ``vertex`` of triangle (a, vertex, b), law of cosines.

    Raises DegenerateTriangle when ``vertex`` coincides with ``a`` or ``b``.
    """
    from .errors import DegenerateTriangle

    va = squared_distance(vertex, a)
    vb = squared_distance(vertex, b)
    if va < EPS * EPS or vb < EPS * EPS:
        raise DegenerateTriangle(f"probe {tuple(vertex)} coincides with a triangle corner")
    ab = squared_distance(a, b)
    cos = (va + vb - ab) / (2.0 * math.sqrt(va) * math.sqrt(vb))
    cos = min(1.0, max(-1.0, cos))
    return math.degrees(math.acos(cos))


@dataclass(frozen=True)
class Params:
    canvas: tuple[int, int] = (100, 100)
    gamma: float = 5.0
    beta: float = 10.0
    eta: float = 800.0
    line_angle_spread_max: float = 15.0
    max_path_len: int = 4
    ga_generations: int = 10
    pool_cap: int = 20
    rng_seed: int = 0

    def __post_init__(self):
        canvas = tuple(int(v) for v in self.canvas)
        object.__setattr__(self, "canvas", canvas)
        if len(canvas) != 2 or min(canvas) < 2:
            raise ValueError(f"canvas dimensions must be >= 2, got {canvas}")
        for name in ("gamma", "beta", "eta", "line_angle_spread_max"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.max_path_len < 1:
            raise ValueError("max_path_len must be >= 1")
        if self.ga_generations < 0 or self.pool_cap < 1:
            raise ValueError("ga_generations must be >= 0 and pool_cap >= 1")
        if not 0 <= int(self.rng_seed) < 2**64:
            raise ValueError("rng_seed must fit in 64 bits")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["canvas"] = list(self.canvas)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Params":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        if "canvas" in known:
            known["canvas"] = tuple(known["canvas"])
        return cls(**known)


def _is_near_closed_curve(edge: Edge, beta: float) -> bool:
    return edge.kind is CURVE and squared_distance(edge.start, edge.end) < beta * beta


@dataclass(frozen=True, eq=False)
class Glyph:
    vertices: tuple[Point, ...] = ()
    edges: tuple[Edge, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(Point(float(v[0]), float(v[1])) for v in self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    @classmethod
    def _trusted(cls, vertices: tuple, edges: tuple, index_pairs: tuple, edge_array: np.ndarray) -> "Glyph":
        """Skip coercion for internally built glyphs whose parts are already canonical."""
        g = object.__new__(cls)
        object.__setattr__(g, "vertices", vertices)
        object.__setattr__(g, "edges", edges)
        g.__dict__["index_pairs"] = index_pairs
        g.__dict__["edge_array"] = edge_array
        return g

    def __eq__(self, other):
        if not isinstance(other, Glyph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Glyph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    @classmethod
    def from_edges(cls, edges: Iterable[Edge]) -> "Glyph":
        """Build a glyph whose vertices are exactly the edge endpoints (first-seen order)."""
        edges = tuple(edges)
        verts: list[Point] = []
        for e in edges:
            for p in (e.start, e.end):
                if not any(squared_distance(p, v) <= EPS_SNAP**2 for v in verts):
                    verts.append(p)
        return cls(tuple(verts), edges)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """(n, 7) float64 rows: sx, sy, ex, ey, mx, my, kind-code."""
        arr = np.empty((len(self.edges), 7), dtype=np.float64)
        for i, e in enumerate(self.edges):
            arr[i] = (e.start.x, e.start.y, e.end.x, e.end.y, e.max_point.x, e.max_point.y, e.kind.value)
        return arr

    @cached_property
    def key(self) -> bytes:
        """Order-independent 16-byte identity used for deduplication and stable sorting.

        Lines are undirected; curves keep their direction because max_point is
        measured from the start. Coordinates are quantized to 1e-6 first.
        """
        q = np.rint(self.edge_array * 1e6).astype(np.int64).tolist()
        rows = []
        for sx, sy, ex, ey, mx, my, kind in q:
            if kind == 1_000_000:
                a, b = (sx, sy), (ex, ey)
                if b < a:
                    a, b = b, a
                rows.append((1, *a, *b, 0, 0))
            else:
                rows.append((2, sx, sy, ex, ey, mx, my))
        rows.sort()
        verts = sorted(map(tuple, np.rint(np.asarray(self.vertices, dtype=np.float64).reshape(-1, 2) * 1e6)
                           .astype(np.int64).tolist()))
        return hashlib.blake2b(repr((rows, verts)).encode(), digest_size=16).digest()

    def vertex_index(self, p: Sequence[float], tol: float = EPS_SNAP) -> int:
        best, best_d = -1, tol * tol
        for i, v in enumerate(self.vertices):
            d = squared_distance(p, v)
            if d <= best_d:
                best, best_d = i, d
        if best < 0:
            raise ValueError(f"point {tuple(p)} is not a vertex of this glyph")
        return best

    @cached_property
    def index_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((self.vertex_index(e.start), self.vertex_index(e.end)) for e in self.edges)

    def edge_indices(self) -> list[tuple[int, int]]:
        return list(self.index_pairs)

    def translate(self, dx: float, dy: float) -> "Glyph":
        def mv(p):
            return Point(p.x + dx, p.y + dy)

        return Glyph(
            tuple(mv(v) for v in self.vertices),
            tuple(Edge(mv(e.start), mv(e.end), e.kind, mv(e.max_point)) for e in self.edges),
        )

    def kind_counts(self) -> dict[str, int]:
        counts = {"line": 0, "curve": 0}
        for e in self.edges:
            counts[e.kind.label] += 1
        return counts

    def problems(self, beta: float | None = None) -> list[str]:
        """Invariant violations as messages; empty when the glyph is valid."""
        out = []
        pairs: set[tuple[int, int, EdgeKind]] = set()
        for k, e in enumerate(self.edges):
            try:
                i, j = self.vertex_index(e.start), self.vertex_index(e.end)
            except ValueError as exc:
                out.append(f"edge {k}: {exc}")
                continue
            key = (min(i, j), max(i, j), e.kind)
            if key in pairs:
                out.append(f"edge {k}: second {e.kind.label} between vertices {i} and {j}")
            pairs.add(key)
        if beta is not None:
            limit = beta * beta - EPS
            for i in range(len(self.vertices)):
                for j in range(i + 1, len(self.vertices)):
                    if squared_distance(self.vertices[i], self.vertices[j]) < limit:
                        out.append(f"vertices {i} and {j} closer than beta={beta}")
        return out

    def to_json(self) -> dict:
        edges = []
        for e in self.edges:
            edges.append({
                "from": self.vertex_index(e.start),
                "to": self.vertex_index(e.end),
                "kind": e.kind.label,
                "max_point": [e.max_point.x, e.max_point.y],
            })
        return {"vertices": [[v.x, v.y] for v in self.vertices], "edges": edges}

    @classmethod
    def from_json(cls, doc: dict) -> "Glyph":
        """Inverse of :meth:`to_json`; raises ValueError on schema violations."""
        if not isinstance(doc, dict) or set(doc) - {"vertices", "edges"}:
            raise ValueError("glyph must be an object with 'vertices' and 'edges'")
        raw_v, raw_e = doc.get("vertices"), doc.get("edges")
        if not isinstance(raw_v, list) or not isinstance(raw_e, list):
            raise ValueError("'vertices' and 'edges' must be lists")
        verts = []
        for v in raw_v:
            verts.append(Point(*_coord_pair(v)))
        edges = []
        for e in raw_e:
            if not isinstance(e, dict) or set(e) != {"from", "to", "kind", "max_point"}:
                raise ValueError(f"bad edge record {e!r}")
            i, j = e["from"], e["to"]
            if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < len(verts) and 0 <= j < len(verts)):
                raise ValueError(f"edge endpoint index out of range in {e!r}")
            if e["kind"] not in ("line", "curve"):
                raise ValueError(f"unknown edge kind {e['kind']!r}")
            edges.append(Edge(verts[i], verts[j], EdgeKind.parse(e["kind"]), Point(*_coord_pair(e["max_point"]))))
        return cls(tuple(verts), tuple(edges))


def _coord_pair(v) -> tuple[float, float]:
    if not (isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)):
        raise ValueError(f"bad coordinate pair {v!r}")
    return float(v[0]), float(v[1])
