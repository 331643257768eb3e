"""Fitness: squared-distance deviation between edges and between whole glyphs.

Lower is better. Edge pairs are compared both aligned (start-start, end-end)
and crossed (start-end, end-start); the cheaper reading wins. A line/curve
mismatch costs ``eta``. For two curves where either is near-closed (start
and end closer than ``beta``), the max points stand in for the end points.
"""
from __future__ import annotations

import numpy as np

from . import _accel
from .errors import BothNull
from .geometry import CURVE, Edge, Glyph, Params, squared_distance

# column layout of Glyph.edge_array
SX, SY, EX, EY, MX, MY, KIND = range(7)


def _far_points(e1: Edge, e2: Edge, beta: float):
    """End points to compare, with max-point substitution when the near-closed rule fires."""
    b2 = beta * beta
    if e1.kind is CURVE and e2.kind is CURVE and (
        squared_distance(e1.start, e1.end) < b2 or squared_distance(e2.start, e2.end) < b2
    ):
        return e1.max_point, e2.max_point
    return e1.end, e2.end


def d1(e1: Edge, e2: Edge, p: Params) -> float:
    f1, f2 = _far_points(e1, e2, p.beta)
    out = squared_distance(e1.start, e2.start) + squared_distance(f1, f2)
    if e1.kind is not e2.kind:
        out += p.eta
    return out


def d2(e1: Edge, e2: Edge, p: Params) -> float:
    f1, f2 = _far_points(e1, e2, p.beta)
    out = squared_distance(e1.start, f2) + squared_distance(f1, e2.start)
    if e1.kind is not e2.kind:
        out += p.eta
    return out


def null_deviation(e: Edge, p: Params) -> float:
    if e.kind is CURVE and squared_distance(e.start, e.end) < p.beta * p.beta:
        return squared_distance(e.start, e.max_point)
    return squared_distance(e.start, e.end)


def edge_deviation(e1: Edge | None, e2: Edge | None, p: Params) -> float:
    if e1 is None and e2 is None:
        raise BothNull("cannot compare two null edges")
    if e2 is None:
        return null_deviation(e1, p)
    if e1 is None:
        return null_deviation(e2, p)
    return min(d1(e1, e2, p), d2(e1, e2, p))


# ---------------------------------------------------------------- array kernels

def pair_matrix_numpy(a: np.ndarray, b: np.ndarray, beta: float, eta: float) -> np.ndarray:
    """All-pairs edge deviation for edge arrays ``a`` (n, 7) and ``b`` (m, 7)."""
    A = a[:, None, :]
    B = b[None, :, :]
    b2 = beta * beta
    curve_a = A[..., KIND] == 2
    curve_b = B[..., KIND] == 2
    near_a = curve_a & (((A[..., SX] - A[..., EX]) ** 2 + (A[..., SY] - A[..., EY]) ** 2) < b2)
    near_b = curve_b & (((B[..., SX] - B[..., EX]) ** 2 + (B[..., SY] - B[..., EY]) ** 2) < b2)
    sub = curve_a & curve_b & (near_a | near_b)
    fax = np.where(sub, A[..., MX], A[..., EX])
    fay = np.where(sub, A[..., MY], A[..., EY])
    fbx = np.where(sub, B[..., MX], B[..., EX])
    fby = np.where(sub, B[..., MY], B[..., EY])
    sax, say, sbx, sby = A[..., SX], A[..., SY], B[..., SX], B[..., SY]
    dd1 = (sax - sbx) ** 2 + (say - sby) ** 2 + (fax - fbx) ** 2 + (fay - fby) ** 2
    dd2 = (sax - fbx) ** 2 + (say - fby) ** 2 + (fax - sbx) ** 2 + (fay - sby) ** 2
    extra = np.where(A[..., KIND] != B[..., KIND], eta, 0.0)
    return np.minimum(dd1, dd2) + extra


def null_vector_numpy(a: np.ndarray, beta: float) -> np.ndarray:
    near = (a[:, KIND] == 2) & (((a[:, SX] - a[:, EX]) ** 2 + (a[:, SY] - a[:, EY]) ** 2) < beta * beta)
    fx = np.where(near, a[:, MX], a[:, EX])
    fy = np.where(near, a[:, MY], a[:, EY])
    return (a[:, SX] - fx) ** 2 + (a[:, SY] - fy) ** 2


def greedy_numpy(a: np.ndarray, b: np.ndarray, beta: float, eta: float) -> float:
    n, m = len(a), len(b)
    total = 0.0
    if n and m:
        mat = pair_matrix_numpy(a, b, beta, eta)
        rows = np.ones(n, dtype=bool)
        cols = np.ones(m, dtype=bool)
        for _ in range(min(n, m)):
            masked = np.where(rows[:, None] & cols[None, :], mat, np.inf)
            # argmin returns the first minimum in row-major order: lowest (i, j)
            k = int(np.argmin(masked))
            i, j = divmod(k, m)
            total += float(mat[i, j])
            rows[i] = False
            cols[j] = False
        a, b = a[rows], b[cols]
    if len(a):
        total += float(null_vector_numpy(a, beta).sum())
    if len(b):
        total += float(null_vector_numpy(b, beta).sum())
    return total


def _greedy_loops(a, b, beta, eta):
    n = a.shape[0]
    m = b.shape[0]
    b2 = beta * beta
    mat = np.empty((n, m))
    for i in range(n):
        ca = a[i, 6] == 2
        na = ca and ((a[i, 0] - a[i, 2]) ** 2 + (a[i, 1] - a[i, 3]) ** 2) < b2
        for j in range(m):
            cb = b[j, 6] == 2
            nb = cb and ((b[j, 0] - b[j, 2]) ** 2 + (b[j, 1] - b[j, 3]) ** 2) < b2
            if ca and cb and (na or nb):
                fax, fay, fbx, fby = a[i, 4], a[i, 5], b[j, 4], b[j, 5]
            else:
                fax, fay, fbx, fby = a[i, 2], a[i, 3], b[j, 2], b[j, 3]
            v1 = (a[i, 0] - b[j, 0]) ** 2 + (a[i, 1] - b[j, 1]) ** 2 + (fax - fbx) ** 2 + (fay - fby) ** 2
            v2 = (a[i, 0] - fbx) ** 2 + (a[i, 1] - fby) ** 2 + (fax - b[j, 0]) ** 2 + (fay - b[j, 1]) ** 2
            v = v1 if v1 <= v2 else v2
            if a[i, 6] != b[j, 6]:
                v += eta
            mat[i, j] = v
    row_used = np.zeros(n, dtype=np.bool_)
    col_used = np.zeros(m, dtype=np.bool_)
    total = 0.0
    for _ in range(min(n, m)):
        bi = -1
        bj = -1
        best = np.inf
        for i in range(n):
            if row_used[i]:
                continue
            for j in range(m):
                if not col_used[j] and mat[i, j] < best:
                    best = mat[i, j]
                    bi = i
                    bj = j
        total += best
        row_used[bi] = True
        col_used[bj] = True
    for side in range(2):
        arr = a if side == 0 else b
        used = row_used if side == 0 else col_used
        for i in range(arr.shape[0]):
            if used[i]:
                continue
            if arr[i, 6] == 2 and ((arr[i, 0] - arr[i, 2]) ** 2 + (arr[i, 1] - arr[i, 3]) ** 2) < b2:
                fx, fy = arr[i, 4], arr[i, 5]
            else:
                fx, fy = arr[i, 2], arr[i, 3]
            total += (arr[i, 0] - fx) ** 2 + (arr[i, 1] - fy) ** 2
    return total


_greedy_numba = _accel.njit(_greedy_loops)


def greedy_arrays(a: np.ndarray, b: np.ndarray, beta: float, eta: float, use_numba: bool | None = None) -> float:
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    if use_numba and _greedy_numba is not None:
        return float(_greedy_numba(a, b, float(beta), float(eta)))
    return greedy_numpy(a, b, beta, eta)


def graph_deviation(g1: Glyph, g2: Glyph, p: Params) -> float:
    """Greedy whole-graph deviation: repeatedly take the cheapest remaining edge pair
    (ties to the lowest (i, j)), then charge every leftover edge against null."""
    return greedy_arrays(g1.edge_array, g2.edge_array, p.beta, p.eta)


def graph_deviation_reference(g1: Glyph, g2: Glyph, p: Params) -> float:
    """Edge-object implementation of the greedy loop, kept for cross-checking the kernels."""
    left, right = list(g1.edges), list(g2.edges)
    li, ri = list(range(len(left))), list(range(len(right)))
    total = 0.0
    while li and ri:
        best = None
        for i in li:
            for j in ri:
                d = edge_deviation(left[i], right[j], p)
                if best is None or d < best[0]:
                    best = (d, i, j)
        total += best[0]
        li.remove(best[1])
        ri.remove(best[2])
    total += sum(edge_deviation(left[i], None, p) for i in li)
    total += sum(edge_deviation(None, right[j], p) for j in ri)
    return total
