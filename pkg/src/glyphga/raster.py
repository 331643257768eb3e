"""Binary rasters: Netpbm I/O, expansion-factor normalization, Zhang-Suen thinning."""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import EmptyImage, MalformedImage
from .geometry import Params


@dataclass(frozen=True, eq=False)
class BinaryRaster:
    """Row-major boolean grid, ``bits[y, x]`` true for ink."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[0] < 1 or bits.shape[1] < 1:
            raise ValueError(f"raster must be a non-empty 2-D grid, got shape {bits.shape}")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def ink_count(self) -> int:
        return int(self.bits.sum())

    def __eq__(self, other):
        if not isinstance(other, BinaryRaster):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(np.array_equal(self.bits, other.bits))

    @classmethod
    def blank(cls, width: int, height: int) -> "BinaryRaster":
        return cls(np.zeros((height, width), dtype=bool))


@dataclass(frozen=True)
class NormalizationReport:
    fx: float
    fy: float


# ---------------------------------------------------------------- Netpbm

_TOKEN = re.compile(rb"#[^\n\r]*|\S+")


def _header(data: bytes, count: int) -> tuple[list[int], int]:
    """Read ``count`` integer header fields after the magic; return them and the payload offset."""
    values: list[int] = []
    pos = 2
    for m in _TOKEN.finditer(data, pos):
        tok = m.group()
        if tok.startswith(b"#"):
            continue
        if not tok.isdigit():
            raise MalformedImage(f"bad header token {tok[:16]!r}")
        values.append(int(tok))
        pos = m.end()
        if len(values) == count:
            break
    if len(values) < count:
        raise MalformedImage("truncated header")
    # exactly one whitespace byte separates the header from a binary payload
    if pos < len(data) and data[pos:pos + 1].isspace():
        pos += 1
    return values, pos


def _plain_values(payload: bytes, magic: bytes) -> list[int]:
    text = re.sub(rb"#[^\n\r]*", b" ", payload)
    if magic == b"P1":
        if not re.fullmatch(rb"[\s01]*", text):
            raise MalformedImage("non-binary data in P1 payload")
        # P1 pixels need no separators
        return [c - 48 for c in text if c in (48, 49)]
    toks = text.split()
    if not all(t.isdigit() for t in toks):
        raise MalformedImage("non-numeric data in P2 payload")
    return [int(t) for t in toks]


def load_raster(data: bytes) -> BinaryRaster:
    """Decode a P1/P2/P4/P5 Netpbm document; graymap pixels below half of maxval are ink."""
    if not isinstance(data, (bytes, bytearray)):
        raise MalformedImage("expected bytes")
    data = bytes(data)
    magic = data[:2]
    if magic not in (b"P1", b"P2", b"P4", b"P5"):
        raise MalformedImage(f"unsupported magic {magic!r}")
    gray = magic in (b"P2", b"P5")
    (fields, pos) = _header(data, 3 if gray else 2)
    width, height = fields[0], fields[1]
    maxval = fields[2] if gray else 1
    if width < 1 or height < 1:
        raise MalformedImage("zero image dimension")
    if gray and not 0 < maxval < 65536:
        raise MalformedImage(f"bad maxval {maxval}")
    n = width * height
    payload = data[pos:]

    if magic in (b"P1", b"P2"):
        vals = _plain_values(payload, magic)
        if len(vals) < n:
            raise MalformedImage(f"expected {n} pixels, found {len(vals)}")
        arr = np.asarray(vals[:n], dtype=np.int64).reshape(height, width)
        if magic == b"P1":
            return BinaryRaster(arr == 1)
        return BinaryRaster(arr < 0.5 * maxval)

    if magic == b"P4":
        row_bytes = (width + 7) // 8
        if len(payload) < row_bytes * height:
            raise MalformedImage("truncated bitmap payload")
        raw = np.frombuffer(payload[: row_bytes * height], dtype=np.uint8).reshape(height, row_bytes)
        bits = np.unpackbits(raw, axis=1)[:, :width]
        return BinaryRaster(bits == 1)

    depth = 1 if maxval < 256 else 2
    if len(payload) < n * depth:
        raise MalformedImage("truncated graymap payload")
    dtype = np.uint8 if depth == 1 else np.dtype(">u2")
    arr = np.frombuffer(payload[: n * depth], dtype=dtype).reshape(height, width)
    return BinaryRaster(arr < 0.5 * maxval)


def to_pbm(r: BinaryRaster, plain: bool = True) -> bytes:
    """Encode as P1 (plain) or P4 (packed) bitmap."""
    if plain:
        rows = "\n".join(" ".join("1" if b else "0" for b in row) for row in r.bits)
        return f"P1\n{r.width} {r.height}\n{rows}\n".encode("ascii")
    packed = np.packbits(r.bits.astype(np.uint8), axis=1)
    return f"P4\n{r.width} {r.height}\n".encode("ascii") + packed.tobytes()


def to_pgm(r: BinaryRaster) -> bytes:
    """Binary P5 graymap, dark ink on white."""
    px = np.where(r.bits, 0, 255).astype(np.uint8)
    return f"P5\n{r.width} {r.height}\n255\n".encode("ascii") + px.tobytes()


# ---------------------------------------------------------------- normalization

def _axis_map(coords: np.ndarray, lo: int, hi: int, size: int) -> tuple[np.ndarray, float]:
    extent = hi - lo + 1
    if extent == 1:
        return np.full(coords.shape, size // 2, dtype=np.float64), 1.0
    # endpoints land exactly on the first and last canvas cell
    mapped = (coords - lo) * ((size - 1) / (extent - 1))
    return mapped, size / extent


def normalize_raster(r: BinaryRaster, p: Params) -> tuple[BinaryRaster, NormalizationReport]:
    """Scale the ink bounding box onto the full canvas.

    Each ink pixel maps to its rounded scaled position; 8-adjacent source
    pixels are joined by a segment in the output so upscaled strokes stay
    connected.
    """
    ys, xs = np.nonzero(r.bits)
    if xs.size == 0:
        raise EmptyImage("raster has no ink")
    width, height = p.canvas
    mx, fx = _axis_map(xs.astype(np.float64), int(xs.min()), int(xs.max()), width)
    my, fy = _axis_map(ys.astype(np.float64), int(ys.min()), int(ys.max()), height)

    out = np.zeros((height, width), dtype=bool)
    px = np.clip(np.rint(mx).astype(np.int64), 0, width - 1)
    py = np.clip(np.rint(my).astype(np.int64), 0, height - 1)
    out[py, px] = True

    index = -np.ones(r.bits.shape, dtype=np.int64)
    index[ys, xs] = np.arange(xs.size)
    steps = int(np.ceil(max(fx, fy, 1.0))) + 2
    t = np.linspace(0.0, 1.0, steps)
    padded = np.pad(index, 1, constant_values=-1)
    for dy, dx in ((0, 1), (1, -1), (1, 0), (1, 1)):
        nb = padded[1 + ys + dy, 1 + xs + dx]
        ok = nb >= 0
        if not ok.any():
            continue
        a, b = np.nonzero(ok)[0], nb[ok]
        sx = mx[a][:, None] + (mx[b] - mx[a])[:, None] * t
        sy = my[a][:, None] + (my[b] - my[a])[:, None] * t
        out[np.clip(np.rint(sy), 0, height - 1).astype(np.int64),
            np.clip(np.rint(sx), 0, width - 1).astype(np.int64)] = True
    return BinaryRaster(out), NormalizationReport(fx, fy)


# ---------------------------------------------------------------- thinning

def _zs_numpy(img: np.ndarray) -> np.ndarray:
    """Zhang-Suen on a zero-padded uint8 image, vectorized per sub-iteration."""
    img = img.copy()
    while True:
        changed = False
        for step in (0, 1):
            c = img[1:-1, 1:-1]
            p2, p3, p4 = img[:-2, 1:-1], img[:-2, 2:], img[1:-1, 2:]
            p5, p6, p7 = img[2:, 2:], img[2:, 1:-1], img[2:, :-2]
            p8, p9 = img[1:-1, :-2], img[:-2, :-2]
            ring = (p2, p3, p4, p5, p6, p7, p8, p9, p2)
            nbrs = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9
            trans = sum(((ring[k] == 0) & (ring[k + 1] == 1)).astype(np.uint8) for k in range(8))
            if step == 0:
                cond = (p2 * p4 * p6 == 0) & (p4 * p6 * p8 == 0)
            else:
                cond = (p2 * p4 * p8 == 0) & (p2 * p6 * p8 == 0)
            kill = (c == 1) & (nbrs >= 2) & (nbrs <= 6) & (trans == 1) & cond
            if kill.any():
                c[kill] = 0
                changed = True
        if not changed:
            return img


def _zs_loops(img):
    img = img.copy()
    h, w = img.shape
    marks = np.zeros_like(img)
    changed = True
    while changed:
        changed = False
        for step in range(2):
            marks[:, :] = 0
            for y in range(1, h - 1):
                for x in range(1, w - 1):
                    if img[y, x] == 0:
                        continue
                    p2 = img[y - 1, x]
                    p3 = img[y - 1, x + 1]
                    p4 = img[y, x + 1]
                    p5 = img[y + 1, x + 1]
                    p6 = img[y + 1, x]
                    p7 = img[y + 1, x - 1]
                    p8 = img[y, x - 1]
                    p9 = img[y - 1, x - 1]
                    n = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9
                    if n < 2 or n > 6:
                        continue
                    t = ((p2 == 0) & (p3 == 1)) + ((p3 == 0) & (p4 == 1)) + ((p4 == 0) & (p5 == 1)) \
                        + ((p5 == 0) & (p6 == 1)) + ((p6 == 0) & (p7 == 1)) + ((p7 == 0) & (p8 == 1)) \
                        + ((p8 == 0) & (p9 == 1)) + ((p9 == 0) & (p2 == 1))
                    if t != 1:
                        continue
                    if step == 0:
                        if p2 * p4 * p6 != 0 or p4 * p6 * p8 != 0:
                            continue
                    else:
                        if p2 * p4 * p8 != 0 or p2 * p6 * p8 != 0:
                            continue
                    marks[y, x] = 1
            for y in range(1, h - 1):
                for x in range(1, w - 1):
                    if marks[y, x]:
                        img[y, x] = 0
                        changed = True
    return img


_zs_numba = _accel.njit(_zs_loops)


def _prune_loops(img):
    """Delete simple non-end pixels (Yokoi 8-connectivity number 1), in raster order.

    Clears the staircase corners and 2x2 knots Zhang-Suen leaves behind without
    changing topology; end pixels (one neighbour) are never touched.
    """
    h, w = img.shape
    ring = np.zeros(9, dtype=np.int64)
    removed = 0
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            if img[y, x] == 0:
                continue
            ring[0] = img[y - 1, x]
            ring[1] = img[y - 1, x + 1]
            ring[2] = img[y, x + 1]
            ring[3] = img[y + 1, x + 1]
            ring[4] = img[y + 1, x]
            ring[5] = img[y + 1, x - 1]
            ring[6] = img[y, x - 1]
            ring[7] = img[y - 1, x - 1]
            ring[8] = ring[0]
            n = 0
            for k in range(8):
                n += ring[k]
            if n < 2 or n == 8:
                continue
            conn = 0
            for k in range(0, 8, 2):
                a = 1 - ring[k]
                conn += a - a * (1 - ring[k + 1]) * (1 - ring[k + 2])
            if conn == 1:
                img[y, x] = 0
                removed += 1
    return removed


_prune_numba = _accel.njit(_prune_loops)


def zhang_suen(img: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    """Run Zhang-Suen on a zero-padded uint8 image with the selected backend."""
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    if use_numba and _zs_numba is not None:
        return _zs_numba(img)
    return _zs_numpy(img)


def thin(r: BinaryRaster, use_numba: bool | None = None) -> BinaryRaster:
    """Reduce strokes to unit width: Zhang-Suen plus simple-point pruning, iterated to a fixed point."""
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    img = np.pad(r.bits.astype(np.uint8), 1)
    if not img.any():
        return BinaryRaster(r.bits.copy())
    prune = _prune_numba if (use_numba and _prune_numba is not None) else _prune_loops
    while True:
        img = zhang_suen(img, use_numba)
        if prune(img) == 0:
            break
    return BinaryRaster(img[1:-1, 1:-1].astype(bool))


def neighbour_counts(bits: np.ndarray) -> np.ndarray:
    """8-neighbour ink count for every cell."""
    img = np.pad(bits.astype(np.int16), 1)
    h, w = bits.shape
    total = np.zeros((h, w), dtype=np.int16)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy or dx:
                total += img[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]
    return total
