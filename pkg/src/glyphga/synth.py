"""Synthetic block-capital corpus: stroke definitions, rendering, jitter.

Each style is a set of named anchor points in the unit square (x right,
y down) plus strokes over them. Jitter moves anchors, so strokes that share
an anchor stay connected. Points written as ``("lerp", a, b, t)`` are derived
after jitter, which keeps crossbar ends on their legs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import CURVE, LINE, Glyph, squared_distance
from .raster import BinaryRaster, to_pbm

# stroke forms: ("L", a, b) segment, ("Q", a, m, b) quadratic from a to b passing through m,
# ("A", a, m, b) half ellipse from a through m to b, ("E", c, rx, ry) closed ellipse starting at its top
STYLES: dict[str, list[tuple[dict, list]]] = {}


def _style(ch: str, points: dict, strokes: list) -> None:
    STYLES.setdefault(ch, []).append((points, strokes))


def _lerp(a, b, t):
    return ("lerp", a, b, t)


# A
_style("A", {"a": (0.5, 0.0), "bl": (0.0, 1.0), "br": (1.0, 1.0),
             "cl": _lerp("bl", "a", 0.45), "cr": _lerp("br", "a", 0.45)},
       [("L", "bl", "cl"), ("L", "cl", "a"), ("L", "a", "cr"), ("L", "cr", "br"), ("L", "cl", "cr")])
_style("A", {"tl": (0.35, 0.0), "tr": (0.65, 0.0), "bl": (0.0, 1.0), "br": (1.0, 1.0),
             "cl": _lerp("bl", "tl", 0.4), "cr": _lerp("br", "tr", 0.4)},
       [("L", "bl", "cl"), ("L", "cl", "tl"), ("L", "tl", "tr"), ("L", "tr", "cr"), ("L", "cr", "br"),
        ("L", "cl", "cr")])
_style("A", {"bl": (0.0, 1.0), "br": (1.0, 1.0), "top": (0.5, 0.0), "l": (0.1, 0.55), "r": (0.9, 0.55)},
       [("L", "bl", "l"), ("Q", "l", "top", "r"), ("L", "r", "br"), ("L", "l", "r")])
# B
_style("B", {"tl": (0.0, 0.0), "ml": (0.0, 0.5), "bl": (0.0, 1.0), "t": (0.8, 0.25), "b": (1.0, 0.75)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("A", "tl", "t", "ml"), ("A", "ml", "b", "bl")])
_style("B", {"tl": (0.0, 0.0), "ml": (0.0, 0.45), "bl": (0.0, 1.0), "t1": (0.75, 0.0), "t2": (0.75, 0.45),
             "b": (1.0, 0.72)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "tl", "t1"), ("L", "t1", "t2"), ("L", "t2", "ml"),
        ("A", "ml", "b", "bl")])
_style("B", {"tl": (0.0, 0.0), "ml": (0.0, 0.5), "bl": (0.0, 1.0), "t1": (0.8, 0.0), "t2": (0.8, 0.5),
             "b1": (1.0, 0.5), "b2": (1.0, 1.0)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "tl", "t1"), ("L", "t1", "t2"), ("L", "t2", "ml"),
        ("L", "t2", "b1"), ("L", "b1", "b2"), ("L", "b2", "bl")])
# C
_style("C", {"t": (0.95, 0.1), "m": (0.0, 0.5), "b": (0.95, 0.9)}, [("A", "t", "m", "b")])
_style("C", {"tr": (1.0, 0.0), "tl": (0.0, 0.0), "bl": (0.0, 1.0), "br": (1.0, 1.0)},
       [("L", "tr", "tl"), ("L", "tl", "bl"), ("L", "bl", "br")])
_style("C", {"t": (1.0, 0.2), "tm": (0.3, 0.0), "l": (0.0, 0.5), "bm": (0.3, 1.0), "b": (1.0, 0.8)},
       [("Q", "t", "tm", "l"), ("Q", "l", "bm", "b")])
# D
_style("D", {"tl": (0.0, 0.0), "bl": (0.0, 1.0), "r": (1.0, 0.5)}, [("L", "tl", "bl"), ("A", "tl", "r", "bl")])
_style("D", {"tl": (0.0, 0.0), "bl": (0.0, 1.0), "a": (0.65, 0.0), "b": (1.0, 0.3), "c": (1.0, 0.7),
             "d": (0.65, 1.0)},
       [("L", "tl", "bl"), ("L", "tl", "a"), ("L", "a", "b"), ("L", "b", "c"), ("L", "c", "d"), ("L", "d", "bl")])
# E
_style("E", {"tl": (0.0, 0.0), "ml": (0.0, 0.5), "bl": (0.0, 1.0), "tr": (1.0, 0.0), "mr": (0.8, 0.5),
             "br": (1.0, 1.0)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "tl", "tr"), ("L", "ml", "mr"), ("L", "bl", "br")])
_style("E", {"tl": (0.0, 0.0), "ml": (0.0, 0.45), "bl": (0.0, 1.0), "tr": (0.9, 0.05), "mr": (0.55, 0.45),
             "br": (1.0, 0.95)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "tl", "tr"), ("L", "ml", "mr"), ("L", "bl", "br")])
_style("E", {"tr": (1.0, 0.05), "t": (0.15, 0.2), "m": (0.45, 0.5), "b": (0.1, 0.8), "br": (1.0, 0.95)},
       [("Q", "tr", "t", "m"), ("Q", "m", "b", "br")])
# F
_style("F", {"tl": (0.0, 0.0), "ml": (0.0, 0.5), "bl": (0.0, 1.0), "tr": (1.0, 0.0), "mr": (0.8, 0.5)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "tl", "tr"), ("L", "ml", "mr")])
_style("F", {"tl": (0.05, 0.0), "ml": (0.0, 0.55), "bl": (0.0, 1.0), "tr": (1.0, 0.1), "mr": (0.6, 0.55)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "tl", "tr"), ("L", "ml", "mr")])
# G
_style("G", {"t": (1.0, 0.15), "m": (0.0, 0.5), "b": (1.0, 0.85), "bar": (1.0, 0.55), "in": (0.55, 0.55)},
       [("Q", "t", "m", "b"), ("L", "b", "bar"), ("L", "bar", "in")])
_style("G", {"tr": (1.0, 0.0), "tl": (0.0, 0.0), "bl": (0.0, 1.0), "br": (1.0, 1.0), "mr": (1.0, 0.5),
             "in": (0.5, 0.5)},
       [("L", "tr", "tl"), ("L", "tl", "bl"), ("L", "bl", "br"), ("L", "br", "mr"), ("L", "mr", "in")])
_style("G", {"t": (1.0, 0.15), "m": (0.0, 0.5), "b": (0.85, 0.95), "bar": (1.0, 0.5), "in": (0.5, 0.5)},
       [("Q", "t", "m", "b"), ("L", "b", "bar"), ("L", "bar", "in")])
# H
_style("H", {"tl": (0.0, 0.0), "bl": (0.0, 1.0), "tr": (1.0, 0.0), "br": (1.0, 1.0),
             "ml": _lerp("tl", "bl", 0.5), "mr": _lerp("tr", "br", 0.5)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "tr", "mr"), ("L", "mr", "br"), ("L", "ml", "mr")])
_style("H", {"tl": (0.1, 0.0), "bl": (0.0, 1.0), "tr": (0.9, 0.0), "br": (1.0, 1.0),
             "ml": _lerp("tl", "bl", 0.4), "mr": _lerp("tr", "br", 0.4)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "tr", "mr"), ("L", "mr", "br"), ("L", "ml", "mr")])
_style("H", {"tl": (0.0, 0.0), "bl": (0.0, 1.0), "tr": (1.0, 0.0), "br": (1.0, 1.0),
             "ml": _lerp("tl", "bl", 0.6), "mr": _lerp("tr", "br", 0.6)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "tr", "mr"), ("L", "mr", "br"), ("L", "ml", "mr")])
# I
_style("I", {"t": (0.5, 0.0), "b": (0.5, 1.0), "tl": (0.0, 0.0), "tr": (1.0, 0.0), "bl": (0.0, 1.0),
             "br": (1.0, 1.0)},
       [("L", "tl", "t"), ("L", "t", "tr"), ("L", "t", "b"), ("L", "bl", "b"), ("L", "b", "br")])
_style("I", {"t": (0.5, 0.0), "b": (0.5, 1.0), "tl": (0.0, 0.0), "tr": (1.0, 0.0)},
       [("L", "tl", "t"), ("L", "t", "tr"), ("L", "t", "b")])
# J
_style("J", {"t": (1.0, 0.0), "k": (1.0, 0.65), "m": (0.45, 1.0), "e": (0.0, 0.7)},
       [("L", "t", "k"), ("Q", "k", "m", "e")])
_style("J", {"tl": (0.2, 0.0), "t": (0.75, 0.0), "tr": (1.0, 0.0), "k": (0.75, 0.7), "m": (0.35, 1.0),
             "e": (0.0, 0.75)},
       [("L", "tl", "t"), ("L", "t", "tr"), ("L", "t", "k"), ("Q", "k", "m", "e")])
# K
_style("K", {"tl": (0.0, 0.0), "ml": (0.0, 0.5), "bl": (0.0, 1.0), "tr": (1.0, 0.0), "br": (1.0, 1.0)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "ml", "tr"), ("L", "ml", "br")])
_style("K", {"tl": (0.0, 0.0), "ml": (0.0, 0.55), "bl": (0.0, 1.0), "tr": (1.0, 0.0),
             "j": _lerp("ml", "tr", 0.4), "br": (1.0, 1.0)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "ml", "j"), ("L", "j", "tr"), ("L", "j", "br")])
_style("K", {"tl": (0.0, 0.0), "ml": (0.0, 0.45), "bl": (0.0, 1.0), "tr": (0.9, 0.0), "br": (1.0, 1.0)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "ml", "tr"), ("L", "ml", "br")])
# L
_style("L", {"t": (0.0, 0.0), "c": (0.0, 1.0), "r": (1.0, 1.0)}, [("L", "t", "c"), ("L", "c", "r")])
_style("L", {"t": (0.15, 0.0), "c": (0.0, 1.0), "r": (1.0, 0.9)}, [("L", "t", "c"), ("L", "c", "r")])
# M
_style("M", {"bl": (0.0, 1.0), "tl": (0.0, 0.0), "m": (0.5, 0.6), "tr": (1.0, 0.0), "br": (1.0, 1.0)},
       [("L", "bl", "tl"), ("L", "tl", "m"), ("L", "m", "tr"), ("L", "tr", "br")])
_style("M", {"bl": (0.0, 1.0), "tl": (0.15, 0.0), "m": (0.5, 0.95), "tr": (0.85, 0.0), "br": (1.0, 1.0)},
       [("L", "bl", "tl"), ("L", "tl", "m"), ("L", "m", "tr"), ("L", "tr", "br")])
_style("M", {"bl": (0.0, 1.0), "tl": (0.0, 0.0), "m": (0.5, 0.35), "tr": (1.0, 0.0), "br": (1.0, 1.0)},
       [("L", "bl", "tl"), ("L", "tl", "m"), ("L", "m", "tr"), ("L", "tr", "br")])
# N
_style("N", {"bl": (0.0, 1.0), "tl": (0.0, 0.0), "br": (1.0, 1.0), "tr": (1.0, 0.0)},
       [("L", "bl", "tl"), ("L", "tl", "br"), ("L", "br", "tr")])
_style("N", {"bl": (0.0, 1.0), "tl": (0.15, 0.0), "br": (0.85, 1.0), "tr": (1.0, 0.0)},
       [("L", "bl", "tl"), ("L", "tl", "br"), ("L", "br", "tr")])
_style("N", {"bl": (0.0, 1.0), "tl": (0.0, 0.0), "br": (1.0, 1.0), "tr": (1.0, 0.0), "m": (0.35, 0.6)},
       [("L", "bl", "tl"), ("Q", "tl", "m", "br"), ("L", "br", "tr")])
# O
_style("O", {"c": (0.5, 0.5)}, [("E", "c", 0.5, 0.5)])
_style("O", {"t": (0.5, 0.0), "l": (0.0, 0.55), "r": (1.0, 0.55), "b": (0.5, 1.0)},
       [("Q", "t", "l", "b"), ("Q", "b", "r", "t")])
# P
_style("P", {"tl": (0.0, 0.0), "ml": (0.0, 0.55), "bl": (0.0, 1.0), "r": (1.0, 0.27)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("A", "tl", "r", "ml")])
_style("P", {"tl": (0.0, 0.0), "ml": (0.0, 0.5), "bl": (0.0, 1.0), "a": (1.0, 0.0), "b": (1.0, 0.5)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "tl", "a"), ("L", "a", "b"), ("L", "b", "ml")])
_style("P", {"tl": (0.0, 0.0), "ml": (0.0, 0.45), "bl": (0.05, 1.0), "r": (1.0, 0.22)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("A", "tl", "r", "ml")])
# Q
_style("Q", {"c": (0.5, 0.45), "t0": (0.82, 0.77), "t1": (1.0, 1.0)},
       [("E", "c", 0.5, 0.45), ("L", "t0", "t1")])
_style("Q", {"c": (0.5, 0.45), "t0": (0.55, 0.6), "t1": (1.0, 1.0)},
       [("E", "c", 0.5, 0.45), ("L", "t0", "t1")])
# R
_style("R", {"tl": (0.0, 0.0), "ml": (0.0, 0.5), "bl": (0.0, 1.0), "r": (1.0, 0.25), "br": (1.0, 1.0)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("A", "tl", "r", "ml"), ("L", "ml", "br")])
_style("R", {"tl": (0.0, 0.0), "ml": (0.0, 0.5), "bl": (0.0, 1.0), "a": (0.9, 0.0), "b": (0.9, 0.5),
             "br": (1.0, 1.0)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("L", "tl", "a"), ("L", "a", "b"), ("L", "b", "ml"),
        ("L", "b", "br")])
_style("R", {"tl": (0.0, 0.0), "ml": (0.0, 0.5), "bl": (0.0, 1.0), "r": (1.0, 0.25), "j": (0.4, 0.5),
             "br": (1.0, 1.0)},
       [("L", "tl", "ml"), ("L", "ml", "bl"), ("A", "tl", "r", "j"), ("L", "j", "ml"), ("L", "j", "br")])
# S
_style("S", {"t": (0.95, 0.1), "u": (0.05, 0.22), "m": (0.5, 0.5), "d": (0.95, 0.78), "b": (0.05, 0.9)},
       [("Q", "t", "u", "m"), ("Q", "m", "d", "b")])
_style("S", {"a": (1.0, 0.0), "b": (0.0, 0.0), "c": (0.0, 0.5), "d": (1.0, 0.5), "e": (1.0, 1.0),
             "f": (0.0, 1.0)},
       [("L", "a", "b"), ("L", "b", "c"), ("L", "c", "d"), ("L", "d", "e"), ("L", "e", "f")])
_style("S", {"t": (1.0, 0.0), "u": (0.0, 0.2), "m": (0.55, 0.45), "d": (1.0, 0.75), "b": (0.0, 1.0)},
       [("Q", "t", "u", "m"), ("Q", "m", "d", "b")])
# T
_style("T", {"tl": (0.0, 0.0), "t": (0.5, 0.0), "tr": (1.0, 0.0), "b": (0.5, 1.0)},
       [("L", "tl", "t"), ("L", "t", "tr"), ("L", "t", "b")])
_style("T", {"tl": (0.0, 0.05), "t": (0.45, 0.0), "tr": (1.0, 0.0), "b": (0.4, 1.0)},
       [("L", "tl", "t"), ("L", "t", "tr"), ("L", "t", "b")])
_style("T", {"tl": (0.0, 0.0), "t": (0.6, 0.0), "tr": (1.0, 0.05), "b": (0.65, 1.0)},
       [("L", "tl", "t"), ("L", "t", "tr"), ("L", "t", "b")])
# U
_style("U", {"l": (0.0, 0.0), "b": (0.5, 1.0), "r": (1.0, 0.0)}, [("A", "l", "b", "r")])
_style("U", {"l": (0.0, 0.0), "b": (0.45, 1.0), "r": (1.0, 0.6), "tr": (1.0, 0.0), "br": (1.0, 1.0)},
       [("Q", "l", "b", "r"), ("L", "tr", "r"), ("L", "r", "br")])
_style("U", {"l": (0.0, 0.0), "bl": (0.0, 1.0), "br": (1.0, 1.0), "r": (1.0, 0.0)},
       [("L", "l", "bl"), ("L", "bl", "br"), ("L", "br", "r")])
# V
_style("V", {"l": (0.0, 0.0), "b": (0.5, 1.0), "r": (1.0, 0.0)}, [("L", "l", "b"), ("L", "b", "r")])
_style("V", {"l": (0.0, 0.0), "b": (0.35, 1.0), "r": (1.0, 0.05)}, [("L", "l", "b"), ("L", "b", "r")])
_style("V", {"l": (0.0, 0.05), "b": (0.6, 1.0), "r": (1.0, 0.0)}, [("L", "l", "b"), ("L", "b", "r")])
# W
_style("W", {"a": (0.0, 0.0), "b": (0.25, 1.0), "c": (0.5, 0.3), "d": (0.75, 1.0), "e": (1.0, 0.0)},
       [("L", "a", "b"), ("L", "b", "c"), ("L", "c", "d"), ("L", "d", "e")])
_style("W", {"a": (0.0, 0.0), "b": (0.3, 1.0), "c": (0.5, 0.0), "d": (0.7, 1.0), "e": (1.0, 0.0)},
       [("L", "a", "b"), ("L", "b", "c"), ("L", "c", "d"), ("L", "d", "e")])
_style("W", {"a": (0.0, 0.0), "b": (0.2, 1.0), "c": (0.5, 0.55), "d": (0.8, 1.0), "e": (1.0, 0.0)},
       [("L", "a", "b"), ("L", "b", "c"), ("L", "c", "d"), ("L", "d", "e")])
# X
_style("X", {"tl": (0.0, 0.0), "tr": (1.0, 0.0), "bl": (0.0, 1.0), "br": (1.0, 1.0), "c": (0.5, 0.5)},
       [("L", "tl", "c"), ("L", "c", "br"), ("L", "tr", "c"), ("L", "c", "bl")])
_style("X", {"tl": (0.0, 0.0), "tr": (1.0, 0.0), "bl": (0.0, 1.0), "br": (1.0, 1.0), "c": (0.55, 0.4)},
       [("L", "tl", "c"), ("L", "c", "br"), ("L", "tr", "c"), ("L", "c", "bl")])
# Y
_style("Y", {"tl": (0.0, 0.0), "tr": (1.0, 0.0), "c": (0.5, 0.5), "b": (0.5, 1.0)},
       [("L", "tl", "c"), ("L", "tr", "c"), ("L", "c", "b")])
_style("Y", {"tl": (0.0, 0.0), "tr": (1.0, 0.0), "c": (0.55, 0.45), "b": (0.15, 1.0)},
       [("L", "tl", "c"), ("L", "tr", "c"), ("L", "c", "b")])
_style("Y", {"tl": (0.0, 0.0), "tr": (1.0, 0.0), "c": (0.5, 0.35), "b": (0.5, 1.0)},
       [("L", "tl", "c"), ("L", "tr", "c"), ("L", "c", "b")])
# Z
_style("Z", {"tl": (0.0, 0.0), "tr": (1.0, 0.0), "bl": (0.0, 1.0), "br": (1.0, 1.0)},
       [("L", "tl", "tr"), ("L", "tr", "bl"), ("L", "bl", "br")])
_style("Z", {"tl": (0.0, 0.0), "tr": (1.0, 0.0), "bl": (0.0, 1.0), "br": (1.0, 1.0),
             "ml": _lerp("tr", "bl", 0.35), "mr": _lerp("tr", "bl", 0.65)},
       [("L", "tl", "tr"), ("L", "tr", "ml"), ("L", "ml", "mr"), ("L", "mr", "bl"), ("L", "bl", "br"),
        ("L", ("off", "ml", -0.2, 0.05), ("off", "mr", 0.2, -0.05))])


@dataclass(frozen=True)
class Style:
    char: str
    index: int
    points: dict
    strokes: list


def styles() -> list[Style]:
    return [Style(ch, i, pts, strokes) for ch in sorted(STYLES) for i, (pts, strokes) in enumerate(STYLES[ch])]


def _resolve(points: dict, offsets: dict[str, tuple[float, float]] | None = None) -> dict[str, tuple]:
    out = {}
    offsets = offsets or {}
    for name, v in points.items():
        if isinstance(v[0], (int, float)):
            dx, dy = offsets.get(name, (0.0, 0.0))
            out[name] = (v[0] + dx, v[1] + dy)
    for name, v in points.items():
        if v[0] == "lerp":
            a, b, t = out[v[1]], out[v[2]], v[3]
            out[name] = (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)
    return out


def _point(ref, pts):
    if isinstance(ref, tuple) and ref[0] == "off":
        base = pts[ref[1]]
        return (base[0] + ref[2], base[1] + ref[3])
    return pts[ref]


def stroke_polylines(style: Style, offsets=None, samples: int = 64) -> list[np.ndarray]:
    """Dense polylines (unit coordinates) for every stroke of ``style``."""
    pts = _resolve(style.points, offsets)
    out = []
    t = np.linspace(0.0, 1.0, samples)[:, None]
    for s in style.strokes:
        if s[0] == "L":
            a, b = np.array(_point(s[1], pts)), np.array(_point(s[2], pts))
            out.append(a + (b - a) * t)
        elif s[0] == "Q":
            a, m, b = (np.array(_point(r, pts)) for r in s[1:])
            c = 2 * m - (a + b) / 2
            out.append((1 - t) ** 2 * a + 2 * (1 - t) * t * c + t ** 2 * b)
        elif s[0] == "A":
            a, m, b = (np.array(_point(r, pts)) for r in s[1:])
            c = (a + b) / 2
            th = t * math.pi
            out.append(c + (a - c) * np.cos(th) + (m - c) * np.sin(th))
        else:
            c, rx, ry = np.array(pts[s[1]]), s[2], s[3]
            th = np.linspace(0.0, 2 * math.pi, samples * 2)
            out.append(np.stack([c[0] + rx * np.sin(th), c[1] - ry * np.cos(th)], axis=1))
    return out


def render_polylines(lines: list[np.ndarray], size: int = 96, margin: int = 8, radius: float = 1.5) -> BinaryRaster:
    """Stamp a disk brush along unit-square polylines onto a ``size`` x ``size`` raster."""
    span = size - 2 * margin - 1
    img = np.zeros((size, size), dtype=bool)
    r = int(math.ceil(radius))
    dy, dx = np.mgrid[-r:r + 1, -r:r + 1]
    disk = (dx ** 2 + dy ** 2) <= radius ** 2 + 1e-9
    ox, oy = dx[disk], dy[disk]
    for line in lines:
        px = margin + np.clip(line, -0.2, 1.2) * span
        seg = np.diff(px, axis=0)
        n = max(2, int(np.ceil(np.hypot(seg[:, 0], seg[:, 1]).sum() * 3)))
        # resample at ~1/3 pixel spacing
        arc = np.concatenate(([0.0], np.cumsum(np.hypot(seg[:, 0], seg[:, 1]))))
        s = np.linspace(0.0, arc[-1], n)
        xs = np.interp(s, arc, px[:, 0])
        ys = np.interp(s, arc, px[:, 1])
        cx = np.rint(xs)[:, None].astype(int) + ox[None, :]
        cy = np.rint(ys)[:, None].astype(int) + oy[None, :]
        ok = (cx >= 0) & (cx < size) & (cy >= 0) & (cy < size)
        img[cy[ok], cx[ok]] = True
    return BinaryRaster(img)


def render_style(style: Style, offsets=None, size: int = 96, radius: float = 1.5) -> BinaryRaster:
    return render_polylines(stroke_polylines(style, offsets), size=size, radius=radius)


def jitter_offsets(style: Style, rng: np.random.Generator, amount: float = 0.08) -> dict[str, tuple[float, float]]:
    """Uniform independent offsets in [-amount, amount] for every anchor point."""
    out = {}
    for name in sorted(style.points):
        if isinstance(style.points[name][0], (int, float)):
            dx, dy = rng.uniform(-amount, amount, size=2)
            out[name] = (float(dx), float(dy))
    return out


def glyph_polylines(g: Glyph, beta: float, samples: int = 48) -> list[np.ndarray]:
    """Canvas-unit polylines for a glyph: lines straight, open curves as the quadratic
    through ``max_point``, near-closed curves as the circle with diameter start-max_point."""
    out = []
    t = np.linspace(0.0, 1.0, samples)[:, None]
    for e in g.edges:
        s, en, m = np.array(e.start), np.array(e.end), np.array(e.max_point)
        if e.kind is LINE:
            out.append(s + (en - s) * t)
        elif squared_distance(e.start, e.end) < beta * beta:
            c = (s + m) / 2
            r = math.sqrt(squared_distance(e.start, e.max_point)) / 2
            a0 = math.atan2(s[1] - c[1], s[0] - c[0])
            th = a0 + np.linspace(0.0, 2 * math.pi, samples * 2)
            out.append(np.stack([c[0] + r * np.cos(th), c[1] + r * np.sin(th)], axis=1))
        else:
            c = 2 * m - (s + en) / 2
            out.append((1 - t) ** 2 * s + 2 * (1 - t) * t * c + t ** 2 * en)
    return out


def render_glyph(g: Glyph, canvas: tuple[int, int] = (100, 100), size: int = 96, radius: float = 1.5, beta: float = 10.0) -> BinaryRaster:
    """Rasterize a glyph back to an image (canvas coordinates mapped into the unit square)."""
    w, h = canvas
    lines = [np.stack([pl[:, 0] / (w - 1), pl[:, 1] / (h - 1)], axis=1) for pl in glyph_polylines(g, beta=beta)]
    return render_polylines(lines, size=size, radius=radius)


def template_images(size: int = 96) -> list[tuple[str, BinaryRaster, str]]:
    """One clean rendering per style: (char, raster, name)."""
    return [(s.char, render_style(s, size=size), f"{s.char}_style{s.index}") for s in styles()]


def test_images(per_char: int = 4, seed: int = 0, amount: float = 0.08,
                size: int = 96) -> list[tuple[str, BinaryRaster, str]]:
    """Jittered renderings cycling through each character's styles."""
    rng = np.random.default_rng(seed)
    by_char: dict[str, list[Style]] = {}
    for s in styles():
        by_char.setdefault(s.char, []).append(s)
    out = []
    for ch in sorted(by_char):
        for k in range(per_char):
            s = by_char[ch][k % len(by_char[ch])]
            img = render_style(s, jitter_offsets(s, rng, amount), size=size)
            out.append((ch, img, f"{ch}_test{k:02d}_style{s.index}"))
    return out


def write_corpus(root, items) -> list:
    """Write (char, raster, name) items as ``root/<char>/<name>.pbm``; returns the paths."""
    paths = []
    for ch, r, name in items:
        d = Path(root) / ch
        d.mkdir(parents=True, exist_ok=True)
        path = d / f"{name}.pbm"
        path.write_bytes(to_pbm(r, plain=False))
        paths.append(path)
    return paths
