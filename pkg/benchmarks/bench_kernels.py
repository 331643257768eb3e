"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Covers the greedy graph deviation (called for every scored glyph) and the
thinning pass (called twice per image). Both backends are checked for equal
results before timing.
"""
from __future__ import annotations

import argparse
import sys
import timeit
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from glyphga import Params, _accel  # noqa: E402
from glyphga.deviation import greedy_arrays  # noqa: E402
from glyphga.raster import thin  # noqa: E402
from glyphga.synth import template_images, test_images  # noqa: E402
from glyphga.recognizer import glyph_from_raster  # noqa: E402


def _time(fn, repeat: int) -> float:
    fn()  # warm-up (triggers JIT compilation)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_deviation(repeat: int) -> tuple[float, float]:
    p = Params()
    glyphs = [glyph_from_raster(r, p) for _, r, _ in template_images()[:20]]
    pairs = [(a.edge_array, b.edge_array) for a in glyphs for b in glyphs]

    def run(flag):
        return lambda: [greedy_arrays(a, b, p.beta, p.eta, use_numba=flag) for a, b in pairs]

    x, y = run(True)(), run(False)()
    assert np.allclose(x, y), "backends disagree"
    return _time(run(True), repeat) / len(pairs), _time(run(False), repeat) / len(pairs)


def bench_thin(repeat: int) -> tuple[float, float]:
    images = [r for _, r, _ in test_images(per_char=1, seed=0, size=160)[:10]]

    def run(flag):
        return lambda: [thin(r, use_numba=flag) for r in images]

    assert all(a == b for a, b in zip(run(True)(), run(False)())), "backends disagree"
    return _time(run(True), repeat) / len(images), _time(run(False), repeat) / len(images)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.USE_NUMBA:
        print("numba disabled or missing; nothing to compare")
        return 1
    print(f"{'kernel':<22}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for name, fn in (("graph deviation", bench_deviation), ("thinning (160 px)", bench_thin)):
        nb, npy = fn(args.repeat)
        print(f"{name:<22}{nb * 1e6:>10.1f}us{npy * 1e6:>10.1f}us{npy / nb:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
