import numpy as np
import pytest

from glyphga import BinaryRaster, EmptyImage, MalformedImage, Params, load_raster, normalize_raster, thin
from glyphga import _accel
from glyphga.raster import _zs_numba, _zs_numpy, to_pbm, to_pgm, zhang_suen

from helpers import zhang_suen_reference


def bar(h, w, y0, y1, x0, x1):
    a = np.zeros((h, w), dtype=bool)
    a[y0:y1, x0:x1] = True
    return a


def random_blobs(rng, h=40, w=40):
    """A few thick random strokes: the kind of input thinning is meant for."""
    a = np.zeros((h, w), dtype=bool)
    for _ in range(rng.integers(1, 4)):
        x0, y0, x1, y1 = rng.integers(3, w - 3, size=4)
        r = int(rng.integers(1, 3))
        for t in np.linspace(0, 1, 80):
            x, y = int(round(x0 + (x1 - x0) * t)), int(round(y0 + (y1 - y0) * t))
            a[max(0, y - r):y + r + 1, max(0, x - r):x + r + 1] = True
    return a


# ---------------------------------------------------------------- Netpbm

def test_smallest_plain_bitmap():
    r = load_raster(b"P1 1 1\n1")
    assert (r.width, r.height, r.ink_count) == (1, 1, 1)


def test_plain_graymap_threshold():
    r = load_raster(b"P2\n2 1\n255\n0 255\n")
    assert r.bits.tolist() == [[True, False]]


def test_binary_graymap_all_dark():
    r = load_raster(b"P5\n3 3\n255\n" + bytes(9))
    assert r.ink_count == 9


def test_header_comments_accepted():
    r = load_raster(b"P1\n# made by hand\n2 # width\n2\n1 0\n0 1\n")
    assert r.bits.tolist() == [[True, False], [False, True]]


def test_packed_bitmap_row_padding():
    # 10 pixels per row pack into 2 bytes; the trailing 6 bits are padding
    r = load_raster(b"P4\n10 2\n" + bytes([0b10000000, 0b01000000, 0, 0b11000000]))
    assert r.bits[0].nonzero()[0].tolist() == [0, 9]
    assert r.bits[1].nonzero()[0].tolist() == [8, 9]


@pytest.mark.parametrize("data", [
    b"P7\n1 1\n1", b"P1\n0 3\n", b"P1\n2 2\n1 0 1", b"P5\n2 2\n255\n\x00", b"", b"P2\n1 1\n0\n0\n",
])
def test_malformed(data):
    with pytest.raises(MalformedImage):
        load_raster(data)


def test_writers_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(20):
        r = BinaryRaster(rng.random((int(rng.integers(1, 20)), int(rng.integers(1, 20)))) < 0.4)
        assert load_raster(to_pbm(r)) == r
        assert load_raster(to_pbm(r, plain=False)) == r
        assert load_raster(to_pgm(r)) == r


# ---------------------------------------------------------------- normalization

def test_full_canvas_is_identity():
    a = np.zeros((100, 100), dtype=bool)
    a[0, 0] = a[99, 99] = True
    a[40, 70] = True
    out, rep = normalize_raster(BinaryRaster(a), Params())
    assert (rep.fx, rep.fy) == (1.0, 1.0)
    assert out == BinaryRaster(a)


def test_double_scale_example():
    a = np.zeros((60, 60), dtype=bool)
    a[0, 0] = a[49, 49] = True
    a[20, 10] = True  # (x=10, y=20)
    out, rep = normalize_raster(BinaryRaster(a), Params())
    assert (rep.fx, rep.fy) == (2.0, 2.0)
    assert out.bits[40, 20]


def test_single_pixel_is_centred():
    a = np.zeros((30, 30), dtype=bool)
    a[7, 21] = True
    out, rep = normalize_raster(BinaryRaster(a), Params())
    assert (rep.fx, rep.fy) == (1.0, 1.0)
    assert out.bits.nonzero() == (np.array([50]), np.array([50]))


def test_empty_raises():
    with pytest.raises(EmptyImage):
        normalize_raster(BinaryRaster.blank(5, 5), Params())


def test_output_touches_all_margins():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = random_blobs(rng)
        out, _ = normalize_raster(BinaryRaster(a), Params())
        ys, xs = out.bits.nonzero()
        assert xs.min() <= 1 and ys.min() <= 1 and xs.max() >= 98 and ys.max() >= 98


def test_upscaled_stroke_stays_connected():
    a = np.zeros((20, 20), dtype=bool)
    for k in range(20):
        a[k, k] = True
    out, _ = normalize_raster(BinaryRaster(a), Params())
    assert all(out.bits[k, k] for k in range(100))


# ---------------------------------------------------------------- thinning

def test_thin_line_unchanged():
    a = bar(9, 30, 4, 5, 2, 28)
    assert thin(BinaryRaster(a)) == BinaryRaster(a)


def test_thick_bar_becomes_one_pixel_line():
    a = bar(11, 40, 4, 7, 5, 35)
    out = thin(BinaryRaster(a)).bits
    ref = zhang_suen_reference(np.pad(a, 1))[1:-1, 1:-1]
    assert out.sum(axis=0).max() == 1
    assert abs(out.any(axis=0).sum() - ref.any(axis=0).sum()) <= 1


def test_thin_empty():
    assert thin(BinaryRaster.blank(7, 4)) == BinaryRaster.blank(7, 4)


def test_zhang_suen_matches_reference():
    rng = np.random.default_rng(2)
    for _ in range(25):
        img = np.pad(random_blobs(rng, 30, 30), 1).astype(np.uint8)
        want = zhang_suen_reference(img)
        assert np.array_equal(_zs_numpy(img).astype(bool), want)
        if _zs_numba is not None:
            assert np.array_equal(zhang_suen(img, use_numba=True).astype(bool), want)


def test_thin_idempotent_and_subset():
    rng = np.random.default_rng(3)
    for _ in range(25):
        r = BinaryRaster(random_blobs(rng))
        t = thin(r)
        assert not (t.bits & ~r.bits).any()
        assert thin(t) == t


@pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba unavailable")
def test_thin_backends_agree():
    rng = np.random.default_rng(4)
    for _ in range(15):
        r = BinaryRaster(random_blobs(rng))
        assert thin(r, use_numba=True) == thin(r, use_numba=False)
