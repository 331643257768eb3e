import numpy as np
import pytest

from glyphga import BothNull, Edge, Glyph, Params, edge_deviation, graph_deviation
from glyphga.deviation import (
    d1,
    d2,
    graph_deviation_reference,
    greedy_arrays,
    greedy_numpy,
    _greedy_numba,
)

from helpers import optimal_assignment_deviation, random_glyph

P = Params()
L = Edge.line((0, 0), (10, 0))


def test_d1_examples():
    assert d1(L, L, P) == 0
    assert d1(L, Edge.line((2, 0), (10, 4)), P) == 20
    assert d1(L, Edge.curve((0, 0), (10, 0), (5, 5)), P) == P.eta


def test_d2_examples():
    assert d2(L, L.reversed(), P) == 0
    assert d2(L, L, P) == 200


def test_d2_near_closed_uses_max_points():
    a = Edge.curve((0, 0), (2, 0), (0, 20))
    b = Edge.curve((3, 1), (0, 1), (1, 22))
    # crossed: start(a) vs max(b), max(a) vs start(b)
    want = (0 - 1) ** 2 + (0 - 22) ** 2 + (0 - 3) ** 2 + (20 - 1) ** 2
    assert d2(a, b, P) == want


def test_near_closed_rule_is_symmetric():
    closed = Edge.curve((0, 0), (1, 0), (0, 20))
    open_ = Edge.curve((0, 0), (40, 0), (20, 15))
    assert edge_deviation(closed, open_, P) == edge_deviation(open_, closed, P)


def test_edge_deviation_null_cases():
    assert edge_deviation(Edge.line((0, 0), (3, 4)), None, P) == 25
    assert edge_deviation(None, Edge.curve((0, 0), (0.5, 0), (0, 20)), P) == 400
    with pytest.raises(BothNull):
        edge_deviation(None, None, P)


def test_graph_deviation_examples():
    g1 = Glyph.from_edges([L])
    g2 = Glyph.from_edges([L, Edge.line((0, 0), (0, 6))])
    assert graph_deviation(g1, g2, P) == 36
    assert graph_deviation(Glyph(), Glyph.from_edges([Edge.line((0, 0), (3, 4))]), P) == 25
    assert graph_deviation(Glyph(), Glyph(), P) == 0


def test_self_deviation_zero():
    rng = np.random.default_rng(11)
    for _ in range(200):
        g = random_glyph(rng)
        assert graph_deviation(g, g, P) == 0.0


def test_greedy_never_beats_optimum():
    rng = np.random.default_rng(12)
    for _ in range(150):
        g1, g2 = random_glyph(rng), random_glyph(rng)
        assert graph_deviation(g1, g2, P) >= optimal_assignment_deviation(g1, g2, P) - 1e-9


def test_symmetric_in_arguments():
    rng = np.random.default_rng(13)
    for _ in range(100):
        g1, g2 = random_glyph(rng), random_glyph(rng)
        assert graph_deviation(g1, g2, P) == pytest.approx(graph_deviation(g2, g1, P))


def test_array_kernel_matches_object_reference():
    rng = np.random.default_rng(14)
    for _ in range(200):
        g1, g2 = random_glyph(rng), random_glyph(rng)
        assert graph_deviation(g1, g2, P) == pytest.approx(graph_deviation_reference(g1, g2, P), abs=1e-9)


@pytest.mark.skipif(_greedy_numba is None, reason="numba unavailable")
def test_numba_and_numpy_agree():
    rng = np.random.default_rng(15)
    for _ in range(200):
        a, b = random_glyph(rng).edge_array, random_glyph(rng).edge_array
        x = greedy_arrays(a, b, P.beta, P.eta, use_numba=True)
        assert x == pytest.approx(greedy_numpy(a, b, P.beta, P.eta), abs=1e-9)


def test_translation_is_detected():
    rng = np.random.default_rng(16)
    for _ in range(50):
        g = random_glyph(rng)
        assert graph_deviation(g, g.translate(0.5, 0), P) > 0


def test_extra_edge_can_lower_deviation():
    # the new edge takes over a costly pairing; its old partner becomes a cheaper leftover
    g1 = Glyph.from_edges([L])
    g2 = Glyph.from_edges([Edge.line((0, 0), (0, 90))])
    assert graph_deviation(g1, g2, P) == 8200
    g3 = Glyph.from_edges(g2.edges + (Edge.line((0, 0), (10, 1)),))
    assert graph_deviation(g1, g3, P) == 1 + 8100


def test_unpaired_extra_edge_adds_its_null_cost():
    rng = np.random.default_rng(17)
    for _ in range(100):
        g1 = random_glyph(rng, max_edges=3)
        g2 = random_glyph(rng, max_edges=6)
        if len(g2.edges) < len(g1.edges):
            continue
        # every g1 edge already has a partner, so an edge far off-canvas stays a leftover
        extra = Edge.line((5000, 5000), (5000, 5000 + rng.uniform(1, 50)))
        bigger = Glyph.from_edges(g2.edges + (extra,))
        got = graph_deviation(g1, bigger, P)
        assert got == pytest.approx(graph_deviation(g1, g2, P) + edge_deviation(extra, None, P))
