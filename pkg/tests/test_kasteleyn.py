import random
from fractions import Fraction as Q

import pytest

from dimerlab import fixtures, kasteleyn as K, torusgraph as tg
from dimerlab.errors import NoOrientation, ZeroDeterminant
from dimerlab.exactalg import LaurentPoly2 as LP

from conftest import CONSISTENT
from oracles import leibniz_det

x, y = LP.x(), LP.y()


def test_hex1_orientation(hex1):
    assert K.kasteleyn_orientation(hex1) == (1, 1, 1)


def test_sq1_orientation(sq1):
    kappa = K.kasteleyn_orientation(sq1)
    assert kappa == (-1, 1, 1, 1)
    assert K.check_orientation(sq1, kappa)


def test_odd_vertex_count_has_no_orientation():
    g = fixtures.graph("trivial-class")
    assert (g.black_count, g.white_count) == (2, 1)
    with pytest.raises(NoOrientation):
        K.kasteleyn_orientation(g)


@pytest.mark.parametrize("name", CONSISTENT)
def test_orientation_face_rule(name):
    g = fixtures.graph(name)
    kappa = K.kasteleyn_orientation(g)
    for f in g.faces():
        prod = 1
        for e, _ in f.boundary:
            prod *= kappa[e]
        assert prod == (-1 if len(f) % 4 == 0 else 1)


def test_fixed_signs_respected(sq2):
    kappa = K.kasteleyn_orientation(sq2, fixed={0: -1, 5: -1})
    assert kappa[0] == -1 and kappa[5] == -1
    assert K.check_orientation(sq2, kappa)


def test_matrices(hex1, sq1):
    assert K.kasteleyn_matrix(hex1).matrix == ((1 + x + y,),)
    assert K.kasteleyn_matrix(sq1).matrix == ((-1 + x + y + x * y,),)
    w = K.unit_weights(hex1)
    w[1] = Q(5)
    assert K.kasteleyn_matrix(hex1, w).det == 1 + 5 * x + y


def test_normalize(hex1, sq1):
    assert K.spectral_rendering(hex1) == "1 + y + x"
    assert K.normalize_spectral(K.kasteleyn_matrix(sq1).det) == 1 - x - y - x * y
    f = 3 - x + Q(1, 2) * y * y
    assert K.normalize_spectral(f * LP.monomial(Q(-7, 3), 4, -5)) == K.normalize_spectral(f)
    with pytest.raises(ZeroDeterminant):
        K.normalize_spectral(LP())


def test_apply_gauge(hex1):
    w = K.unit_weights(hex1)
    assert K.apply_gauge(hex1, w, {}, {}) == w
    w3 = K.apply_gauge(hex1, w, {}, {0: Q(3)})
    assert K.kasteleyn_matrix(hex1, w3).det == 3 * (1 + x + y)
    assert K.spectral_rendering(hex1, w3) == K.spectral_rendering(hex1, w)
    with pytest.raises(ValueError):
        K.apply_gauge(hex1, w, {0: 0}, {})


def test_gauge_scales_det(sq2):
    rng = random.Random(9)
    w = K.random_weights(sq2, rng)
    gb = {i: K.random_unit(rng) for i in range(sq2.black_count)}
    gw = {j: K.random_unit(rng) for j in range(sq2.white_count)}
    scale = Q(1)
    for v in gw.values():
        scale *= v
    for v in gb.values():
        scale /= v
    assert K.kasteleyn_matrix(sq2, K.apply_gauge(sq2, w, gb, gw)).det == K.kasteleyn_matrix(sq2, w).det * scale


def test_matchings_examples(hex1, sq1):
    ms = K.enumerate_matchings(hex1)
    assert sorted(m.cls for m in ms) == [(0, 0), (0, 1), (1, 0)]
    assert all(m.weight == 1 for m in ms)
    assert sorted(m.cls for m in K.enumerate_matchings(sq1)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert K.enumerate_matchings(fixtures.graph("trivial-class")) == []
    table = K.matching_table(K.enumerate_matchings(fixtures.graph("hex4")))
    assert list(table) == sorted(table)


def test_matchings_cover_each_vertex_once():
    g = fixtures.graph("sq2")
    for m in K.enumerate_matchings(g):
        assert sorted(g.edges[e].black for e in m.edges) == list(range(g.black_count))
        assert sorted(g.edges[e].white for e in m.edges) == list(range(g.white_count))


def test_sign_theorem_small(hex1, sq1):
    rep = K.sign_theorem_check(hex1)
    assert rep.signs == {(0, 0): 1, (0, 1): 1, (1, 0): 1}
    assert all(c == s == 1 for _, c, s in rep.rows)
    rep = K.sign_theorem_check(sq1)
    assert all(abs(c) == 1 for _, c, _ in rep.rows)
    assert sorted(rep.signs.values()) == [-1, 1, 1, 1]
    assert rep.signs[(0, 0)] == -1
    assert rep.render().splitlines()[0] == "OK"


def test_sign_theorem_sq2_random(sq2):
    rng = random.Random(2024)
    for _ in range(3):
        K.sign_theorem_check(sq2, K.random_weights(sq2, rng))


@pytest.mark.parametrize("name", ["hex1", "sq1", "hex2", "hex3", "sq4"])
def test_det_against_leibniz(name):
    g = fixtures.graph(name)
    kd = K.kasteleyn_matrix(g, K.random_weights(g, random.Random(name)))
    assert leibniz_det([list(r) for r in kd.matrix]) == kd.det


@pytest.mark.parametrize("name", CONSISTENT)
def test_polygon_agreement(name):
    zz, det = K.polygon_agreement(fixtures.graph(name))
    assert zz == det


@pytest.mark.parametrize("name", ["hex2", "sq2"])
def test_gauge_invariance(name):
    K.gauge_invariance_check(fixtures.graph(name), random.Random(5), gauges=10, offsets=5)


def test_offset_gauge_is_monomial_factor(hex1):
    h = tg.offset_gauge(hex1, {("w", 0): (1, 0)})
    assert K.kasteleyn_matrix(h).det == x * (1 + x + y)


def test_corank_examples(hex1, sq2):
    kd = K.kasteleyn_matrix(hex1)
    assert K.evaluate_corank(kd, Q(-1, 2), Q(-1, 2)) == 1
    assert K.evaluate_corank(kd, 1, 1) == 0
    with pytest.raises(ValueError):
        K.evaluate_corank(kd, 0, 1)
    rng = random.Random(17)
    x0, y0 = Q(-2, 3), Q(5, 4)
    w = K.curve_point_weighting(sq2, x0, y0, rng)
    kd = K.kasteleyn_matrix(sq2, w)
    assert kd.det.evaluate(x0, y0) == 0
    assert K.evaluate_corank(kd, x0, y0) == 1


@pytest.mark.parametrize("name", ["hex2", "sq1", "sq4"])
def test_corank_iff_det_vanishes(name):
    g = fixtures.graph(name)
    rng = random.Random(name)
    kd = K.kasteleyn_matrix(g, K.random_weights(g, rng))
    for _ in range(15):
        x0, y0 = K.random_point(rng)
        assert (K.evaluate_corank(kd, x0, y0) >= 1) == (kd.det.evaluate(x0, y0) == 0)


def test_scalar_det_matches_polynomial(sq2):
    rng = random.Random(1)
    kd = K.kasteleyn_matrix(sq2, K.random_weights(sq2, rng))
    for _ in range(5):
        x0, y0 = K.random_point(rng)
        assert K._scalar_det(K.evaluate_matrix(kd, x0, y0)) == kd.det.evaluate(x0, y0)
