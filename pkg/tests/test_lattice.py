import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelfm import lattice
from abelfm.lattice import (DIAGONAL, E, F, NSClass, SL2Element, act, brute_force_conic_points, cone_generators,
                            induced_action, ns_intersect, on_conic, orbit_transitivity, preserves_form,
                            random_sl2, reverse_schwarz_check, slope_curve)

coprime = st.tuples(st.integers(-30, 30), st.integers(-30, 30)).filter(lambda p: math.gcd(*p) == 1)
words = st.lists(st.sampled_from(lattice.STANDARD_GENERATORS), min_size=0, max_size=10)


def _word(gs):
    g = SL2Element(1, 0, 0, 1)
    for h in gs:
        g = g @ h
    return g


def test_basic_products():
    assert ns_intersect(E, F) == 1
    assert ns_intersect(E, E) == 0
    assert ns_intersect(slope_curve(2, 3), E) == 9


@pytest.mark.parametrize("ab, expected", [((1, 0), E), ((0, 1), F), ((1, 1), DIAGONAL)])
def test_slope_curve_examples(ab, expected):
    assert slope_curve(*ab) == expected


def test_slope_curve_needs_coprime():
    with pytest.raises(ValueError):
        slope_curve(2, 4)


@given(coprime)
def test_slope_curve_intersections(ab):
    a, b = ab
    u = slope_curve(a, b)
    assert on_conic(u)
    assert (ns_intersect(u, E), ns_intersect(u, F), ns_intersect(u, DIAGONAL)) == (b * b, a * a, (a - b) ** 2)


def test_identity_and_swap():
    assert induced_action(SL2Element(1, 0, 0, 1)) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    g = SL2Element(0, -1, 1, 0)
    assert act(g, E) == slope_curve(0, -1) == F
    assert act(g, F) == slope_curve(1, 0) == E


def test_bad_determinant():
    with pytest.raises(ValueError):
        SL2Element(1, 1, 1, 1)


@given(words)
def test_form_preserved(gs):
    assert preserves_form(_word(gs))


@given(words, words)
def test_homomorphism(g1, g2):
    g, h = _word(g1), _word(g2)
    lhs = np.array(induced_action(g @ h), dtype=object)
    rhs = np.array(induced_action(g), dtype=object).dot(np.array(induced_action(h), dtype=object))
    assert (lhs == rhs).all()


@given(words)
def test_action_on_E_is_slope_curve(gs):
    g = _word(gs)
    assert act(g, E) == slope_curve(g.a, g.b)


def test_random_elements_preserve_form():
    rng = random.Random(2024)
    assert all(preserves_form(random_sl2(rng)) for _ in range(100))


@pytest.mark.parametrize("h", [1, 2, 3, 4, 6, 8, 12, 16])
def test_cone_generators_match_brute_force(h):
    assert cone_generators(h) == brute_force_conic_points(h)


def test_cone_height_one_and_two():
    assert set(cone_generators(1)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    gens = cone_generators(2)
    assert (2, 2, -1) in gens
    assert slope_curve(1, -1).as_ints() == (2, 2, -1)
    assert all(on_conic(u) for u in gens)


def test_orbit_examples():
    assert (0, 1, 0) in orbit_transitivity(1).reached
    assert (0, 0, 1) in orbit_transitivity(2).reached


@pytest.mark.parametrize("h", [1, 2, 5, 10, 16])
def test_orbit_misses_nothing(h):
    assert orbit_transitivity(h).missed == ()


def test_schwarz_examples():
    assert ns_intersect(E, E) ** 2 >= ns_intersect(E, E) * ns_intersect(E, E)
    assert ns_intersect(E, F) ** 2 == 1 > ns_intersect(E, E) * ns_intersect(F, F)
    D, H = E + F, E + F + DIAGONAL
    # (D.H)^2 = 16, D.D = 2, H.H = 6
    assert (ns_intersect(D, H), ns_intersect(D, D), ns_intersect(H, H)) == (4, 2, 6)


@pytest.mark.parametrize("h", [1, 2, 4, 8])
def test_schwarz_holds(h):
    r = reverse_schwarz_check(h)
    assert r.ok and r.classes > 0


def test_schwarz_brute_force_pairs_height_2():
    # oracle: pure-python loop over the same enumeration
    X = [tuple(int(v) for v in row) for row in lattice.effective_classes(2)]
    for d, h in itertools.combinations_with_replacement(X, 2):
        u, v = NSClass(*d), NSClass(*h)
        assert ns_intersect(u, v) ** 2 >= ns_intersect(u, u) * ns_intersect(v, v)
