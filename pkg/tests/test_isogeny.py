from fractions import Fraction

import pytest
import sympy
from hypothesis import given

from abelfm import isogeny
from abelfm.isogeny import (CohMap, apply, compose, degree_identity_failures, identity_map, phi_pullback,
                            phi_pushforward, projection_formula_failures, ring_homomorphism_failures, scaled)
from abelfm.ring import ModelMismatchError, builtin_model

from conftest import classes


def _sym(m):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m])


def test_pullback_table(V, W):
    pull = phi_pullback()
    assert pull(W.cls("H^")) == 8 * V.cls("H")
    assert pull(W.cls("E^")) == 8 * V.cls("l")
    assert pull(W.cls("e^")) == 64 * V.cls("e")
    assert pull(W.one()) == V.one()


def test_pushforward_table(V, W):
    push = phi_pushforward()
    assert push(V.cls("H")) == 8 * W.cls("H^")
    assert push(V.cls("l")) == 8 * W.cls("E^")
    assert push(V.one()) == 64 * W.one()
    assert push(V.point()) == W.point()


def test_degree_identity_by_matrix_product(W):
    # oracle: multiply the two explicit matrices independently
    prod = _sym(phi_pushforward().matrix) * _sym(phi_pullback().matrix)
    assert prod == 64 * sympy.eye(6)
    assert compose(phi_pushforward(), phi_pullback()) == scaled(identity_map(W), 64)


def test_reverse_composite_on_H(V):
    f = compose(phi_pullback(), phi_pushforward())
    assert f(V.cls("H")) == 64 * V.cls("H")


def test_compose_with_identity():
    f = phi_pullback()
    assert compose(identity_map(f.target), f) == f
    assert compose(f, identity_map(f.source)) == f


def test_compose_mismatch():
    with pytest.raises(ModelMismatchError):
        compose(phi_pullback(), phi_pullback())


def test_pull_of_top_power(V, W):
    # pull(H^3) = 512 H^3 = 8192 pt = pull(128 pt)
    H = W.cls("H^")
    assert phi_pullback()(H ** 3) == 8192 * V.point()


def test_all_law_suites_clean():
    assert ring_homomorphism_failures() == []
    assert projection_formula_failures() == []
    assert degree_identity_failures() == []


def test_law_checker_catches_a_bad_map(V, W):
    images = {lab: phi_pullback().column(lab) for lab in W.labels}
    images["E^"] = 7 * V.cls("l")
    bad = CohMap.from_images(W, V, images, "pullback")
    assert ring_homomorphism_failures(bad)


@given(classes("Vdual"), classes("Vdual"))
def test_pullback_multiplicative(x, y):
    pull = phi_pullback()
    assert pull(x * y) == pull(x) * pull(y)


@given(classes("V"), classes("Vdual"))
def test_projection_formula_random(x, y):
    pull, push = phi_pullback(), phi_pushforward()
    assert push(x * pull(y)) == push(x) * y


@given(classes("Vdual"))
def test_integrals_scale_by_degree(y):
    # integral over V of pull(y) is 64 times the integral over V^
    from abelfm.ring import integrate
    assert integrate(phi_pullback()(y)) == isogeny.ISOGENY_DEGREE * integrate(y)


def test_pullback_of_square(V, W):
    H = W.cls("H^")
    assert apply(phi_pullback(), H * H) == V.parse("1024[e] + 1024[l]") == 64 * V.cls("H") ** 2


def test_linearity_examples(V, W):
    assert phi_pullback()(W.parse("[H^] + [A^]")) == V.parse("8[H] + [A]")
    assert phi_pushforward()(V.parse("[e] + [l]")) == W.parse("[e^] + 8[E^]")
    assert phi_pushforward()(V.zero()) == W.zero()
