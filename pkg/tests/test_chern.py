from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from abelfm import chern
from abelfm.chern import (ChernClasses, ChernError, NormalBundleData, c_from_ch, ch_from_c, ci_tangent_chern,
                          euler_resolution, grr_push, line_bundle_character, push_sheaf, riemann_roch,
                          spectral_character, spectral_character_from_degree, tensor, todd_inverse_line)
from abelfm.isogeny import CohMap
from abelfm.ring import builtin_model

from conftest import classes


def _series_oracle(n, degrees):
    h = sympy.symbols("h")
    dim = n - len(degrees)
    expr = (1 + h) ** (n + 1)
    for d in degrees:
        expr /= 1 + d * h
    poly = sympy.series(expr, h, 0, dim + 1).removeO()
    return tuple(Fraction(int(poly.coeff(h, k))) for k in range(dim + 1))


# ---------------------------------------------------------------------------
# complete intersections

@pytest.mark.parametrize("n, degrees", [
    (7, (2, 2, 2, 2)), (4, (5,)), (5, (3, 3)), (5, (2, 4)), (6, (2, 2, 3)), (3, ()), (4, (3,)), (3, (4,)),
])
def test_ci_matches_series_oracle(n, degrees):
    assert ci_tangent_chern(n, degrees).coefficients == _series_oracle(n, degrees)


def test_octic_complete_intersection():
    ci = ci_tangent_chern(7, (2, 2, 2, 2))
    assert (ci.c1, ci.c2, ci.c3) == (0, 4, -8)
    assert ci.degree == 16
    assert ci.euler_characteristic == -128


def test_quintic():
    assert ci_tangent_chern(4, (5,)).euler_characteristic == -200


@given(st.integers(3, 9).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(1, 6), min_size=0, max_size=n - 1))))
def test_c1_formula(arg):
    n, degrees = arg
    assert ci_tangent_chern(n, degrees).c1 == n + 1 - sum(degrees)


def test_too_many_equations():
    with pytest.raises(ChernError):
        ci_tangent_chern(2, (2, 2, 2))


@pytest.mark.parametrize("chi, nodes, expected", [(-128, 64, 0), (7, 0, 7), (-200, 0, -200)])
def test_euler_resolution(chi, nodes, expected):
    assert euler_resolution(chi, nodes) == expected


# ---------------------------------------------------------------------------
# Chern characters

def test_ch_of_O_H(V):
    ch = ch_from_c(ChernClasses(1, V.cls("H"), V.zero(), V.zero()))
    # by hand: 1 + H + H^2/2 + H^3/6 = 1 + H + 8e + 8l + 16/6 pt
    assert ch == V.parse("[V] + [H] + 8[e] + 8[l] + 8/3[pt]")


@given(classes("V", degree=2), classes("V", degree=4), classes("V", degree=6), st.integers(0, 6))
def test_ch_c_round_trip(c1, c2, c3, r):
    c = ChernClasses(r, c1, c2, c3)
    back = c_from_ch(ch_from_c(c))
    assert (back.rank, back.c1, back.c2, back.c3) == (r, c1, c2, c3)


@given(classes("V"))
def test_c_ch_round_trip_on_integral_rank(x):
    x = x + (1 - x.coeffs[0]) * x.model.one()
    assert ch_from_c(c_from_ch(x)) == x


def test_c_from_ch_rejects_fractional_rank(V):
    with pytest.raises(ChernError):
        c_from_ch(V.parse("1/2"))


@given(classes("Vdual", degree=2), classes("Vdual", degree=2), classes("Vdual"))
def test_tensor_laws(d1, d2, x):
    L1, L2 = line_bundle_character(d1), line_bundle_character(d2)
    assert tensor(L1, L2) == line_bundle_character(d1 + d2)
    assert tensor(L1, line_bundle_character(-d1)) == d1.model.one()
    assert tensor(x, L1) == tensor(L1, x)
    assert tensor(x, d1.model.one()) == x


@given(classes("V", degree=2))
def test_todd_inverse_is_inverse(d):
    # td(x) = x / (1 - e^-x) = 1 + x/2 + x^2/12 + 0 x^3
    td = d.model.one() + d / 2 + d * d / 12
    assert todd_inverse_line(d) * td == d.model.one()


# ---------------------------------------------------------------------------
# GRR pushforwards, checked against hand expansions

def test_structure_sheaf_of_section(V):
    # td(O(-1)+O(-1))^-1 on P1 = (1 + 1/2 pt)^2 = 1 + pt
    e = chern.section()
    assert e.normal.todd_inverse(e.model) == e.model.parse("1 + [pt]")
    assert push_sheaf(e, e.model.one()) == V.parse("[e] + [pt]")


def test_fiber_twisted(V):
    A = chern.fiber()
    h = A.model.cls("h")
    assert push_sheaf(A, line_bundle_character(h)) == V.parse("[A] + 16[l] + 8[pt]")
    assert push_sheaf(A, 8 * line_bundle_character(-h)) == V.parse("8[A] - 128[l] + 64[pt]")


def test_grr_trivial_normal_is_plain_push(V):
    A = chern.fiber()
    x = A.model.parse("2 + 3[h] - [pt]")
    trivial = NormalBundleData((A.model.zero(),))
    assert grr_push(x, trivial, A.push) == A.push(x)


def test_grr_rank_mismatch():
    e = chern.section()
    with pytest.raises(ChernError):
        grr_push(e.model.one(), NormalBundleData((e.model.zero(),)), e.push)


def test_table_characters():
    got = {s.name: s for s in chern.basis_sheaves()}
    V = builtin_model("V")
    assert got["O_A"].ch == V.parse("[A]")
    assert got["O_e"].ch == V.parse("[e] + [pt]")
    assert got["O_pt"].ch == V.parse("[pt]")
    assert got["O_A(H)"].ch == V.parse("[A] + 16[l] + 8[pt]")
    assert got["O_V"].ch == V.one()
    assert got["O_V(H)"].ch == V.parse("[V] + [H] + 8[e] + 8[l] + 8/3[pt]")
    assert got["O_V"].sq_image == V.parse("64[e] - 64[pt]")
    assert [s.verified for s in chern.basis_sheaves()] == [True] * 4 + [False] * 2


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30))
def test_spectral_character_shape(a, b, chi):
    ch = spectral_character(a, b, chi)
    assert ch.graded(0) == ch.model.zero() and ch.graded(2) == ch.model.zero()
    assert ch["e"] == a and ch["l"] == b and ch["pt"] == chi


def test_spectral_from_degree():
    assert spectral_character_from_degree(1, 2, deg=5, genus=3) == spectral_character(1, 2, 3)


# ---------------------------------------------------------------------------
# the scroll

def test_scroll_riemann_roch():
    S = builtin_model("S")
    H = S.parse("[C0] + 4[F]")
    td = S.parse("1 + [C0]")
    ch = line_bundle_character(H)
    assert ch == S.parse("1 + [C0] + 4[F] + 4[pt]")
    assert riemann_roch(ch, td) == 8
    assert riemann_roch(S.one(), td) == 0


def test_c_from_ch_examples(V):
    c = c_from_ch(V.parse("5"))
    assert (c.rank, c.c1, c.c2, c.c3) == (5, V.zero(), V.zero(), V.zero())
    ch = V.parse("3 - 2[l] + 7[pt]")
    c = c_from_ch(ch)
    assert c.c2 == V.parse("2[l]") and c.c3 == V.parse("14[pt]")


def test_tensor_reproduces_twisted_rank_8(V):
    H = V.cls("H")
    assert tensor(8 * V.one(), line_bundle_character(-H)) == V.parse("8 - 8[H] + 64[e] + 64[l] - 64/3[pt]")


@pytest.mark.parametrize("abc, expected", [((1, 0, 1), "[e] + [pt]"), ((1, 0, -1), "[e] - [pt]"), ((0, 0, 0), "0")])
def test_spectral_character_examples(V, abc, expected):
    assert spectral_character(*abc) == V.parse(expected)
