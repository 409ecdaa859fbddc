import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelfm import search
from abelfm.chern import c_from_ch
from abelfm.fm import UnverifiedColumnError, builtin_sP
from abelfm.ring import builtin_model, integrate
from abelfm.search import (EmptyBoundsError, HeteroticConstraints, SearchBounds, SpectralCandidate, check,
                           closed_form, enumerate_candidates, fm_of_candidate, scan)

W = builtin_model("Vdual")
NO_GO = SearchBounds((4, 4), (0, 64), (-64, 64))


def _evaluate(poly, a, b, chi, zero=0):
    total = zero
    for (i, j, k), v in poly.items():
        total = total + v * (a ** i * b ** j * chi ** k)
    return total


def test_default_tangent_class():
    assert search.default_c2_tangent() == W.parse("[e^] + 8[E^]")


@given(st.integers(-40, 40), st.integers(-40, 40), st.integers(-40, 40))
def test_untwisted_closed_form(a, b, chi):
    ch = fm_of_candidate(SpectralCandidate(a, b, chi))
    assert ch == W.from_dict({"V^": a, "A^": chi - a, "E^": -b})
    c = c_from_ch(ch)
    assert c.c1 == (chi - a) * W.cls("A^")
    assert c.c2 == b * W.cls("E^")
    assert c.c3 == W.zero()


@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6), st.integers(-2, 2), st.integers(-2, 2))
def test_closed_form_polynomials_match_direct_evaluation(a, b, chi, x, y):
    cf = closed_form((x, y))
    c = c_from_ch(fm_of_candidate(SpectralCandidate(a, b, chi, (x, y))))
    assert _evaluate(cf.c1, a, b, chi, W.zero()) == c.c1
    assert _evaluate(cf.c2, a, b, chi, W.zero()) == c.c2
    assert _evaluate(cf.c3, a, b, chi) == integrate(c.c3)


def test_untwisted_polynomials_print():
    cf = closed_form()
    assert search.format_poly(cf.rank) == "a"
    assert search.format_class_poly(cf.c1) == "(-a + chi)[A^]"
    assert search.format_class_poly(cf.c2) == "(b)[E^]"
    assert search.format_poly(cf.c3) == "0"


def test_trivial_bundle_passes():
    k = HeteroticConstraints(1, c3_target=0, anomaly_mode="ignore")
    assert check(SpectralCandidate(1, 0, 1), k).passed


def test_no_go_rank_4():
    rep = enumerate_candidates(NO_GO, HeteroticConstraints(4))
    assert rep.total == 65 * 129
    assert rep.feasible == ()
    assert rep.rejections == {"c1": 65 * 128, "c3": 65}
    assert rep.certificates and rep.certificates[0].startswith("c3 ≡ 0 for all untwisted spectral candidates")
    assert "only spectral candidates" in rep.as_mapping()["scope"]


def test_c3_zero_feasible_set():
    k = HeteroticConstraints(5, c3_target=0, anomaly_mode="ignore")
    rep = enumerate_candidates(SearchBounds((5, 5), (0, 64), (-64, 64)), k)
    assert [c.as_tuple() for c in rep.feasible] == [(5, b, 5) for b in range(65)]
    assert rep.certificates == ()


def test_chi_forced_off_rank_fails_c1():
    rep = enumerate_candidates(SearchBounds((4, 4), (0, 3), (5, 9)), HeteroticConstraints(4, c3_target=0))
    assert rep.feasible == ()
    assert rep.rejections == {"c1": 20}


def test_anomaly_cone_strict_vs_closed():
    # c2(T) - c2 = e^ + (8 - b) E^; strict cone needs b < 8, closed needs b <= 8
    bounds = SearchBounds((4, 4), (0, 10), (4, 4))
    strict = enumerate_candidates(bounds, HeteroticConstraints(4, c3_target=0))
    closed = enumerate_candidates(bounds, HeteroticConstraints(4, c3_target=0, strict_cone=False))
    assert [c.b for c in strict.feasible] == list(range(8))
    assert [c.b for c in closed.feasible] == list(range(9))


def test_rejections_sum_to_total():
    bounds = SearchBounds((0, 5), (-1, 6), (-3, 3), (-1, 1), (0, 1))
    rep = enumerate_candidates(bounds, HeteroticConstraints(4, c3_target=0))
    assert sum(rep.rejections.values()) + len(rep.feasible) == rep.total == bounds.size()
    m = rep.as_mapping()
    assert sum(m["rejections"].values()) + m["feasible_count"] == m["total"]


def test_order_independence():
    bounds = SearchBounds((3, 5), (0, 8), (-4, 6))
    k = HeteroticConstraints(4, c3_target=0)
    cands = list(bounds.candidates())
    forward = scan(cands, k)
    random.Random(7).shuffle(cands)
    shuffled = scan(cands, k)
    assert forward.rejections == shuffled.rejections
    assert forward.feasible == shuffled.feasible


def test_parallel_equals_serial():
    bounds = SearchBounds((3, 5), (0, 12), (-8, 8))
    k = HeteroticConstraints(4, c3_target=0, anomaly_mode="ignore")
    serial = enumerate_candidates(bounds, k, workers=1)
    parallel = enumerate_candidates(bounds, k, workers=3)
    assert serial.as_mapping() == parallel.as_mapping()


def test_only_verified_columns_touched(monkeypatch):
    sp = builtin_sP()
    seen = []
    orig = type(sp).apply_verified

    def spy(self, x):
        seen.append(x)
        return orig(self, x)

    monkeypatch.setattr(type(sp), "apply_verified", spy)
    fm_of_candidate(SpectralCandidate(4, 3, 2))
    assert seen and all(x["V"] == 0 and x["H"] == 0 for x in seen)
    with pytest.raises(UnverifiedColumnError):
        sp.apply_verified(builtin_model("V").parse("[H] + [e]"))


def test_twisted_search_has_no_certificate_when_c3_varies():
    bounds = SearchBounds((4, 4), (0, 2), (-2, 2), (1, 1), (0, 0))
    rep = enumerate_candidates(bounds, HeteroticConstraints(4))
    assert rep.certificates == ()


def test_twist_along_fiber_keeps_c3_zero():
    # twisting by A^ alone shifts only c1 and leaves c3 identically zero
    assert search.format_poly(closed_form((0, 1)).c3) == "0"


def test_empty_bounds():
    with pytest.raises(EmptyBoundsError):
        SearchBounds((4, 4), (3, 1), (0, 0))


def test_bad_anomaly_mode():
    with pytest.raises(ValueError):
        HeteroticConstraints(4, anomaly_mode="sometimes")


@given(st.integers(-3, 6), st.integers(-3, 12), st.integers(-6, 6),
       st.one_of(st.none(), st.tuples(st.integers(-1, 1), st.integers(-1, 1))),
       st.sampled_from([0, 6]), st.sampled_from(search.ANOMALY_MODES), st.booleans())
def test_lazy_first_failure_agrees_with_full_check(a, b, chi, twist, c3, mode, strict):
    k = HeteroticConstraints(4, c3_target=c3, anomaly_mode=mode, strict_cone=strict)
    c = SpectralCandidate(a, b, chi, twist)
    assert search.first_failure(c, k) == check(c, k).first_failure


def test_verdict_details():
    v = check(SpectralCandidate(4, 3, 4), HeteroticConstraints(4))
    assert v.passed is False and v.first_failure == "c3"
    d = v.details()
    assert d["c1"] == "0" and d["c3"] == "0" and d["anomaly"] == "[e^] + 5[E^]"


def test_candidate_examples():
    assert fm_of_candidate(SpectralCandidate(1, 0, 1)) == W.one()
    assert fm_of_candidate(SpectralCandidate(0, 0, 0)) == W.zero()
    assert check(SpectralCandidate(4, 3, 5), HeteroticConstraints(4)).first_failure == "c1"
