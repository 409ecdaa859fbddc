"""Named verification suites over every tabulated identity the package relies on.

Each suite is a list of :class:`Check` results; a suite passes when every
check does.  Expected values are written out literally here so that a
corrupted model file shows up as a named failing identity.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from . import chern, fm, isogeny, lattice, linalg, search, stability
from .ring import RingModel, builtin_model, format_class, format_rational, integrate, model_violations, mul


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: str = ""


@dataclass(frozen=True)
class VerificationSuite:
    name: str
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def as_mapping(self) -> dict:
        return {
            "suite": self.name,
            "status": "pass" if self.passed else "fail",
            "checks": [
                f"{'pass' if c.passed else 'FAIL'} {c.name}" + (f" [got {c.witness}]" if not c.passed and c.witness else "")
                for c in self.checks
            ],
        }


def _eq(name, got, expected) -> Check:
    show = format_class(got) if hasattr(got, "coeffs") else (
        format_rational(got) if isinstance(got, (int, Fraction)) else str(got))
    return Check(name, got == expected, "" if got == expected else show)


def _axioms(model: RingModel) -> list[Check]:
    problems = model_violations(model)
    if not problems:
        return [Check(f"{model.name} ring axioms", True)]
    return [Check(f"{model.name} {p}", False) for p in problems]


def _products(model: RingModel, table: list[tuple[str, str]]) -> list[Check]:
    out = []
    for lhs, rhs in table:
        factors = [model.cls(lab) for lab in lhs.split("*")]
        got = factors[0]
        for f in factors[1:]:
            got = mul(got, f)
        out.append(_eq(f"{lhs} = {rhs}", got, model.parse(rhs)))
    return out


def suite_ring_V(models: Mapping[str, RingModel] | None = None) -> VerificationSuite:
    V = (models or {}).get("V") or builtin_model("V")
    checks = _axioms(V)
    if not checks[0].passed:
        return VerificationSuite("ring-V", tuple(checks))
    checks += _products(V, [
        ("H*H*H", "16[pt]"), ("H*H*A", "16[pt]"), ("H*A", "16[l]"), ("H*H", "16[e] + 16[l]"),
        ("A*A", "0"), ("H*e", "0"), ("H*l", "[pt]"), ("A*e", "[pt]"), ("A*l", "0"),
        ("H*A*A", "0"), ("A*A*A", "0"),
    ])
    return VerificationSuite("ring-V", tuple(checks))


def suite_ring_Vdual(models: Mapping[str, RingModel] | None = None) -> VerificationSuite:
    W = (models or {}).get("Vdual") or builtin_model("Vdual")
    checks = _axioms(W)
    if not checks[0].passed:
        return VerificationSuite("ring-Vdual", tuple(checks))
    checks += _products(W, [
        ("H^*H^*H^", "128[pt]"), ("H^*H^*A^", "16[pt]"), ("H^*H^", "16[e^] + 128[E^]"),
        ("H^*A^", "16[E^]"), ("H^*E^", "[pt]"), ("A^*e^", "[pt]"), ("H^*e^", "0"),
        ("A^*E^", "0"), ("A^*A^", "0"), ("A^*A^*A^", "0"),
    ])
    # l^ = 8 E^ = push(l)
    lhat = isogeny.apply(isogeny.phi_pushforward(), builtin_model("V").cls("l"))
    if W is builtin_model("Vdual"):
        checks.append(_eq("H^.l^ = 8[pt]", mul(W.cls("H^"), lhat), W.parse("8[pt]")))
        checks.append(_eq("A^.l^ = 0", mul(W.cls("A^"), lhat), W.zero()))
    return VerificationSuite("ring-Vdual", tuple(checks))


def suite_ring_S(models: Mapping[str, RingModel] | None = None) -> VerificationSuite:
    S = (models or {}).get("S") or builtin_model("S")
    checks = _axioms(S)
    if not checks[0].passed:
        return VerificationSuite("ring-S", tuple(checks))
    H = S.parse("[C0] + 4[F]")
    td = S.parse("1 + [C0]")
    ch = chern.line_bundle_character(H)
    checks.append(_eq("H.C0 = 4", integrate(mul(H, S.cls("C0"))), 4))
    checks.append(_eq("H.F = 1", integrate(mul(H, S.cls("F"))), 1))
    checks.append(_eq("ch(H) = 1 + H + 4[pt]", ch, S.one() + H + S.parse("4[pt]")))
    checks.append(_eq("chi(H) = 8", chern.riemann_roch(ch, td), 8))
    checks.append(_eq("chi(O) = 0", chern.riemann_roch(S.one(), td), 0))
    return VerificationSuite("ring-S", tuple(checks))


def suite_ring_ExE(models: Mapping[str, RingModel] | None = None) -> VerificationSuite:
    X = (models or {}).get("ExE") or builtin_model("ExE")
    checks = _axioms(X)
    if not checks[0].passed:
        return VerificationSuite("ring-ExE", tuple(checks))
    checks += _products(X, [
        ("E*F", "[pt]"), ("E*D", "[pt]"), ("F*D", "[pt]"), ("E*E", "0"), ("F*F", "0"), ("D*D", "0"),
    ])
    for u, v in itertools.product([lattice.E, lattice.F, lattice.DIAGONAL], repeat=2):
        cu = X.from_dict(dict(zip(("E", "F", "D"), u)))
        cv = X.from_dict(dict(zip(("E", "F", "D"), v)))
        checks.append(_eq(f"Gram{u}.{v}", integrate(mul(cu, cv)), lattice.ns_intersect(u, v)))
    return VerificationSuite("ring-ExE", tuple(checks))


def suite_isogeny(models=None) -> VerificationSuite:
    checks = []
    pull, push = isogeny.phi_pullback(), isogeny.phi_pushforward()
    W, V = pull.source, pull.target
    bad = {d for d, *_ in isogeny.ring_homomorphism_failures()}
    for i, j in itertools.combinations_with_replacement(range(W.rank), 2):
        name = f"pull({W.labels[i]}*{W.labels[j]})"
        checks.append(Check(f"homomorphism {name}", name not in bad))
    bad = {d for d, *_ in isogeny.projection_formula_failures()}
    for i, j in itertools.product(range(V.rank), range(W.rank)):
        name = f"push({V.labels[i]}*pull({W.labels[j]}))"
        checks.append(Check(f"projection {name}", name not in bad))
    bad = {d for d, *_ in isogeny.degree_identity_failures()}
    for i in range(W.rank):
        name = f"push(pull({W.labels[i]}))"
        checks.append(Check(f"degree {name} = 64", name not in bad))
    checks.append(Check("pullback preserves degree", pull.preserves_degree()))
    checks.append(Check("pushforward preserves degree", push.preserves_degree()))
    return VerificationSuite("isogeny", tuple(checks))


TABLE_CH = (
    ("O_A", "[A]"),
    ("O_e", "[e] + [pt]"),
    ("O_pt", "[pt]"),
    ("O_A(H)", "[A] + 16[l] + 8[pt]"),
    ("O_V", "[V]"),
    ("O_V(H)", "[V] + [H] + 8[e] + 8[l] + 8/3[pt]"),
)

TABLE_SQ = (
    ("O_A", "64[pt]"),
    ("O_e", "[V]"),
    ("O_pt", "[A]"),
    ("O_A(H)", "8[A] - 128[l] + 64[pt]"),
    ("O_V", "64[e] - 64[pt]"),
    ("O_V(H)", "8[V] - 8[H] + 64[e] + 64[l] - 64/3[pt]"),
)


def suite_chern(models=None) -> VerificationSuite:
    V = builtin_model("V")
    checks = []
    sheaves = chern.basis_sheaves()
    for s, (name, expr) in zip(sheaves, TABLE_CH):
        checks.append(_eq(f"ch({name}) = {expr}", s.ch, V.parse(expr)))
    for s, (name, expr) in zip(sheaves, TABLE_SQ):
        checks.append(_eq(f"ch(S_Q {name}) = {expr}", s.sq_image, V.parse(expr)))
    W = builtin_model("Vdual")
    for s, (name, expr) in zip(sheaves, fm.TABLE_IMAGES):
        checks.append(_eq(f"ch(S_P {name}) = {expr}", fm.apply_fm(s.ch), W.parse(expr)))
        checks.append(_eq(f"descend(S_Q {name}) = {expr}", fm.descend(s.sq_image), W.parse(expr)))
    for s in sheaves:
        back = chern.ch_from_c(chern.c_from_ch(s.ch))
        checks.append(_eq(f"ch(c(ch({s.name}))) round trip", back, s.ch))
    checks.append(_eq("ch(B(-2) on e) = [e] - [pt]",
                      chern.push_sheaf(chern.section(), chern.line_bundle_character(-2 * chern.section().model.point())),
                      V.parse("[e] - [pt]")))
    return VerificationSuite("chern", tuple(checks))


def suite_euler(models=None) -> VerificationSuite:
    ci = chern.ci_tangent_chern(7, (2, 2, 2, 2))
    q = chern.ci_tangent_chern(4, (5,))
    checks = [
        _eq("c1(2,2,2,2) = 0", ci.c1, 0),
        _eq("c2(2,2,2,2) = 4h^2", ci.c2, 4),
        _eq("c3(2,2,2,2) = -8h^3", ci.c3, -8),
        _eq("chi(smooth (2,2,2,2)) = -128", ci.euler_characteristic, -128),
        _eq("chi(V) = -128 + 2*64 = 0", chern.euler_resolution(int(ci.euler_characteristic), 64), 0),
        _eq("chi(quintic) = -200", q.euler_characteristic, -200),
        _eq("c(P3) = (1+h)^4", chern.ci_tangent_chern(3, ()).coefficients, (1, 4, 6, 4)),
    ]
    return VerificationSuite("euler", tuple(checks))


def suite_fm_matrix(models=None) -> VerificationSuite:
    checks = []
    sp, spi = fm.builtin_sP(), fm.builtin_sP_inverse()
    rec = fm.reconstruct_from_pairs(fm.table_pairs("table"))
    checks.append(Check("reconstruction from table equals printed s_P", rec.matrix == sp.matrix))
    rec2 = fm.reconstruct_from_pairs(fm.table_pairs("descended"))
    checks.append(Check("reconstruction from descended S_Q images equals printed s_P", rec2.matrix == sp.matrix))
    ident = linalg.identity(6)
    checks.append(Check("s_P . s_P^-1 = 1", linalg.matmul(sp.matrix, spi.matrix) == ident))
    checks.append(Check("s_P^-1 . s_P = 1", linalg.matmul(spi.matrix, sp.matrix) == ident))
    checks.append(Check("printed inverse equals computed inverse", linalg.inverse(sp.matrix) == spi.matrix))
    checks.append(_eq("verified columns", ",".join(sorted(rec.verified)), "A,e,l,pt"))
    V, W = sp.source, sp.target
    checks.append(_eq("s_P(O_e) = [V^]", fm.apply_fm(V.parse("[e] + [pt]")), W.one()))
    return VerificationSuite("fm-matrix", tuple(checks))


def suite_spectral(models=None, bound: int = 12) -> VerificationSuite:
    checks = []
    W = builtin_model("Vdual")
    bad = []
    rng = range(-bound, bound + 1)
    for a, b, chi in itertools.product(rng, rng, rng):
        got = search.fm_of_candidate(search.SpectralCandidate(a, b, chi))
        want = W.from_dict({"V^": a, "A^": chi - a, "E^": -b})
        if got != want:
            bad.append((a, b, chi))
    checks.append(Check(f"closed form a[V^] + (chi-a)[A^] - b[E^] for |a|,|b|,|chi| <= {bound}",
                        not bad, str(bad[:3])))
    cf = search.closed_form()
    checks.append(_eq("untwisted c3 polynomial", search.format_poly(cf.c3), "0"))
    checks.append(_eq("untwisted rank polynomial", search.format_poly(cf.rank), "a"))
    try:
        search.builtin_sP().apply_verified(builtin_model("V").cls("H"))
        checks.append(Check("unverified column H is refused", False, "accepted"))
    except fm.UnverifiedColumnError:
        checks.append(Check("unverified column H is refused", True))
    return VerificationSuite("spectral", tuple(checks))


def suite_stability(models=None) -> VerificationSuite:
    checks = []
    P = stability.PolarizationChoice
    for l, k in itertools.product(range(5), repeat=2):
        checks.append(_eq(f"ample({l},{k})", stability.is_ample(P(l, k)).ample, l > 0 and k > 0))
    W = builtin_model("Vdual")
    checks.append(_eq("effectivity(H^, (1,1))", stability.effectivity_inequalities(W.cls("H^"), P(1, 1)),
                      (0, 16, 160)))
    checks.append(_eq("slope(1 + H^, (1,1)) = 160", stability.slope(W.parse("1 + [H^]"), P(1, 1)), 160))
    checks.append(_eq("slope(2 + A^, (1,0)) = 8", stability.slope(W.parse("2 + [A^]"), P(1, 0)), 8))
    checks.append(_eq("threshold(160, 0, 4) = 241", stability.stability_threshold(160, 0, 4), 241))
    checks.append(_eq("threshold(16, 0, 5) = 33", stability.stability_threshold(16, 0, 5), 33))
    return VerificationSuite("stability", tuple(checks))


def suite_lattice(models=None, seed: int = 20090101) -> VerificationSuite:
    checks = []
    rng = random.Random(seed)
    gs = [lattice.random_sl2(rng) for _ in range(100)]
    checks.append(Check("induced action preserves the form (100 random g)", all(map(lattice.preserves_form, gs))))
    orbit = lattice.orbit_transitivity(16)
    checks.append(Check("orbit of E reaches every generator up to height 16", orbit.ok, str(orbit.missed)))
    sch = lattice.reverse_schwarz_check(8)
    checks.append(Check("reverse Schwarz holds up to height 8", sch.ok, str(sch.violations[:3])))
    bad = []
    for a, b in itertools.product(range(-12, 13), repeat=2):
        if __import__("math").gcd(a, b) != 1:
            continue
        u = lattice.slope_curve(a, b)
        got = tuple(lattice.ns_intersect(u, v) for v in (lattice.E, lattice.F, lattice.DIAGONAL))
        if got != (b * b, a * a, (a - b) ** 2):
            bad.append((a, b))
    checks.append(Check("E_ab . (E, F, D) = (b^2, a^2, (a-b)^2), |a|,|b| <= 12", not bad, str(bad[:3])))
    checks.append(_eq("E_01 = F", lattice.slope_curve(0, 1), lattice.F))
    checks.append(_eq("E_11 = D", lattice.slope_curve(1, 1), lattice.DIAGONAL))
    return VerificationSuite("lattice", tuple(checks))


SUITES: dict[str, Callable[..., VerificationSuite]] = {
    "ring-V": suite_ring_V,
    "ring-Vdual": suite_ring_Vdual,
    "ring-S": suite_ring_S,
    "ring-ExE": suite_ring_ExE,
    "isogeny": suite_isogeny,
    "chern": suite_chern,
    "euler": suite_euler,
    "fm-matrix": suite_fm_matrix,
    "spectral": suite_spectral,
    "stability": suite_stability,
    "lattice": suite_lattice,
}


def run(name: str = "all", models: Mapping[str, RingModel] | None = None) -> list[VerificationSuite]:
    """Run one suite or all of them; ``models`` overrides built-ins by name."""
    models = dict(models or {})
    if name == "all":
        out = [fn(models) for fn in SUITES.values()]
        for m in models.values():
            if m.name not in SUITES and f"ring-{m.name}" not in SUITES:
                out.append(VerificationSuite(f"model-{m.name}", tuple(_axioms(m))))
        return out
    if name in SUITES:
        return [SUITES[name](models)]
    if name.startswith("model-") and name[6:] in models:
        m = models[name[6:]]
        return [VerificationSuite(name, tuple(_axioms(m)))]
    raise KeyError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
