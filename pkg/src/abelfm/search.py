"""Bounded search for spectral data meeting the heterotic constraints.

A spectral candidate is a line bundle L on a curve of class ``a e + b l`` in
V, recorded by ``(a, b, chi(L))`` and optionally twisted after the transform
by ``O(x H^ + y A^)`` on V^.  Its transform is computed with the verified
columns of the Fourier-Mukai matrix only.

Besides the finite scan, the transform of the whole family is linear in
``(a, b, chi)``, so rank, c1, c2 and c3 are polynomials in those variables.
:func:`closed_form` computes them exactly; when a target is unreachable for
every value of the variables the report carries that as a certificate.
"""
from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .chern import c_from_ch, ci_tangent_chern, line_bundle_character, rank_of, spectral_character, tensor
from .fm import builtin_sP, descend
from .ring import CohClass, builtin_model, format_class, format_rational, integrate, mul

CHECK_ORDER = ("curve", "rank", "c1", "c3", "anomaly")
ANOMALY_MODES = ("require_effective", "ignore")
VARIABLES = ("a", "b", "chi")


class EmptyBoundsError(ValueError):
    pass


@lru_cache(maxsize=None)
def default_c2_tangent() -> CohClass:
    """c2(T) on V^ from the (2,2,2,2) complete intersection in P7.

    c2 = 4h^2 on the nodal model; on V this is 4 H^2 = 64 e + 64 l, and the
    quotient map is etale, so c2(T_V^) is the descent of that class.  The
    small resolution may correct c2; pass your own class if that matters.
    """
    V = builtin_model("V")
    ci = ci_tangent_chern(7, (2, 2, 2, 2))
    H = V.cls("H")
    return descend(ci.c2 * mul(H, H))


@dataclass(frozen=True)
class HeteroticConstraints:
    rank: int
    c1_target: CohClass | None = None
    c3_target: Fraction = Fraction(6)
    c2_tangent: CohClass | None = None
    anomaly_mode: str = "require_effective"
    strict_cone: bool = True
    require_effective_curve: bool = True

    def __post_init__(self):
        if self.rank < 2 and self.rank != 1:
            raise ValueError("rank must be positive")
        if self.anomaly_mode not in ANOMALY_MODES:
            raise ValueError(f"anomaly_mode must be one of {ANOMALY_MODES}")
        W = builtin_model("Vdual")
        object.__setattr__(self, "c3_target", Fraction(self.c3_target))
        if self.c1_target is None:
            object.__setattr__(self, "c1_target", W.zero())
        if self.c2_tangent is None:
            object.__setattr__(self, "c2_tangent", default_c2_tangent())


@dataclass(frozen=True, order=True)
class SpectralCandidate:
    a: int
    b: int
    chi: int
    twist: tuple[int, int] | None = None

    def as_tuple(self):
        return (self.a, self.b, self.chi) if self.twist is None else (self.a, self.b, self.chi, *self.twist)


@dataclass(frozen=True)
class Verdict:
    """Outcome of every constraint, in :data:`CHECK_ORDER`.

    ``checks`` holds ``(name, passed, witness)`` with the raw witness value
    (a class or a rational); :meth:`details` renders them.
    """

    candidate: SpectralCandidate
    checks: tuple[tuple[str, bool, object], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    @property
    def first_failure(self) -> str | None:
        return next((name for name, ok, _ in self.checks if not ok), None)

    def details(self) -> dict[str, str]:
        out = {}
        for name, _, w in self.checks:
            out[name] = format_class(w) if isinstance(w, CohClass) else (
                format_rational(w) if isinstance(w, Fraction) else str(w))
        return out


def twist_class(x: int, y: int) -> CohClass:
    W = builtin_model("Vdual")
    return W.from_dict({"H^": x, "A^": y})


def fm_of_candidate(c: SpectralCandidate) -> CohClass:
    """Chern character on V^ of the transform of the candidate, twisted if asked."""
    ch = builtin_sP().apply_verified(spectral_character(c.a, c.b, c.chi))
    if c.twist is not None and any(c.twist):
        ch = tensor(ch, line_bundle_character(twist_class(*c.twist)))
    return ch


def is_effective_curve(cls: CohClass, strict: bool = True) -> bool:
    """Membership of a curve class on V^ in the cone spanned by e^ and l^ = 8 E^."""
    if not cls.is_homogeneous(4):
        return False
    a, b = cls["e^"], cls["E^"] / 8
    return (a > 0 and b > 0) if strict else (a >= 0 and b >= 0)


def check(c: SpectralCandidate, k: HeteroticConstraints) -> Verdict:
    ch = fm_of_candidate(c)
    cc = c_from_ch(ch)
    checks = []
    if k.require_effective_curve:
        checks.append(("curve", c.a > 0 and c.b >= 0, f"a={c.a}, b={c.b}"))
    r = rank_of(ch)
    checks.append(("rank", r == k.rank, r))
    checks.append(("c1", cc.c1 == k.c1_target, cc.c1))
    c3 = integrate(cc.c3)
    checks.append(("c3", c3 == k.c3_target, c3))
    if k.anomaly_mode == "require_effective":
        diff = k.c2_tangent - cc.c2
        checks.append(("anomaly", is_effective_curve(diff, k.strict_cone), diff))
    return Verdict(c, tuple(checks))


def first_failure(c: SpectralCandidate, k: HeteroticConstraints) -> str | None:
    """Name of the first failing constraint, as ``check(c, k).first_failure``.

    Evaluates lazily, so the scan skips c2 and c3 for the many candidates
    that already fail on rank or c1.
    """
    if k.require_effective_curve and not (c.a > 0 and c.b >= 0):
        return "curve"
    ch = fm_of_candidate(c)
    if rank_of(ch) != k.rank:
        return "rank"
    if ch.graded(2) != k.c1_target:
        return "c1"
    cc = c_from_ch(ch)
    if integrate(cc.c3) != k.c3_target:
        return "c3"
    if k.anomaly_mode == "require_effective" and not is_effective_curve(k.c2_tangent - cc.c2, k.strict_cone):
        return "anomaly"
    return None


# ---------------------------------------------------------------------------
# polynomial closed forms

Monomial = tuple[int, int, int]


def _padd(p, q):
    out = dict(p)
    for m, v in q.items():
        out[m] = out[m] + v if m in out else v
    return {m: v for m, v in out.items() if v}


def _pscale(p, c):
    return {m: v * c for m, v in p.items() if v * c}


def _pmul(p, q):
    out = {}
    for (m1, v1), (m2, v2) in itertools.product(p.items(), q.items()):
        m = tuple(x + y for x, y in zip(m1, m2))
        prod_ = mul(v1, v2)
        if prod_:
            out[m] = out[m] + prod_ if m in out else prod_
    return {m: v for m, v in out.items() if v}


def _pgraded(p, degree):
    return {m: v.graded(degree) for m, v in p.items() if v.graded(degree)}


def _pmap(p, f):
    out = {m: f(v) for m, v in p.items()}
    return {m: v for m, v in out.items() if v}


@dataclass(frozen=True)
class ClosedForm:
    """Chern data of the transformed family as polynomials in (a, b, chi).

    Each attribute maps exponent tuples to a coefficient (a class on V^ or a
    rational for ``rank`` and ``c3``).
    """

    twist: tuple[int, int] | None
    rank: dict
    ch: dict
    c1: dict
    c2: dict
    c3: dict


def closed_form(twist: tuple[int, int] | None = None) -> ClosedForm:
    cols = []
    for i in range(3):
        unit = tuple(int(i == j) for j in range(3))
        cols.append(fm_of_candidate(SpectralCandidate(*unit, twist=twist)))
    ch = {}
    for i, v in enumerate(cols):
        if v:
            ch[tuple(int(i == j) for j in range(3))] = v
    c1 = _pgraded(ch, 2)
    ch2 = _pgraded(ch, 4)
    ch3 = _pgraded(ch, 6)
    c1sq = _pmul(c1, c1)
    c2 = _pscale(_padd(c1sq, _pscale(ch2, -2)), Fraction(1, 2))
    c3 = _padd(_padd(_pscale(ch3, 2), _pscale(_pmul(c1sq, c1), Fraction(-1, 3))), _pmul(c1, c2))
    W = builtin_model("Vdual")
    rank = _pmap(ch, lambda v: v.coeffs[W.unit_index])
    return ClosedForm(twist, rank, ch, c1, c2, _pmap(c3, integrate))


def format_poly(p: dict, names: Sequence[str] = VARIABLES) -> str:
    """Render a rational polynomial, degree then lexicographic order."""
    if not p:
        return "0"
    terms = []
    for m in sorted(p, key=lambda m: (sum(m), tuple(-x for x in m))):
        c = p[m]
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
        mag = abs(c)
        body = mono if (mag == 1 and mono) else (format_rational(mag) + ("*" + mono if mono else ""))
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


def format_class_poly(p: dict) -> str:
    """Render a class-valued polynomial as a sum of (polynomial)[label] terms."""
    if not p:
        return "0"
    model = next(iter(p.values())).model
    parts = []
    for i, lab in enumerate(model.labels):
        coeff = {m: v.coeffs[i] for m, v in p.items() if v.coeffs[i]}
        if coeff:
            parts.append(f"({format_poly(coeff)})[{lab}]")
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# enumeration

@dataclass(frozen=True)
class SearchBounds:
    """Inclusive integer ranges."""

    a: tuple[int, int]
    b: tuple[int, int]
    chi: tuple[int, int]
    twist_x: tuple[int, int] | None = None
    twist_y: tuple[int, int] | None = None

    def __post_init__(self):
        for name in ("a", "b", "chi", "twist_x", "twist_y"):
            r = getattr(self, name)
            if r is None:
                continue
            if r[0] > r[1]:
                raise EmptyBoundsError(f"empty range for {name}: {r[0]}:{r[1]}")
        if (self.twist_x is None) != (self.twist_y is None):
            raise ValueError("give both twist ranges or neither")

    @property
    def twisted(self) -> bool:
        return self.twist_x is not None

    def twists(self) -> list[tuple[int, int] | None]:
        if not self.twisted:
            return [None]
        return list(itertools.product(range(self.twist_x[0], self.twist_x[1] + 1),
                                      range(self.twist_y[0], self.twist_y[1] + 1)))

    def candidates(self) -> Iterable[SpectralCandidate]:
        for a in range(self.a[0], self.a[1] + 1):
            for b in range(self.b[0], self.b[1] + 1):
                for chi in range(self.chi[0], self.chi[1] + 1):
                    for t in self.twists():
                        yield SpectralCandidate(a, b, chi, t)

    def size(self) -> int:
        n = 1
        for r in (self.a, self.b, self.chi, self.twist_x, self.twist_y):
            if r is not None:
                n *= r[1] - r[0] + 1
        return n


@dataclass
class PartialReport:
    total: int = 0
    rejections: Counter = field(default_factory=Counter)
    feasible: list = field(default_factory=list)

    def merge(self, other: "PartialReport") -> "PartialReport":
        return PartialReport(
            self.total + other.total,
            self.rejections + other.rejections,
            sorted(self.feasible + other.feasible),
        )


def scan(candidates: Iterable[SpectralCandidate], k: HeteroticConstraints) -> PartialReport:
    rep = PartialReport()
    for c in candidates:
        rep.total += 1
        failure = first_failure(c, k)
        if failure is None:
            rep.feasible.append(c)
        else:
            rep.rejections[failure] += 1
    rep.feasible.sort()
    return rep


def _scan_chunk(args):
    cands, k = args
    return scan(cands, k)


@dataclass(frozen=True)
class SearchReport:
    bounds: SearchBounds
    constraints: HeteroticConstraints
    total: int
    rejections: dict
    feasible: tuple
    certificates: tuple[str, ...]
    closed_forms: tuple[ClosedForm, ...]

    @property
    def infeasible(self) -> bool:
        return not self.feasible

    def as_mapping(self) -> dict:
        """Nested plain mapping (strings, ints, lists) with a fixed key order."""
        k = self.constraints
        checks = [c for c in CHECK_ORDER if c != "curve" or k.require_effective_curve]
        if k.anomaly_mode == "ignore":
            checks.remove("anomaly")
        out = {
            "bounds": {
                "a": f"{self.bounds.a[0]}:{self.bounds.a[1]}",
                "b": f"{self.bounds.b[0]}:{self.bounds.b[1]}",
                "chi": f"{self.bounds.chi[0]}:{self.bounds.chi[1]}",
                "twist": "none" if not self.bounds.twisted else
                f"{self.bounds.twist_x[0]}:{self.bounds.twist_x[1]},{self.bounds.twist_y[0]}:{self.bounds.twist_y[1]}",
            },
            "constraints": {
                "rank": str(k.rank),
                "c1": format_class(k.c1_target),
                "c3": format_rational(k.c3_target),
                "c2_tangent": format_class(k.c2_tangent),
                "anomaly": k.anomaly_mode,
                "cone": "strict" if k.strict_cone else "closed",
            },
            "closed_form": {},
            "total": self.total,
            "rejections": {c: self.rejections.get(c, 0) for c in checks},
            "feasible_count": len(self.feasible),
            "feasible": [
                " ".join(str(x) for x in c.as_tuple()) for c in self.feasible
            ],
            "status": "feasible" if self.feasible else "infeasible within bounds",
            "certificates": list(self.certificates),
            "scope": (
                "covers only spectral candidates: line bundles on curves a[e] + b[l] in V "
                "transformed to V^ (optionally twisted); it is not a statement about "
                "general bundles on V^"
            ),
        }
        for cf in self.closed_forms:
            key = "untwisted" if cf.twist is None else f"twist {cf.twist[0]},{cf.twist[1]}"
            out["closed_form"][key] = {
                "rank": format_poly(cf.rank),
                "c1": format_class_poly(cf.c1),
                "c2": format_class_poly(cf.c2),
                "c3": format_poly(cf.c3),
            }
        return out


def _certificates(forms: Sequence[ClosedForm], k: HeteroticConstraints, bounds: SearchBounds) -> list[str]:
    certs = []
    family = "all untwisted spectral candidates" if not bounds.twisted else "all twists in range"
    const_c3 = [cf.c3.get((0, 0, 0), Fraction(0)) if set(cf.c3) <= {(0, 0, 0)} else None for cf in forms]
    if all(v is not None for v in const_c3):
        values = sorted(set(const_c3))
        if k.c3_target not in values:
            shown = ", ".join(format_rational(v) for v in values)
            lhs = "c3 ≡ " + shown if len(values) == 1 else f"c3 takes only the values {shown}"
            certs.append(
                f"{lhs} for {family} (every a, b, chi, not only within bounds); "
                f"target c3 = {format_rational(k.c3_target)} is unreachable"
            )
    return certs


def enumerate_candidates(bounds: SearchBounds, k: HeteroticConstraints, workers: int = 1) -> SearchReport:
    """Exhaustive scan of ``bounds``; serial and parallel runs give identical reports."""
    if workers <= 1:
        partial = scan(bounds.candidates(), k)
    else:
        chunks = []
        for a in range(bounds.a[0], bounds.a[1] + 1):
            for b in range(bounds.b[0], bounds.b[1] + 1):
                sub = SearchBounds((a, a), (b, b), bounds.chi, bounds.twist_x, bounds.twist_y)
                chunks.append((list(sub.candidates()), k))
        partial = PartialReport()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_scan_chunk, chunks, chunksize=max(1, len(chunks) // (4 * workers))):
                partial = partial.merge(part)
    forms = tuple(closed_form(t) for t in bounds.twists())
    if partial.total != bounds.size():
        raise RuntimeError("scan lost candidates")
    return SearchReport(
        bounds, k, partial.total, dict(partial.rejections), tuple(sorted(partial.feasible)),
        tuple(_certificates(forms, k, bounds)), forms,
    )
