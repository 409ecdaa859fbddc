"""Chern classes, Chern characters and Grothendieck-Riemann-Roch pushforwards.

A Chern character is simply a :class:`~abelfm.ring.CohClass` read by degree:
the unit coefficient is the rank and the degree 2, 4, 6 parts are ch1, ch2,
ch3.  :class:`ChernClasses` holds the total Chern class data and converts
back and forth exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Sequence

from .isogeny import CohMap, apply
from .ring import CohClass, ModelMismatchError, RingModel, builtin_model, integrate, mul


class ChernError(ValueError):
    pass


@dataclass(frozen=True)
class ChernClasses:
    rank: int
    c1: CohClass
    c2: CohClass
    c3: CohClass

    def __post_init__(self):
        model = self.c1.model
        for name, c, deg in (("c1", self.c1, 2), ("c2", self.c2, 4), ("c3", self.c3, 6)):
            if not c.model.same_as(model):
                raise ModelMismatchError("Chern classes must live on one model")
            if not c.is_homogeneous(deg):
                raise ChernError(f"{name} must be of degree {deg}, got {c}")

    @property
    def model(self) -> RingModel:
        return self.c1.model

    @classmethod
    def trivial(cls, model: RingModel, rank: int) -> "ChernClasses":
        z = model.zero()
        return cls(rank, z, z, z)


def ch_from_c(c: ChernClasses) -> CohClass:
    """ch = r + c1 + (c1^2 - 2 c2)/2 + (c1^3 - 3 c1 c2 + 3 c3)/6"""
    c1, c2, c3 = c.c1, c.c2, c.c3
    c1sq = mul(c1, c1)
    ch2 = (c1sq - 2 * c2) / 2
    ch3 = (mul(c1sq, c1) - 3 * mul(c1, c2) + 3 * c3) / 6
    return c.rank * c.model.one() + c1 + ch2 + ch3


def rank_of(ch: CohClass) -> Fraction:
    return ch.coeffs[ch.model.unit_index]


def c_from_ch(ch: CohClass) -> ChernClasses:
    """Exact inverse of :func:`ch_from_c`; the rank must be an integer."""
    r = rank_of(ch)
    if r.denominator != 1:
        raise ChernError(f"rank {r} is not an integer")
    c1 = ch.graded(2)
    c2 = (mul(c1, c1) - 2 * ch.graded(4)) / 2
    c3 = 2 * ch.graded(6) - mul(mul(c1, c1), c1) / 3 + mul(c1, c2)
    return ChernClasses(int(r), c1, c2, c3)


def tensor(ch1: CohClass, ch2: CohClass) -> CohClass:
    """Chern character of a tensor product (ring product; truncation is automatic)."""
    return mul(ch1, ch2)


def _series(x: CohClass, coeffs) -> CohClass:
    """sum_k coeffs(k) x^k, stopping once x^k vanishes (x is nilpotent)."""
    out = x.model.zero()
    power = x.model.one()
    k = 0
    while power:
        out = out + coeffs(k) * power
        power = mul(power, x)
        k += 1
        if k > x.model.top_degree + 1:
            raise ChernError("class is not nilpotent; is it of positive degree?")
    return out


def line_bundle_character(divisor: CohClass) -> CohClass:
    """ch(O(D)) = exp(D)."""
    return _series(divisor, lambda k: Fraction(1, factorial(k)))


def todd_inverse_line(x: CohClass) -> CohClass:
    """td(L)^-1 = (1 - e^-x)/x for a line bundle with first Chern class x."""
    return _series(x, lambda k: Fraction((-1) ** k, factorial(k + 1)))


def riemann_roch(ch: CohClass, td: CohClass) -> Fraction:
    """chi = integral of ch * td."""
    return integrate(mul(ch, td))


# ---------------------------------------------------------------------------
# GRR for embeddings

@dataclass(frozen=True)
class NormalBundleData:
    """Normal bundle of Z in V as a direct sum of line bundles on Z, by first Chern class."""

    summands: tuple[CohClass, ...]

    def __post_init__(self):
        for s in self.summands:
            if not s.is_homogeneous(2):
                raise ChernError(f"normal summand {s} is not a divisor class")

    @property
    def rank(self) -> int:
        return len(self.summands)

    def todd_inverse(self, model: RingModel) -> CohClass:
        out = model.one()
        for s in self.summands:
            out = mul(out, todd_inverse_line(s))
        return out


@dataclass(frozen=True)
class Subvariety:
    name: str
    model: RingModel
    push: CohMap
    normal: NormalBundleData

    @property
    def codimension(self) -> int:
        return (self.push.target.top_degree - self.model.top_degree) // 2


def grr_push(ch_sub: CohClass, normal: NormalBundleData, push: CohMap) -> CohClass:
    """ch(i_* F) = i_*(ch(F) . td(N)^-1)."""
    Z = push.source
    if not ch_sub.model.same_as(Z):
        raise ModelMismatchError(f"character lives on {ch_sub.model.name}, push expects {Z.name}")
    codim2 = push.target.top_degree - Z.top_degree
    if normal.rank * 2 != codim2:
        raise ChernError(f"normal bundle rank {normal.rank} != codimension {codim2 // 2}")
    for i, b in enumerate(push.target.basis):
        for j, s in enumerate(Z.basis):
            if push.matrix[i][j] and b.degree != s.degree + codim2:
                raise ChernError(f"pushforward sends {s.label} to degree {b.degree}, expected {s.degree + codim2}")
    return apply(push, mul(ch_sub, normal.todd_inverse(Z)))


@lru_cache(maxsize=None)
def fiber() -> Subvariety:
    """A smooth fiber A of V -> P1, with only the classes restricted from V."""
    V = builtin_model("V")
    H, A = V.cls("H"), V.cls("A")
    hh = integrate(H * H * A)
    model = RingModel.from_products("A", [("A", 0), ("h", 2), ("pt", 4)], {("h", "h"): {"pt": hh}}, 4)
    # projection formula: i_*(i^*x) = x . [A]
    push = CohMap.from_images(model, V, {"A": A, "h": H * A, "pt": V.point()})
    return Subvariety("A", model, push, NormalBundleData((model.zero(),)))


@lru_cache(maxsize=None)
def section() -> Subvariety:
    """The exceptional curve e = sigma(B), B = P1, with N = O(-1) + O(-1)."""
    V = builtin_model("V")
    model = RingModel.from_products("B", [("B", 0), ("pt", 2)], {}, 2)
    push = CohMap.from_images(model, V, {"B": V.cls("e"), "pt": V.point()})
    m1 = -model.point()
    return Subvariety("e", model, push, NormalBundleData((m1, m1)))


@lru_cache(maxsize=None)
def point() -> Subvariety:
    V = builtin_model("V")
    model = RingModel.from_products("p", [("p", 0)], {}, 0)
    push = CohMap.from_images(model, V, {"p": V.point()})
    z = model.zero()
    return Subvariety("pt", model, push, NormalBundleData((z, z, z)))


def push_sheaf(sub: Subvariety, ch_sub: CohClass) -> CohClass:
    return grr_push(ch_sub, sub.normal, sub.push)


# ---------------------------------------------------------------------------
# curves in a Calabi-Yau threefold

def spectral_character(a: int, b: int, chi: int) -> CohClass:
    """ch(i_* L) = [C] + chi(L)[pt] for a line bundle L on a curve C = a e + b l in V."""
    V = builtin_model("V")
    return V.from_dict({"e": a, "l": b, "pt": chi})


def spectral_character_from_degree(a: int, b: int, deg: int, genus: int) -> CohClass:
    """As :func:`spectral_character` with chi(L) = deg L - g + 1."""
    return spectral_character(a, b, deg - genus + 1)


# ---------------------------------------------------------------------------
# complete intersections

@dataclass(frozen=True)
class CITangentChern:
    """Chern classes of the tangent bundle of a complete intersection, as multiples of h^k."""

    ambient_dim: int
    degrees: tuple[int, ...]
    coefficients: tuple[Fraction, ...]

    @property
    def dimension(self) -> int:
        return self.ambient_dim - len(self.degrees)

    @property
    def degree(self) -> int:
        """Integral of h^dim, i.e. the product of the degrees."""
        return prod(self.degrees)

    def c(self, k: int) -> Fraction:
        return self.coefficients[k] if k < len(self.coefficients) else Fraction(0)

    @property
    def c1(self):
        return self.c(1)

    @property
    def c2(self):
        return self.c(2)

    @property
    def c3(self):
        return self.c(3)

    @property
    def euler_characteristic(self) -> Fraction:
        return self.c(self.dimension) * self.degree


def ci_tangent_chern(ambient_dim: int, degrees: Sequence[int]) -> CITangentChern:
    """Truncated series (1+h)^(n+1) / prod(1 + d_i h) in P^n."""
    degrees = tuple(int(d) for d in degrees)
    dim = ambient_dim - len(degrees)
    if dim < 0:
        raise ChernError("more equations than ambient dimensions")
    series = [Fraction(comb(ambient_dim + 1, k)) for k in range(dim + 1)]
    for d in degrees:
        # divide by (1 + d h), in place, low degree first
        for k in range(1, dim + 1):
            series[k] -= d * series[k - 1]
    coeffs = tuple(series)
    return CITangentChern(ambient_dim, degrees, coeffs)


def euler_resolution(chi_smooth: int, nodes: int) -> int:
    """Euler characteristic of a small resolution of a nodal degeneration.

    Each node adds one when the smooth member degenerates, and one more when
    the node is replaced by a P1.
    """
    return chi_smooth + 2 * nodes


# ---------------------------------------------------------------------------
# the six sheaves used to pin down the transform

@dataclass(frozen=True)
class BasisSheaf:
    name: str
    ch: CohClass          # ch(F) on V
    sq_image: CohClass    # ch(S_Q F) on V, before descending to V^
    verified: bool


@lru_cache(maxsize=None)
def basis_sheaves() -> tuple[BasisSheaf, ...]:
    """ch(F) and ch(S_Q F) for O_A, O_e, O_pt, O_A(H), O_V, O_V(H).

    The last two images rest on unproved assumptions about the singular
    fibers and are flagged ``verified=False``.
    """
    V = builtin_model("V")
    A, e, p = fiber(), section(), point()
    H = V.cls("H")
    h = A.model.cls("h")
    B = e.model

    o_a = push_sheaf(A, A.model.one())
    o_e = push_sheaf(e, B.one())
    o_pt = push_sheaf(p, p.model.one())
    o_ah = push_sheaf(A, line_bundle_character(h))
    o_v = V.one()
    o_vh = ch_from_c(ChernClasses(1, H, V.zero(), V.zero()))

    # S_Q(O_A) = 64 skyscrapers; S_Q(O_e) = O_V; S_Q(O_pt) = O_A
    sq_a = 64 * o_pt
    sq_e = o_v
    sq_pt = o_a
    # S_Q(O_A(H)) = H^0(A,H) (x) O_A(-H): rank 8 trivial twisted by -h
    sq_ah = push_sheaf(A, 8 * line_bundle_character(-h))
    # S_Q(O_V) = sum over 64 sections of O_B(-2)
    sq_v = 64 * push_sheaf(e, line_bundle_character(-2 * B.point()))
    # S_Q(O_V(H)) = pi^* pi_* O_V(H) (x) O(-H), rank 8
    sq_vh = tensor(8 * V.one(), line_bundle_character(-H))

    return (
        BasisSheaf("O_A", o_a, sq_a, True),
        BasisSheaf("O_e", o_e, sq_e, True),
        BasisSheaf("O_pt", o_pt, sq_pt, True),
        BasisSheaf("O_A(H)", o_ah, sq_ah, True),
        BasisSheaf("O_V", o_v, sq_v, False),
        BasisSheaf("O_V(H)", o_vh, sq_vh, False),
    )
