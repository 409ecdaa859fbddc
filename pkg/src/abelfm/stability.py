"""Ampleness, effectivity bounds and slope-stability thresholds on V^."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Sequence

from .ring import CohClass, builtin_model, integrate, mul


class NotAmpleError(ValueError):
    pass


def _dual():
    return builtin_model("Vdual")


def cone_generators() -> dict[str, CohClass]:
    """Extremal rays of the closed cone of curves on V^: e^ and l^ = 8 E^."""
    W = _dual()
    return {"e^": W.cls("e^"), "l^": 8 * W.cls("E^")}


@dataclass(frozen=True)
class PolarizationChoice:
    """The divisor l H^ + k A^."""

    l: Fraction
    k: Fraction

    def __post_init__(self):
        object.__setattr__(self, "l", Fraction(self.l))
        object.__setattr__(self, "k", Fraction(self.k))
        if self.l < 0 or self.k < 0:
            raise ValueError("polarization coefficients must be nonnegative")

    def divisor(self) -> CohClass:
        return _dual().from_dict({"H^": self.l, "A^": self.k})

    def shifted(self, k: int | Fraction) -> "PolarizationChoice":
        """D_k = H_0 + k A^."""
        return PolarizationChoice(self.l, self.k + Fraction(k))


@dataclass(frozen=True)
class AmpleResult:
    ample: bool
    values: dict          # generator label -> D . C
    witness: str | None   # first generator with D . C <= 0

    def __bool__(self):
        return self.ample


def is_ample(D: PolarizationChoice) -> AmpleResult:
    """Kleiman: D . C > 0 on both extremal rays of the closed cone of curves.

    Note ``H^ . e^ = 0``, so ``l H^`` alone is never ample; both coefficients
    must be strictly positive.
    """
    d = D.divisor()
    values = {lab: integrate(mul(d, c)) for lab, c in cone_generators().items()}
    witness = next((lab for lab, v in values.items() if v <= 0), None)
    return AmpleResult(witness is None, values, witness)


def effectivity_inequalities(D: CohClass, H0: PolarizationChoice) -> tuple[Fraction, Fraction, Fraction]:
    """(D . H0^i . A^(2-i)) for i = 0, 1, 2; all are >= 0 for effective D."""
    if not is_ample(H0):
        raise NotAmpleError(f"{H0} is not ample")
    if not D.is_homogeneous(2):
        raise ValueError("D must be a divisor class")
    h, a = H0.divisor(), _dual().cls("A^")
    return tuple(integrate(mul(mul(D, h ** i), a ** (2 - i))) for i in range(3))


def slope(ch: CohClass, D: PolarizationChoice) -> Fraction:
    """mu_D = c1 . D^2 / rank."""
    r = ch.coeffs[ch.model.unit_index]
    if r == 0:
        raise ValueError("slope is undefined for rank zero")
    d = D.divisor()
    return integrate(mul(ch.graded(2), mul(d, d))) / r


def subsheaf_bound(filtration: Sequence[CohClass], H0: PolarizationChoice) -> Fraction:
    """The constant a bounding c1(F) . H0^i . A^(2-i) / rk F over subsheaves F.

    ``filtration`` lists c1 of the rank-one quotients.  The i = 0 term is 0
    because A^2 = 0 and is included as such.
    """
    if not filtration:
        raise ValueError("empty filtration")
    h, a = H0.divisor(), _dual().cls("A^")
    best = Fraction(0)
    for c in filtration:
        for i in (1, 2):
            best = max(best, integrate(mul(mul(c, h ** i), a ** (2 - i))))
    return best


def stability_threshold(a, mu_E, n: int) -> int:
    """Least integer k >= 1 with a - 2k/(n-1) < mu_E."""
    if n < 2:
        raise ValueError("rank must be at least 2")
    a, mu_E = Fraction(a), Fraction(mu_E)
    return max(1, floor((n - 1) * (a - mu_E) / 2) + 1)
