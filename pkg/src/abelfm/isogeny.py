"""Linear maps between ring models and the degree-64 isogeny V -> V^.

The quotient map by the Z8 x Z8 translation group acts on cohomology by

=========  =============  ==========  ============
class      pullback       class       pushforward
=========  =============  ==========  ============
V^         V              V           64 V^
H^         8 H            H           8 H^
A^         A              A           64 A^
e^         64 e           e           e^
E^         8 l            l           8 E^
pt         64 pt          pt          pt
=========  =============  ==========  ============

The unit rows are not listed explicitly in the literature; they are fixed by
the unit law (pullback) and by ``push(pull(x)) = 64 x`` (pushforward).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from . import linalg
from .ring import CohClass, ModelMismatchError, RingModel, builtin_model, mul

ISOGENY_DEGREE = 64

KINDS = ("pullback", "pushforward", "fm", "fm_inverse", "generic")


@dataclass(frozen=True, eq=False)
class CohMap:
    """Exact rational matrix from ``source`` classes to ``target`` classes.

    Columns are indexed by the source basis and rows by the target basis.
    """

    source: RingModel
    target: RingModel
    matrix: linalg.Matrix
    kind: str = "generic"

    def __post_init__(self):
        if linalg.shape(self.matrix) != (self.target.rank, self.source.rank):
            raise ValueError(
                f"matrix shape {linalg.shape(self.matrix)} does not match "
                f"{self.source.name} -> {self.target.name}"
            )
        if self.kind not in KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}")

    @classmethod
    def from_images(cls, source, target, images: Mapping[str, str | CohClass], kind="generic"):
        """Build a map from basis images, given as classes or expressions on ``target``."""
        cols = []
        for lab in source.labels:
            img = images.get(lab, target.zero())
            if isinstance(img, str):
                img = target.parse(img)
            cols.append(img.coeffs)
        return cls(source, target, linalg.transpose(tuple(cols)), kind)

    def __call__(self, x: CohClass) -> CohClass:
        return apply(self, x)

    def column(self, label: str) -> CohClass:
        j = self.source.index(label)
        return CohClass(self.target, tuple(row[j] for row in self.matrix))

    def __eq__(self, other):
        if not isinstance(other, CohMap):
            return NotImplemented
        return (
            self.source.same_as(other.source)
            and self.target.same_as(other.target)
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.source.name, self.target.name, self.matrix))

    def preserves_degree(self) -> bool:
        for i, t in enumerate(self.target.basis):
            for j, s in enumerate(self.source.basis):
                if self.matrix[i][j] and t.degree != s.degree:
                    return False
        return True


def apply(f: CohMap, x: CohClass) -> CohClass:
    if not f.source.same_as(x.model):
        raise ModelMismatchError(f"map expects a class on {f.source.name}, got {x.model.name}")
    return CohClass(f.target, linalg.matvec(f.matrix, x.coeffs))


def compose(f: CohMap, g: CohMap) -> CohMap:
    """``f o g`` (apply ``g`` first)."""
    if not g.target.same_as(f.source):
        raise ModelMismatchError(f"cannot compose {f.source.name}<-... with ...->{g.target.name}")
    return CohMap(g.source, f.target, linalg.matmul(f.matrix, g.matrix), "generic")


def identity_map(model: RingModel) -> CohMap:
    return CohMap(model, model, linalg.identity(model.rank), "generic")


def scaled(f: CohMap, c) -> CohMap:
    return CohMap(f.source, f.target, linalg.scale(f.matrix, c), f.kind)


@lru_cache(maxsize=None)
def phi_pullback() -> CohMap:
    V, W = builtin_model("V"), builtin_model("Vdual")
    return CohMap.from_images(
        W, V,
        {"V^": "[V]", "H^": "8[H]", "A^": "[A]", "e^": "64[e]", "E^": "8[l]", "pt": "64[pt]"},
        kind="pullback",
    )


@lru_cache(maxsize=None)
def phi_pushforward() -> CohMap:
    V, W = builtin_model("V"), builtin_model("Vdual")
    return CohMap.from_images(
        V, W,
        {"V": "64[V^]", "H": "8[H^]", "A": "64[A^]", "e": "[e^]", "l": "8[E^]", "pt": "[pt]"},
        kind="pushforward",
    )


# ---------------------------------------------------------------------------
# laws; each returns (description, lhs, rhs) for every case that fails

def ring_homomorphism_failures(pull: CohMap | None = None):
    pull = pull or phi_pullback()
    src = pull.source
    out = []
    for i, j in itertools.combinations_with_replacement(range(src.rank), 2):
        x, y = src.basis_class(i), src.basis_class(j)
        lhs = apply(pull, mul(x, y))
        rhs = mul(apply(pull, x), apply(pull, y))
        if lhs != rhs:
            out.append((f"pull({src.labels[i]}*{src.labels[j]})", lhs, rhs))
    return out


def projection_formula_failures(pull: CohMap | None = None, push: CohMap | None = None):
    pull = pull or phi_pullback()
    push = push or phi_pushforward()
    out = []
    for i, j in itertools.product(range(push.source.rank), range(pull.source.rank)):
        x, y = push.source.basis_class(i), pull.source.basis_class(j)
        lhs = apply(push, mul(x, apply(pull, y)))
        rhs = mul(apply(push, x), y)
        if lhs != rhs:
            out.append((f"push({push.source.labels[i]}*pull({pull.source.labels[j]}))", lhs, rhs))
    return out


def degree_identity_failures(pull: CohMap | None = None, push: CohMap | None = None,
                             degree: int = ISOGENY_DEGREE):
    pull = pull or phi_pullback()
    push = push or phi_pushforward()
    out = []
    for i in range(pull.source.rank):
        x = pull.source.basis_class(i)
        lhs = apply(push, apply(pull, x))
        if lhs != x * degree:
            out.append((f"push(pull({pull.source.labels[i]}))", lhs, x * degree))
    return out
