"""The Fourier-Mukai transform V -> V^ on rational cohomology.

The transform is pinned down by six sheaves on V whose Chern characters and
transforms are known (see :func:`abelfm.chern.basis_sheaves`).  Two of those
six rest on unproved claims about the singular fibers, so the matrix carries
per-column reliability: a column is *verified* when its basis class lies in
the span of the characters of the verified sheaves.  For the printed matrix
that is the last four columns, [A], [e], [l], [pt].
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .chern import basis_sheaves
from .isogeny import ISOGENY_DEGREE, CohMap, apply, phi_pushforward
from .ring import CohClass, ModelMismatchError, builtin_model


class RankDeficientError(ValueError):
    pass


class InconsistentPairsError(ValueError):
    pass


class UnverifiedColumnError(ValueError):
    """A class has weight on a column of the transform that is only conjectural."""


F = Fraction

# basis order (V, H, A, e, l, pt) -> (V^, H^, A^, e^, E^, pt)
SP_PRINTED = linalg.matrix([
    [0, 0, 0, 1, 0, 0],
    [0, -1, 0, 0, 0, 0],
    [0, F(16, 3), 0, -1, 0, 1],
    [1, 0, 0, 0, 0, 0],
    [0, 16, 0, 0, -1, 0],
    [-1, F(2, 3), 1, 0, 0, 0],
])

SP_INVERSE_PRINTED = linalg.matrix([
    [0, 0, 0, 1, 0, 0],
    [0, -1, 0, 0, 0, 0],
    [0, F(2, 3), 0, 1, 0, 1],
    [1, 0, 0, 0, 0, 0],
    [0, -16, 0, 0, -1, 0],
    [1, F(16, 3), 1, 0, 0, 0],
])

# ch(S_P F) for the six basis sheaves, in the same order as chern.basis_sheaves()
TABLE_IMAGES = (
    ("O_A", "[pt]"),
    ("O_e", "[V^]"),
    ("O_pt", "[A^]"),
    ("O_A(H)", "8[A^] - 16[E^] + [pt]"),
    ("O_V", "[e^] - [pt]"),
    ("O_V(H)", "8[V^] - [H^] + [e^] + 8[E^] - 1/3[pt]"),
)


@dataclass(frozen=True)
class FMMatrix:
    map: CohMap
    provenance: str
    verified: frozenset

    @property
    def source(self):
        return self.map.source

    @property
    def target(self):
        return self.map.target

    @property
    def matrix(self):
        return self.map.matrix

    def column_status(self) -> dict[str, str]:
        return {lab: ("verified" if lab in self.verified else "expected") for lab in self.source.labels}

    def __call__(self, x: CohClass) -> CohClass:
        return apply(self.map, x)

    def apply_verified(self, x: CohClass) -> CohClass:
        """Apply, refusing classes that touch an unverified column."""
        if not x.model.same_as(self.source):
            raise ModelMismatchError(f"expected a class on {self.source.name}, got {x.model.name}")
        bad = [lab for lab, c in zip(self.source.labels, x.coeffs) if c and lab not in self.verified]
        if bad:
            raise UnverifiedColumnError(
                f"{x} has components on unverified columns {', '.join(bad)}"
            )
        return apply(self.map, x)


def _in_span(vectors: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    if not vectors:
        return not any(v)
    base = linalg.rank(linalg.matrix(vectors))
    return linalg.rank(linalg.matrix([*vectors, v])) == base


def _verified_columns(source, verified_inputs) -> frozenset:
    vecs = [x.coeffs for x in verified_inputs]
    return frozenset(
        lab for i, lab in enumerate(source.labels) if _in_span(vecs, source.basis_class(i).coeffs)
    )


def reconstruct_from_pairs(pairs: Iterable, kind: str = "fm") -> FMMatrix:
    """The unique linear map sending each input class to its output.

    ``pairs`` holds ``(x, y)`` or ``(x, y, verified)`` tuples.  Columns whose
    basis class is spanned by the verified inputs are marked verified
    (all inputs count as verified when no flag is given).
    """
    pairs = [tuple(p) for p in pairs]
    if not pairs:
        raise RankDeficientError("no pairs given")
    src, tgt = pairs[0][0].model, pairs[0][1].model
    for p in pairs:
        if not (p[0].model.same_as(src) and p[1].model.same_as(tgt)):
            raise ModelMismatchError("all pairs must share source and target models")
    ins = linalg.transpose(linalg.matrix(p[0].coeffs for p in pairs))
    outs = linalg.transpose(linalg.matrix(p[1].coeffs for p in pairs))
    cols = linalg.independent_columns(ins)
    if len(cols) < src.rank:
        raise RankDeficientError(
            f"inputs span a space of rank {len(cols)} < {src.rank}; the map is not determined"
        )
    pick = lambda m: tuple(tuple(row[j] for j in cols) for row in m)
    mat = linalg.matmul(pick(outs), linalg.inverse(pick(ins)))
    if linalg.matmul(mat, ins) != outs:
        bad = [i for i, p in enumerate(pairs) if linalg.matvec(mat, p[0].coeffs) != p[1].coeffs]
        raise InconsistentPairsError(f"pairs {bad} are inconsistent with the rest")
    verified = [p[0] for p in pairs if len(p) < 3 or p[2]]
    return FMMatrix(CohMap(src, tgt, mat, kind), "reconstructed", _verified_columns(src, verified))


@lru_cache(maxsize=None)
def builtin_sP() -> FMMatrix:
    V, W = builtin_model("V"), builtin_model("Vdual")
    verified = [s.ch for s in basis_sheaves() if s.verified]
    return FMMatrix(CohMap(V, W, SP_PRINTED, "fm"), "builtin_table", _verified_columns(V, verified))


@lru_cache(maxsize=None)
def builtin_sP_inverse() -> FMMatrix:
    V, W = builtin_model("V"), builtin_model("Vdual")
    # a target class is reliable when its preimage only uses verified columns
    fwd = builtin_sP()
    inv = CohMap(W, V, SP_INVERSE_PRINTED, "fm_inverse")
    verified = frozenset(
        lab for lab in W.labels
        if all(c == 0 or s in fwd.verified for s, c in zip(V.labels, inv.column(lab).coeffs))
    )
    return FMMatrix(inv, "builtin_table", verified)


def apply_fm(ch: CohClass) -> CohClass:
    return builtin_sP()(ch)


def apply_fm_inverse(ch: CohClass) -> CohClass:
    return builtin_sP_inverse()(ch)


def apply_integer_batch(f: FMMatrix, X) -> tuple[np.ndarray, int]:
    """Images of many integer coefficient vectors at once, exactly.

    ``X`` has one row per class (source basis order).  Returns ``(Y, d)``
    with the images equal to ``Y / d``, where ``d`` is the common
    denominator of the matrix.  Falls back to Python integers when int64
    could overflow.
    """
    d = lcm(*(x.denominator for row in f.matrix for x in row))
    M = np.array([[int(x * d) for x in row] for row in f.matrix], dtype=object)
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[1] != f.source.rank:
        raise ValueError(f"expected an (N, {f.source.rank}) array")
    bound = int(np.abs(X).max(initial=0)) * int(max(abs(v) for v in M.flat)) * f.source.rank
    if bound < 2 ** 62:
        return X.astype(np.int64) @ M.astype(np.int64).T, d
    return X.astype(object) @ M.T, d


def table_images() -> list[CohClass]:
    """ch(S_P F) for the six basis sheaves as tabulated."""
    W = builtin_model("Vdual")
    return [W.parse(expr) for _, expr in TABLE_IMAGES]


def descend(ch_on_V: CohClass) -> CohClass:
    """Invariant part of a class under the quotient: push forward and divide by the degree."""
    return apply(phi_pushforward(), ch_on_V) / ISOGENY_DEGREE


def table_pairs(images: str = "table") -> list[tuple[CohClass, CohClass, bool]]:
    """(ch(F), ch(S_P F), verified) for the six basis sheaves.

    ``images="table"`` takes the tabulated transforms; ``images="descended"``
    derives them from the S_Q images on V via :func:`descend`.
    """
    sheaves = basis_sheaves()
    if images == "table":
        outs = table_images()
    elif images == "descended":
        outs = [descend(s.sq_image) for s in sheaves]
    else:
        raise ValueError(f"unknown image source {images!r}")
    return [(s.ch, y, s.verified) for s, y in zip(sheaves, outs)]
