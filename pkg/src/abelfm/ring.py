"""Graded intersection rings with exact rational coefficients.

A :class:`RingModel` is a finite basis of even-degree classes together with a
dense multiplication table.  Classes (:class:`CohClass`) are coefficient
vectors over that basis.  Everything is computed mod torsion over
:class:`fractions.Fraction`.

Four models are built in:

* ``"V"``      the resolved (1,8) abelian surface fibration, basis V, H, A, e, l, pt
* ``"Vdual"``  its quotient by Z8 x Z8, basis V^, H^, A^, e^, E^, pt
* ``"S"``      the ruled surface normalising a translation scroll, basis S, C0, F, pt
* ``"ExE"``    the Neron-Severi part of E x E, basis ExE, E, F, D, pt (D the diagonal)

Examples
--------
>>> V = builtin_model("V")
>>> H = V.cls("H")
>>> integrate(H * H * H)
Fraction(16, 1)
>>> str(H * V.cls("A"))
'16[l]'
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping

from .linalg import as_fraction, matrix, rank


class ModelError(ValueError):
    """A ring model violates one of the structural invariants."""


class ModelMismatchError(ValueError):
    """Two classes (or a class and a map) live on different models."""


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


@dataclass(frozen=True)
class BasisElement:
    label: str
    degree: int


@dataclass(frozen=True, eq=False)
class RingModel:
    """Finite graded commutative ring given by a basis and a multiplication table.

    ``table[i][j]`` is the coefficient vector of ``basis[i] * basis[j]``.  Use
    :meth:`from_products` rather than building the table by hand.
    """

    name: str
    basis: tuple[BasisElement, ...]
    table: tuple[tuple[tuple[Fraction, ...], ...], ...]
    top_degree: int
    _sparse: tuple = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)
    _unit: int = field(init=False, repr=False, compare=False)
    _point: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = [b.label for b in self.basis]
        if len(set(labels)) != len(labels):
            raise ModelError(f"model {self.name}: duplicate basis labels")
        n = len(self.basis)
        if len(self.table) != n or any(len(r) != n or any(len(v) != n for v in r) for r in self.table):
            raise ModelError(f"model {self.name}: multiplication table has wrong shape")
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})
        sparse = tuple(
            tuple(tuple((k, c) for k, c in enumerate(v) if c) for v in row) for row in self.table
        )
        object.__setattr__(self, "_sparse", sparse)
        units = [i for i, b in enumerate(self.basis) if b.degree == 0]
        tops = [i for i, b in enumerate(self.basis) if b.degree == self.top_degree]
        object.__setattr__(self, "_unit", units[0] if units else None)
        object.__setattr__(self, "_point", tops[0] if tops else None)

    def __reduce__(self):
        # keep built-ins identical across process boundaries
        if self.name in _BUILTINS and builtin_model(self.name) is self:
            return (builtin_model, (self.name,))
        return (RingModel, (self.name, self.basis, self.table, self.top_degree))

    # construction -------------------------------------------------------

    @classmethod
    def from_products(
        cls,
        name: str,
        basis: Iterable[tuple[str, int]],
        products: Mapping[tuple[str, str], Mapping[str, object]],
        top_degree: int,
        *,
        implicit_unit: bool = True,
    ) -> "RingModel":
        """Build a model from a sparse product listing.

        ``products`` maps an unordered label pair to ``{label: coefficient}``.
        Missing pairs are zero.  With ``implicit_unit`` the unique degree-0
        element multiplies as the identity unless a product says otherwise.
        """
        basis = tuple(BasisElement(lab, int(deg)) for lab, deg in basis)
        index = {b.label: i for i, b in enumerate(basis)}
        n = len(basis)
        tab = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        if implicit_unit:
            units = [i for i, b in enumerate(basis) if b.degree == 0]
            if len(units) == 1:
                u = units[0]
                for j in range(n):
                    tab[u][j] = [Fraction(int(k == j)) for k in range(n)]
                    tab[j][u] = list(tab[u][j])
        for (la, lb), value in products.items():
            for lab in (la, lb, *value):
                if lab not in index:
                    raise ModelError(f"model {name}: unknown label {lab!r} in products")
            vec = [Fraction(0)] * n
            for lab, c in value.items():
                vec[index[lab]] = as_fraction(c)
            i, j = index[la], index[lb]
            tab[i][j] = list(vec)
            tab[j][i] = list(vec)
        table = tuple(tuple(tuple(v) for v in row) for row in tab)
        return cls(name, basis, table, int(top_degree))

    # lookups ------------------------------------------------------------

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(b.label for b in self.basis)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown label {label!r} in model {self.name}") from None

    @property
    def unit_index(self) -> int:
        if self._unit is None:
            raise ModelError(f"model {self.name} has no degree-0 element")
        return self._unit

    @property
    def point_index(self) -> int:
        if self._point is None:
            raise ModelError(f"model {self.name} has no top-degree element")
        return self._point

    def degree_indices(self, degree: int) -> list[int]:
        return [i for i, b in enumerate(self.basis) if b.degree == degree]

    # class factories ----------------------------------------------------

    def zero(self) -> "CohClass":
        return CohClass(self, (Fraction(0),) * self.rank)

    def one(self) -> "CohClass":
        return self.basis_class(self.unit_index)

    def point(self) -> "CohClass":
        return self.basis_class(self.point_index)

    def basis_class(self, i: int) -> "CohClass":
        return CohClass(self, tuple(Fraction(int(k == i)) for k in range(self.rank)))

    def cls(self, label: str) -> "CohClass":
        return self.basis_class(self.index(label))

    def from_coeffs(self, coeffs: Iterable) -> "CohClass":
        return CohClass(self, tuple(as_fraction(c) for c in coeffs))

    def from_dict(self, coeffs: Mapping[str, object]) -> "CohClass":
        vec = [Fraction(0)] * self.rank
        for lab, c in coeffs.items():
            vec[self.index(lab)] += as_fraction(c)
        return CohClass(self, tuple(vec))

    def parse(self, text: str) -> "CohClass":
        return parse_class(text, self)

    def __repr__(self):
        return f"RingModel({self.name!r}, labels={self.labels}, top_degree={self.top_degree})"

    def same_as(self, other: "RingModel") -> bool:
        return self is other or (
            self.name == other.name
            and self.basis == other.basis
            and self.table == other.table
            and self.top_degree == other.top_degree
        )


@dataclass(frozen=True, eq=False)
class CohClass:
    """An exact rational cohomology class over a :class:`RingModel`."""

    model: RingModel
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.model.rank:
            raise ValueError("coefficient vector does not match the model basis")

    def _check(self, other: "CohClass"):
        if not isinstance(other, CohClass):
            return NotImplemented
        if not self.model.same_as(other.model):
            raise ModelMismatchError(f"classes live on {self.model.name} and {other.model.name}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CohClass(self.model, tuple((a + b if a else b) if b else a for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CohClass(self.model, tuple((a - b if a else -b) if b else a for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CohClass(self.model, tuple(-a if a else a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, CohClass):
            return mul(self, other)
        if isinstance(other, (int, Fraction)):
            if other == 1:
                return self
            c = Fraction(other)
            return CohClass(self.model, tuple(c * a if a else a for a in self.coeffs))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        out = self.model.one()
        for _ in range(n):
            out = mul(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, CohClass):
            return NotImplemented
        return self.model.same_as(other.model) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.model.name, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __getitem__(self, label: str) -> Fraction:
        return self.coeffs[self.model.index(label)]

    def graded(self, degree: int) -> "CohClass":
        """The part of the class living in the given real degree."""
        return CohClass(
            self.model,
            tuple(c if b.degree == degree else Fraction(0) for c, b in zip(self.coeffs, self.model.basis)),
        )

    def is_homogeneous(self, degree: int) -> bool:
        return all(c == 0 or b.degree == degree for c, b in zip(self.coeffs, self.model.basis))

    def as_dict(self) -> dict[str, Fraction]:
        return {b.label: c for b, c in zip(self.model.basis, self.coeffs) if c}

    def __str__(self):
        return format_class(self)

    def __repr__(self):
        return f"CohClass({self.model.name}: {format_class(self)})"


_ZERO = Fraction(0)


def mul(x: CohClass, y: CohClass) -> CohClass:
    """Bilinear product from the model's table."""
    if not x.model.same_as(y.model):
        raise ModelMismatchError(f"classes live on {x.model.name} and {y.model.name}")
    model = x.model
    out = [_ZERO] * model.rank
    sp = model._sparse
    ys = [(j, b) for j, b in enumerate(y.coeffs) if b]
    for i, a in enumerate(x.coeffs):
        if not a:
            continue
        row = sp[i]
        for j, b in ys:
            entry = row[j]
            if not entry:
                continue
            ab = a * b
            for k, c in entry:
                out[k] = out[k] + (ab if c == 1 else ab * c)
    return CohClass(model, tuple(out))


def integrate(x: CohClass) -> Fraction:
    """Coefficient of the point class."""
    return x.coeffs[x.model.point_index]


def intersect(*classes: CohClass) -> Fraction:
    """Integral of the product of the given classes."""
    out = classes[0]
    for c in classes[1:]:
        out = mul(out, c)
    return integrate(out)


# ---------------------------------------------------------------------------
# printing and parsing

def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_class(x: CohClass) -> str:
    """Canonical text form, basis order, e.g. ``8[V^] - [H^] - 1/3[pt]``."""
    parts = []
    for b, c in zip(x.model.basis, x.coeffs):
        if not c:
            continue
        mag = abs(c)
        body = f"[{b.label}]" if mag == 1 else f"{format_rational(mag)}[{b.label}]"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<op>[+\-*/])|(?P<label>\[[^\[\]]*\]))"
)


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        toks.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    return toks


def parse_class(text: str, model: RingModel) -> CohClass:
    """Parse a class expression such as ``"2[H] - 1/3[pt]"``.

    Grammar (whitespace insignificant)::

        expr     := sign? term (("+" | "-") term)*
        term     := rational? "*"? "[" label "]" | rational
        rational := integer ("/" positive-integer)?

    A bare rational is a multiple of the unit class.
    """
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty expression", 0)
    vec = [Fraction(0)] * model.rank
    i = 0

    def peek(kind=None, value=None):
        if i >= len(toks):
            return None
        t = toks[i]
        if kind and t[0] != kind:
            return None
        if value and t[1] != value:
            return None
        return t

    sign = 1
    if peek("op", "-") or peek("op", "+"):
        sign = -1 if toks[i][1] == "-" else 1
        i += 1
    while True:
        if i >= len(toks):
            raise ParseError("expected a term", len(text))
        coeff = None
        if peek("num"):
            num = int(toks[i][1])
            i += 1
            den = 1
            if peek("op", "/"):
                i += 1
                if not peek("num"):
                    raise ParseError("expected a positive integer denominator", toks[i][2] if i < len(toks) else len(text))
                den = int(toks[i][1])
                if den == 0:
                    raise ParseError("zero denominator", toks[i][2])
                i += 1
            coeff = Fraction(num, den)
        star = False
        if peek("op", "*"):
            if coeff is None:
                raise ParseError("'*' must follow a coefficient", toks[i][2])
            star = True
            i += 1
        if peek("label"):
            raw, pos = toks[i][1], toks[i][2]
            label = raw[1:-1].strip()
            if label not in model._index:
                raise ParseError(f"unknown label {label!r} for model {model.name}", pos)
            vec[model.index(label)] += sign * (coeff if coeff is not None else 1)
            i += 1
        elif coeff is not None and not star:
            vec[model.unit_index] += sign * coeff
        else:
            t = toks[i] if i < len(toks) else None
            raise ParseError("expected a term", t[2] if t else len(text))
        if i == len(toks):
            break
        t = toks[i]
        if t[0] != "op" or t[1] not in "+-":
            raise ParseError(f"expected '+' or '-', found {t[1]!r}", t[2])
        sign = -1 if t[1] == "-" else 1
        i += 1
    return CohClass(model, tuple(vec))


# ---------------------------------------------------------------------------
# invariants

def pairing_matrix(model: RingModel, degree: int):
    """Matrix of integrate(b_i * b_j) for b_i of ``degree``, b_j of complementary degree."""
    rows = model.degree_indices(degree)
    cols = model.degree_indices(model.top_degree - degree)
    p = model.point_index
    return matrix([[model.table[i][j][p] for j in cols] for i in rows])


def model_violations(model: RingModel) -> list[str]:
    """Human-readable list of violated ring invariants (empty when the model is sound)."""
    problems = []
    n = model.rank
    basis = model.basis
    if any(b.degree % 2 or b.degree < 0 or b.degree > model.top_degree for b in basis):
        problems.append("basis degrees must be even and within [0, top_degree]")
    units = [b.label for b in basis if b.degree == 0]
    tops = [b.label for b in basis if b.degree == model.top_degree]
    if len(units) != 1:
        problems.append(f"expected exactly one degree-0 element, found {units}")
    if len(tops) != 1:
        problems.append(f"expected exactly one top-degree element, found {tops}")
    if problems:
        return problems
    lab = model.labels
    for i, j in itertools.combinations_with_replacement(range(n), 2):
        if model.table[i][j] != model.table[j][i]:
            problems.append(f"commutativity: {lab[i]}*{lab[j]} != {lab[j]}*{lab[i]}")
        d = basis[i].degree + basis[j].degree
        for k, c in enumerate(model.table[i][j]):
            if c and basis[k].degree != d:
                problems.append(f"grading: {lab[i]}*{lab[j]} has a {lab[k]} component")
                break
    u = model.unit_index
    for j in range(n):
        if model.table[u][j] != tuple(Fraction(int(k == j)) for k in range(n)):
            problems.append(f"unit: {lab[u]}*{lab[j]} != {lab[j]}")
    e = [model.basis_class(i) for i in range(n)]
    for i, j, k in itertools.combinations_with_replacement(range(n), 3):
        for a, b, c in {(i, j, k), (j, k, i), (k, i, j)}:
            left, right = mul(mul(e[a], e[b]), e[c]), mul(e[a], mul(e[b], e[c]))
            if left != right:
                problems.append(
                    f"associativity: ({lab[a]}*{lab[b]})*{lab[c]} = {format_class(left)}"
                    f" but {lab[a]}*({lab[b]}*{lab[c]}) = {format_class(right)}"
                )
    for d in sorted({b.degree for b in basis}):
        if d > model.top_degree - d:
            continue
        m = pairing_matrix(model, d)
        if not m or len(m) != len(m[0]) or rank(m) != len(m):
            problems.append(f"Poincare pairing degenerate in degree {d}")
    return problems


def validate(model: RingModel) -> RingModel:
    problems = model_violations(model)
    if problems:
        raise ModelError(f"model {model.name}: " + "; ".join(problems))
    return model


# ---------------------------------------------------------------------------
# built-in models

_BUILTINS = {
    "V": dict(
        basis=[("V", 0), ("H", 2), ("A", 2), ("e", 4), ("l", 4), ("pt", 6)],
        products={
            ("H", "H"): {"e": 16, "l": 16},
            ("H", "A"): {"l": 16},
            ("H", "e"): {},
            ("H", "l"): {"pt": 1},
            ("A", "e"): {"pt": 1},
            ("A", "l"): {},
        },
        top_degree=6,
    ),
    "Vdual": dict(
        basis=[("V^", 0), ("H^", 2), ("A^", 2), ("e^", 4), ("E^", 4), ("pt", 6)],
        products={
            ("H^", "H^"): {"e^": 16, "E^": 128},
            ("H^", "A^"): {"E^": 16},
            ("H^", "e^"): {},
            ("H^", "E^"): {"pt": 1},
            ("A^", "e^"): {"pt": 1},
            ("A^", "E^"): {},
        },
        top_degree=6,
    ),
    # C0^2 = 0 is what makes chi(C0 + 4F) = 8 come out right.
    "S": dict(
        basis=[("S", 0), ("C0", 2), ("F", 2), ("pt", 4)],
        products={("C0", "F"): {"pt": 1}},
        top_degree=4,
    ),
    "ExE": dict(
        basis=[("ExE", 0), ("E", 2), ("F", 2), ("D", 2), ("pt", 4)],
        products={
            ("E", "F"): {"pt": 1},
            ("E", "D"): {"pt": 1},
            ("F", "D"): {"pt": 1},
        },
        top_degree=4,
    ),
}

BUILTIN_NAMES = tuple(_BUILTINS)


@lru_cache(maxsize=None)
def builtin_model(name: str) -> RingModel:
    """One of ``"V"``, ``"Vdual"``, ``"S"``, ``"ExE"``."""
    try:
        spec = _BUILTINS[name]
    except KeyError:
        raise ModelError(f"unknown built-in model {name!r}; choose from {', '.join(_BUILTINS)}") from None
    return RingModel.from_products(name, spec["basis"], spec["products"], spec["top_degree"])


# ---------------------------------------------------------------------------
# model file format

def dump_model(model: RingModel) -> str:
    lines = [f"model {model.name} topdeg {model.top_degree}"]
    lines += [f"basis {b.label} {b.degree}" for b in model.basis]
    u = model.unit_index
    for i, j in itertools.combinations_with_replacement(range(model.rank), 2):
        if u in (i, j):
            continue
        v = model.basis_class(i) * model.basis_class(j)
        if v:
            lines.append(f"mul {model.labels[i]} {model.labels[j]} = {format_class(v)}")
    return "\n".join(lines) + "\n"


def parse_models(text: str) -> list[RingModel]:
    """Parse one or more models from the line-oriented text format.

    ::

        model <name> topdeg <n>
        basis <label> <degree>
        mul <labelA> <labelB> = <expr>

    ``#`` starts a comment.  Absent pairs are zero; the unit acts as the
    identity unless a ``mul`` line for it says otherwise.  Models are not
    validated here, see :func:`model_violations`.
    """
    models = []
    cur = None

    def finish():
        if cur is None:
            return
        name, top, basis, muls = cur
        tmp = RingModel.from_products(name, basis, {}, top)
        products = {}
        for lineno, la, lb, expr in muls:
            for lab in (la, lb):
                if lab not in tmp._index:
                    raise ParseError(f"line {lineno}: unknown label {lab!r}")
            try:
                products[(la, lb)] = parse_class(expr, tmp).as_dict()
            except ParseError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
        models.append(RingModel.from_products(name, basis, products, top))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "model":
            finish()
            if len(words) != 4 or words[2] != "topdeg":
                raise ParseError(f"line {lineno}: expected 'model <name> topdeg <n>'")
            cur = (words[1], int(words[3]), [], [])
        elif cur is None:
            raise ParseError(f"line {lineno}: statement before 'model' header")
        elif words[0] == "basis":
            if len(words) != 3:
                raise ParseError(f"line {lineno}: expected 'basis <label> <degree>'")
            cur[2].append((words[1], int(words[2])))
        elif words[0] == "mul":
            m = re.fullmatch(r"mul\s+(\S+)\s+(\S+)\s*=\s*(.+)", line)
            if not m:
                raise ParseError(f"line {lineno}: expected 'mul <a> <b> = <expr>'")
            cur[3].append((lineno, m.group(1), m.group(2), m.group(3)))
        else:
            raise ParseError(f"line {lineno}: unknown statement {words[0]!r}")
    finish()
    return models


def load_models(path) -> list[RingModel]:
    return parse_models(Path(path).read_text())
