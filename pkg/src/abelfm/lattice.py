"""The Neron-Severi lattice of E x E and the SL(2,Z) action on it.

Classes are written in the basis (E, F, D) of the two fibers and the
diagonal, with Gram matrix ``[[0,1,1],[1,0,1],[1,1,0]]``.  The image of an
elliptic curve under ``x -> (a x, b x)`` is

    E_ab = a(a-b) E + b(b-a) F + ab D

and g = (a, b, c, d) acts by ``(x, y) -> (a x + c y, b x + d y)``, sending
E, F, D to E_ab, E_cd and E_(a+c)(b+d).

Effective cone generators are the primitive integer points on the conic
``xy + xz + yz = 0`` with ``x + y + z > 0`` (that sum is the degree against
the ample class E + F + D, up to a factor 2).
"""
from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

GRAM = ((0, 1, 1), (1, 0, 1), (1, 1, 0))


@dataclass(frozen=True, order=True)
class NSClass:
    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __add__(self, other):
        return NSClass(self.x + other.x, self.y + other.y, self.z + other.z)

    def __mul__(self, c):
        return NSClass(c * self.x, c * self.y, c * self.z)

    __rmul__ = __mul__

    def __neg__(self):
        return NSClass(-self.x, -self.y, -self.z)

    def as_ints(self) -> tuple[int, int, int]:
        if any(v.denominator != 1 for v in self):
            raise ValueError(f"{self} is not integral")
        return tuple(int(v) for v in self)

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self) + ")"


E = NSClass(1, 0, 0)
F = NSClass(0, 1, 0)
DIAGONAL = NSClass(0, 0, 1)


def ns_intersect(u: NSClass, v: NSClass) -> Fraction:
    return sum((GRAM[i][j] * a * b for i, a in enumerate(u) for j, b in enumerate(v)), Fraction(0))


def on_conic(u) -> bool:
    x, y, z = u
    return x * y + x * z + y * z == 0


def slope_curve(a: int, b: int) -> NSClass:
    if math.gcd(a, b) != 1:
        raise ValueError(f"slope ({a}, {b}) is not coprime")
    return NSClass(a * (a - b), b * (b - a), a * b)


@dataclass(frozen=True)
class SL2Element:
    """Acts by (x, y) -> (a x + c y, b x + d y), i.e. the matrix [[a, c], [b, d]]."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")

    def __matmul__(self, other: "SL2Element") -> "SL2Element":
        """Composition: (g @ h) acts as g after h."""
        m = np.array([[self.a, self.c], [self.b, self.d]], dtype=object)
        n = np.array([[other.a, other.c], [other.b, other.d]], dtype=object)
        p = m.dot(n)
        return SL2Element(int(p[0, 0]), int(p[1, 0]), int(p[0, 1]), int(p[1, 1]))

    def inverse(self) -> "SL2Element":
        return SL2Element(self.d, -self.b, -self.c, self.a)


S_GEN = SL2Element(0, 1, -1, 0)
T_GEN = SL2Element(1, 0, 1, 1)
STANDARD_GENERATORS = (S_GEN, T_GEN, S_GEN.inverse(), T_GEN.inverse())


def induced_action(g: SL2Element) -> tuple[tuple[int, ...], ...]:
    """3x3 integer matrix of g on NS(E x E); columns are the images of E, F, D."""
    a, b, c, d = g.a, g.b, g.c, g.d
    return (
        (a * (a - b), c * (c - d), (a + c) * (a + c - b - d)),
        (b * (b - a), d * (d - c), (b + d) * (b + d - a - c)),
        (a * b, c * d, (a + c) * (b + d)),
    )


def act(g: SL2Element | tuple, u: NSClass) -> NSClass:
    m = induced_action(g) if isinstance(g, SL2Element) else g
    return NSClass(*(sum((row[j] * v for j, v in enumerate(u)), Fraction(0)) for row in m))


def random_sl2(rng: random.Random, steps: int = 8) -> SL2Element:
    """A pseudo-random word in the standard generators."""
    g = SL2Element(1, 0, 0, 1)
    for _ in range(steps):
        g = g @ rng.choice(STANDARD_GENERATORS)
    return g


def preserves_form(g: SL2Element) -> bool:
    m = np.array(induced_action(g), dtype=object)
    G = np.array(GRAM, dtype=object)
    return (m.T.dot(G).dot(m) == G).all()


# ---------------------------------------------------------------------------
# cone generators

def normalize(u) -> tuple[int, int, int]:
    """Primitive integer representative with positive degree x + y + z."""
    x, y, z = (int(v) for v in u)
    g = math.gcd(math.gcd(x, y), z)
    if g == 0:
        raise ValueError("zero class")
    x, y, z = x // g, y // g, z // g
    if x + y + z < 0:
        x, y, z = -x, -y, -z
    return x, y, z


def cone_generators(height: int) -> list[tuple[int, int, int]]:
    """Primitive points of the conic with max |entry| <= height, effective sign, sorted.

    Walks the rational parametrisation ``[-(1 + 1/t) : -(t + 1) : 1]`` together
    with the two points at infinity, and keeps only what satisfies the conic.
    """
    if height < 1:
        raise ValueError("height must be at least 1")
    found = {(1, 0, 0), (0, 1, 0)}
    # t = p/q; clearing denominators gives (-(p+q)q, -(p+q)p, pq).  |pq| <= height
    # bounds |p|, |q| <= height.
    for p in range(-height, height + 1):
        for q in range(1, height + 1):
            if p == 0 or math.gcd(p, q) != 1:
                continue
            pt = (-(p + q) * q, -(p + q) * p, p * q)
            if not any(pt):
                continue
            if not on_conic(pt):
                raise AssertionError(f"parametrisation left the conic at t={p}/{q}: {pt}")
            u = normalize(pt)
            if max(abs(v) for v in u) <= height:
                found.add(u)
    return sorted(found, key=lambda u: (max(map(abs, u)), sum(u), u))


def brute_force_conic_points(height: int) -> list[tuple[int, int, int]]:
    """Same set as :func:`cone_generators` by exhaustive search over the box."""
    out = set()
    r = range(-height, height + 1)
    for u in itertools.product(r, r, r):
        if any(u) and on_conic(u) and math.gcd(math.gcd(*u[:2]), u[2]) == 1 and sum(u) > 0:
            out.add(u)
    return sorted(out, key=lambda u: (max(map(abs, u)), sum(u), u))


@dataclass(frozen=True)
class OrbitReport:
    height: int
    targets: tuple
    reached: tuple
    missed: tuple
    explored: int

    @property
    def ok(self) -> bool:
        return not self.missed


def orbit_transitivity(height: int) -> OrbitReport:
    """Breadth-first search from E under the standard generators.

    The search is confined to classes of degree x + y + z at most six times the
    largest target degree; a Euclidean reduction of (a, b) never leaves that
    region, so every generator reachable at all is reached inside it.
    """
    targets = cone_generators(height)
    bound = 6 * max(sum(u) for u in targets)
    mats = [induced_action(g) for g in STANDARD_GENERATORS]
    start = normalize(E)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for m in mats:
            v = tuple(sum(row[j] * u[j] for j in range(3)) for row in m)
            v = normalize(v)
            if v not in seen and sum(v) <= bound:
                seen.add(v)
                queue.append(v)
    reached = tuple(t for t in targets if t in seen)
    missed = tuple(t for t in targets if t not in seen)
    return OrbitReport(height, tuple(targets), reached, missed, len(seen))


# ---------------------------------------------------------------------------
# reverse Cauchy-Schwarz

@dataclass(frozen=True)
class SchwarzReport:
    height: int
    classes: int
    pairs: int
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def effective_classes(height: int, max_coeff: int = 2) -> np.ndarray:
    """Nonnegative combinations m g + n g' of cone generators, 0 <= m, n <= max_coeff."""
    gens = np.array(cone_generators(height), dtype=np.int64)
    out = set()
    coeffs = range(max_coeff + 1)
    for i, j in itertools.combinations_with_replacement(range(len(gens)), 2):
        for m, n in itertools.product(coeffs, coeffs):
            if m or n:
                out.add(tuple(int(v) for v in m * gens[i] + n * gens[j]))
    return np.array(sorted(out), dtype=np.int64)


def reverse_schwarz_check(height: int, max_coeff: int = 2) -> SchwarzReport:
    """(D.H)^2 >= (D.D)(H.H) for all pairs of enumerated effective classes."""
    X = effective_classes(height, max_coeff)
    G = np.array(GRAM, dtype=np.int64)
    P = X @ G @ X.T
    sq = np.diag(P)
    bad = np.argwhere(P * P < np.outer(sq, sq))
    violations = tuple(
        (tuple(int(v) for v in X[i]), tuple(int(v) for v in X[j])) for i, j in bad if i <= j
    )
    n = len(X)
    return SchwarzReport(height, n, n * (n + 1) // 2, violations)
