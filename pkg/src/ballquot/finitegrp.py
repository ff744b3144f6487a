#
# Copyright © 2024 Mark Raynsford <code@io7m.com> https://www.io7m.com
#
# Permission to use, copy, modify, and/or distribute this software for any
# purpose with or without fee is hereby granted, provided that the above
# copyright notice and this permission notice appear in all copies.
#
# THE SOFTWARE IS PROVIDED "AS IS" AND THE AUTHOR DISCLAIMS ALL WARRANTIES
# WITH REGARD TO THIS SOFTWARE INCLUDING ALL IMPLIED WARRANTIES OF
# MERCHANTABILITY AND FITNESS. IN NO EVENT SHALL THE AUTHOR BE LIABLE FOR ANY
# SPECIAL, DIRECT, INDIRECT, OR CONSEQUENTIAL DAMAGES OR ANY DAMAGES
# WHATSOEVER RESULTING FROM LOSS OF USE, DATA OR PROFITS, WHETHER IN AN
# ACTION OF CONTRACT, NEGLIGENCE OR OTHER TORTIOUS ACTION, ARISING OUT OF OR
# IN CONNECTION WITH THE USE OR PERFORMANCE OF THIS SOFTWARE.
#

"""
Concrete finite groups as permutation groups.

Permutations are numpy arrays where p[i] is the image of i. The product
"p then q" is q[p], the same convention sympy uses for Permutation
multiplication, so sympy's Schreier-Sims machinery can be applied to the
arrays directly.
"""

import logging
from collections.abc import Callable, Iterator, Sequence
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Any

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

log = logging.getLogger(__name__)

PERM_DTYPE = np.uint16
ELEMENT_LIMIT = 250000

PermArray = np.ndarray[Any, Any]


class ConstructionError(RuntimeError):
    """A group that must exist could not be constructed."""


def perm(images: Sequence[int]) -> PermArray:
    p = np.asarray(images, dtype=PERM_DTYPE)
    if sorted(int(x) for x in p) != list(range(len(p))):
        _error = f"Not a permutation: {list(images)}"
        raise ValueError(_error)
    return p


def identity(degree: int) -> PermArray:
    return np.arange(degree, dtype=PERM_DTYPE)


def compose(p: PermArray, q: PermArray) -> PermArray:
    """The permutation p followed by q."""
    return q[p]


def inverse(p: PermArray) -> PermArray:
    return np.argsort(p).astype(PERM_DTYPE)


def is_identity(p: PermArray) -> bool:
    return bool(np.array_equal(p, identity(len(p))))


def element_order(p: PermArray) -> int:
    return int(Permutation([int(x) for x in p]).order())


def cycle_notation(p: PermArray) -> str:
    cycles = Permutation([int(x) for x in p]).cyclic_form
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycles)


def parse_cycle_notation(text: str, degree: int) -> PermArray:
    p = list(range(degree))
    body = text.strip()
    if body in ("", "()"):
        return perm(p)
    for chunk in body.strip("()").split(")("):
        points = [int(x) for x in chunk.replace(",", " ").split()]
        for i, x in enumerate(points):
            p[x] = points[(i + 1) % len(points)]
    return perm(p)


class PermGroup:
    """
    A permutation group with named generators. The sympy group (and with it
    the base and strong generating set) is built lazily, as is the explicit
    element list used by the vectorized searches. Instances are mutated only
    by filling these caches.
    """

    _name: str
    _degree: int
    _generators: tuple[PermArray, ...]
    _outer: tuple[PermArray, ...]
    _group: PermutationGroup | None
    _elements: PermArray | None
    _index: dict[bytes, int] | None

    def __init__(
        self,
        name: str,
        degree: int,
        generators: Sequence[Sequence[int] | PermArray],
        outer: Sequence[Sequence[int] | PermArray] = (),
    ):
        gens = tuple(perm(list(g)) for g in generators)
        auts = tuple(perm(list(g)) for g in outer)
        for g in gens + auts:
            if len(g) != degree:
                _error = (
                    f"{name}: permutation of degree {len(g)} "
                    f"in a group of degree {degree}"
                )
                raise ValueError(_error)
        self._name = name
        self._degree = degree
        self._generators = gens
        self._outer = auts
        self._group = None
        self._elements = None
        self._index = None

    @property
    def name(self) -> str:
        return self._name

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def generators(self) -> tuple[PermArray, ...]:
        return self._generators

    @property
    def outer(self) -> tuple[PermArray, ...]:
        """Permutations normalizing the group, supplying outer automorphisms."""
        return self._outer

    def sympy_group(self) -> PermutationGroup:
        if self._group is None:
            if self._generators:
                self._group = PermutationGroup(
                    [Permutation([int(x) for x in g]) for g in self._generators]
                )
            else:
                self._group = PermutationGroup(
                    [Permutation(list(range(self._degree)))]
                )
        return self._group

    def order(self) -> int:
        return int(self.sympy_group().order())

    def contains(self, p: PermArray) -> bool:
        image = Permutation([int(x) for x in p])
        return bool(self.sympy_group().contains(image))

    def is_abelian(self) -> bool:
        return bool(self.sympy_group().is_abelian)

    def is_transitive(self) -> bool:
        return bool(self.sympy_group().is_transitive())

    def is_normal_in(self, other: "PermGroup") -> bool:
        return bool(self.sympy_group().is_normal(other.sympy_group()))

    def conjugacy_class_sizes(self) -> list[int]:
        classes = self.sympy_group().conjugacy_classes()
        return sorted(len(c) for c in classes)

    def elements(self) -> PermArray:
        """All elements, identity first, in breadth-first order."""
        if self._elements is None:
            ident = identity(self._degree)
            seen: dict[bytes, int] = {ident.tobytes(): 0}
            rows = [ident]
            frontier = ident[np.newaxis, :]
            while len(frontier) > 0:
                fresh = []
                for g in self._generators:
                    for row in g[frontier]:
                        key = row.tobytes()
                        if key not in seen:
                            seen[key] = len(rows)
                            rows.append(row)
                            fresh.append(row)
                if len(rows) > ELEMENT_LIMIT:
                    _error = f"{self._name}: more than {ELEMENT_LIMIT} elements"
                    raise ValueError(_error)
                frontier = np.array(fresh, dtype=PERM_DTYPE).reshape(
                    -1, self._degree
                )
            self._elements = np.array(rows, dtype=PERM_DTYPE)
            self._index = seen
            log.debug("%s: enumerated %d elements", self._name, len(rows))
        return self._elements

    def index_of(self, p: PermArray) -> int:
        self.elements()
        assert self._index is not None
        return self._index[np.asarray(p, dtype=PERM_DTYPE).tobytes()]

    def element_orders(self) -> np.ndarray[Any, Any]:
        """The order of every element, aligned with `elements()`."""
        xs = self.elements()
        ident = identity(self._degree)
        orders = np.zeros(len(xs), dtype=np.int64)
        current = xs.copy()
        k = 1
        while np.any(orders == 0):
            done = np.all(current == ident, axis=1) & (orders == 0)
            orders[done] = k
            current = np.take_along_axis(xs, current.astype(np.intp), axis=1)
            k += 1
        return orders

    def elements_of_order(self, n: int) -> PermArray:
        return self.elements()[self.element_orders() == n]

    def __repr__(self) -> str:
        return f"PermGroup({self._name}, degree={self._degree})"


def direct_product(name: str, g1: PermGroup, g2: PermGroup) -> PermGroup:
    """Product acting on disjoint supports: g1 on the first points."""
    d1 = g1.degree
    d2 = g2.degree

    def left(p: PermArray) -> PermArray:
        return np.concatenate([p, identity(d2) + d1]).astype(PERM_DTYPE)

    def right(p: PermArray) -> PermArray:
        return np.concatenate([identity(d1), p + d1]).astype(PERM_DTYPE)

    gens = [left(p) for p in g1.generators] + [right(p) for p in g2.generators]
    outer = [left(p) for p in g1.outer] + [right(p) for p in g2.outer]
    return PermGroup(name, d1 + d2, gens, outer)


def project_factor(p: PermArray, start: int, degree: int) -> PermArray:
    """Restrict a product element to the points [start, start+degree)."""
    return (p[start : start + degree] - start).astype(PERM_DTYPE)


#
# Small named groups.
#


def cyclic_group(n: int) -> PermGroup:
    outer = [
        [(k * a) % n for k in range(n)]
        for a in range(2, n)
        if gcd(a, n) == 1
    ]
    return PermGroup(f"z{n}", n, [[(k + 1) % n for k in range(n)]], outer[:1])


def alternating_a4() -> PermGroup:
    return PermGroup("a4", 4, [[1, 2, 0, 3], [0, 2, 3, 1]], [[1, 0, 2, 3]])


def alternating_a5() -> PermGroup:
    return PermGroup(
        "a5", 5, [[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]], [[1, 0, 2, 3, 4]]
    )


def psl27() -> PermGroup:
    """PSL(2,7) on the projective line over F7, with infinity as point 7."""
    return PermGroup(
        "psl27",
        8,
        [
            [1, 2, 3, 4, 5, 6, 0, 7],
            [0, 2, 4, 6, 1, 3, 5, 7],
            [7, 6, 3, 2, 5, 4, 1, 0],
        ],
        [[0, 3, 6, 2, 5, 1, 4, 7]],
    )


A4_PARTITIONS = (
    frozenset({frozenset({0, 1}), frozenset({2, 3})}),
    frozenset({frozenset({0, 2}), frozenset({1, 3})}),
    frozenset({frozenset({0, 3}), frozenset({1, 2})}),
)


def a4_to_z3(p: PermArray) -> PermArray:
    """
    The quotient A4 -> Z/3, read off from the action of A4 on the three
    ways of splitting four points into two pairs. The kernel is the Klein
    four-group.
    """
    images = []
    for part in A4_PARTITIONS:
        moved = frozenset(frozenset(int(p[x]) for x in pair) for pair in part)
        images.append(A4_PARTITIONS.index(moved))
    return perm(images)


def quotient_map_a4_z3() -> Callable[[PermArray], PermArray]:
    return a4_to_z3


#
# F9 = F3[i], i^2 = -1.
#


class GF9Elem:
    _a: int
    _b: int

    def __init__(self, a: int, b: int = 0):
        self._a = a % 3
        self._b = b % 3

    @property
    def a(self) -> int:
        return self._a

    @property
    def b(self) -> int:
        return self._b

    def __add__(self, other: "GF9Elem") -> "GF9Elem":
        return GF9Elem(self._a + other.a, self._b + other.b)

    def __sub__(self, other: "GF9Elem") -> "GF9Elem":
        return GF9Elem(self._a - other.a, self._b - other.b)

    def __neg__(self) -> "GF9Elem":
        return GF9Elem(-self._a, -self._b)

    def __mul__(self, other: "GF9Elem") -> "GF9Elem":
        a, b = self._a, self._b
        c, d = other.a, other.b
        return GF9Elem(a * c - b * d, a * d + b * c)

    def frob(self) -> "GF9Elem":
        """x -> x^3, which fixes F3 and sends i to -i."""
        return GF9Elem(self._a, -self._b)

    def inverse(self) -> "GF9Elem":
        if self.is_zero():
            _error = "Zero is not invertible in F9"
            raise ZeroDivisionError(_error)
        # x^-1 = x^7
        result = GF9Elem(1)
        for _ in range(7):
            result = result * self
        return result

    def __truediv__(self, other: "GF9Elem") -> "GF9Elem":
        return self * other.inverse()

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GF9Elem):
            return NotImplemented
        return self._a == other.a and self._b == other.b

    def __hash__(self) -> int:
        return self._a + 3 * self._b

    def __repr__(self) -> str:
        return f"GF9({self._a}+{self._b}i)"


GF9_ZERO = GF9Elem(0)
GF9_ONE = GF9Elem(1)
GF9_I = GF9Elem(0, 1)
GF9_ALL = tuple(GF9Elem(a, b) for b in range(3) for a in range(3))

Vector3 = tuple[GF9Elem, GF9Elem, GF9Elem]
Matrix3 = tuple[Vector3, Vector3, Vector3]


def hermitian_product(h: Matrix3, x: Vector3, y: Vector3) -> GF9Elem:
    """The form sum of frob(x_i) h_ij y_j."""
    total = GF9_ZERO
    for i in range(3):
        for j in range(3):
            total = total + x[i].frob() * h[i][j] * y[j]
    return total


def determinant(m: Matrix3) -> GF9Elem:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def diagonal_form(d0: int, d1: int, d2: int) -> Matrix3:
    z = GF9_ZERO
    return (
        (GF9Elem(d0), z, z),
        (z, GF9Elem(d1), z),
        (z, z, GF9Elem(d2)),
    )


IDENTITY_FORM = diagonal_form(1, 1, 1)


def normalize(x: Vector3) -> Vector3:
    """Scale so that the first nonzero coordinate is 1."""
    for c in x:
        if not c.is_zero():
            s = c.inverse()
            return (x[0] * s, x[1] * s, x[2] * s)
    _error = "The zero vector is not a projective point"
    raise ValueError(_error)


def projective_points() -> list[Vector3]:
    points = []
    for x in product(GF9_ALL, repeat=3):
        if all(c.is_zero() for c in x):
            continue
        if normalize(x) == x:
            points.append(x)
    return points


def isotropic_points(h: Matrix3) -> list[Vector3]:
    for i in range(3):
        for j in range(3):
            if h[j][i] != h[i][j].frob():
                _error = "The form is not hermitian"
                raise ValueError(_error)
    if determinant(h).is_zero():
        _error = "The hermitian form is degenerate"
        raise ValueError(_error)
    return [
        x for x in projective_points() if hermitian_product(h, x, x).is_zero()
    ]


def transvection(a: Vector3, lam: GF9Elem) -> Callable[[Vector3], Vector3]:
    """x -> x + lam <a, x> a, unitary for isotropic a and lam of trace 0."""

    def apply(x: Vector3) -> Vector3:
        c = lam * hermitian_product(IDENTITY_FORM, a, x)
        return (x[0] + c * a[0], x[1] + c * a[1], x[2] + c * a[2])

    return apply


def point_action(
    points: Sequence[Vector3],
    f: Callable[[Vector3], Vector3],
) -> PermArray:
    index = {p: i for i, p in enumerate(points)}
    return perm([index[normalize(f(p))] for p in points])


PSU33_ORDER = 6048


def psu3_order(q: int) -> int:
    return q**3 * (q * q - 1) * (q**3 + 1) // gcd(3, q + 1)


@lru_cache(maxsize=1)
def build_psu33() -> PermGroup:
    """
    PSU(3, F3) acting on the 28 isotropic points of the standard hermitian
    form, generated by unitary transvections. The outer automorphism is the
    Frobenius acting on point coordinates.
    """
    points = isotropic_points(IDENTITY_FORM)
    generators: list[PermArray] = []
    order = 1
    for a in points:
        for lam in (GF9_I, -GF9_I):
            g = point_action(points, transvection(a, lam))
            trial = PermGroup("psu33", len(points), [*generators, g])
            trial_order = trial.order()
            if trial_order > order:
                generators.append(g)
                order = trial_order
            if order == PSU33_ORDER:
                break
        if order == PSU33_ORDER:
            break

    if order != PSU33_ORDER:
        _error = (
            "Transvections generate a group of "
            f"order {order}, not {PSU33_ORDER}"
        )
        raise ConstructionError(_error)

    frob = point_action(
        points, lambda x: (x[0].frob(), x[1].frob(), x[2].frob())
    )
    log.info("psu33: %d generators on %d points", len(generators), len(points))
    return PermGroup("psu33", len(points), generators, [frob])


def su33_center() -> list[GF9Elem]:
    """Scalars that are unitary (x * frob(x) = 1) with determinant x^3 = 1."""
    return [
        x
        for x in GF9_ALL
        if x * x.frob() == GF9_ONE and x * x * x == GF9_ONE
    ]


def frobenius21(g: PermGroup) -> PermGroup:
    """
    A nonabelian subgroup of order 21: an element x of order 7 together
    with an element y of order 3 conjugating x to x^2 or x^4.
    """
    sevens = g.elements_of_order(7)
    threes = g.elements_of_order(3)
    if len(sevens) == 0 or len(threes) == 0:
        _error = f"{g.name} has no elements of order 7 and 3"
        raise ConstructionError(_error)

    x = sevens[0]
    targets = {compose(x, x).tobytes()}
    x4 = compose(compose(x, x), compose(x, x))
    targets.add(x4.tobytes())

    inverses = np.argsort(threes, axis=1)
    conjugates = np.take_along_axis(
        threes, x[inverses].astype(np.intp), axis=1
    )
    for y, c in zip(threes, conjugates):
        if c.tobytes() in targets:
            sub = PermGroup("frob21", g.degree, [x, y])
            if sub.order() == 21 and not sub.is_abelian():
                return sub

    _error = f"{g.name} has no Frobenius subgroup of order 21"
    raise ConstructionError(_error)


#
# Named targets.
#


def _psu33xz3() -> PermGroup:
    return direct_product("psu33xz3", build_psu33(), cyclic_group(3))


def _psu33xa4() -> PermGroup:
    return direct_product("psu33xa4", build_psu33(), alternating_a4())


def _frob21() -> PermGroup:
    return frobenius21(build_psu33())


TARGETS: dict[str, Callable[[], PermGroup]] = {
    "z3": lambda: cyclic_group(3),
    "a4": alternating_a4,
    "a5": alternating_a5,
    "psl27": psl27,
    "psu33": build_psu33,
    "psu33xz3": _psu33xz3,
    "psu33xa4": _psu33xa4,
    "frob21": _frob21,
}


@lru_cache(maxsize=None)
def target(name: str) -> PermGroup:
    try:
        factory = TARGETS[name]
    except KeyError:
        _error = f"Unknown target group {name!r} (known: {', '.join(TARGETS)})"
        raise ValueError(_error) from None
    return factory()


def target_names() -> Iterator[str]:
    return iter(TARGETS)


#
# Conjugation by a group of automorphisms.
#


def conjugate(p: PermArray, a: PermArray) -> PermArray:
    """a^-1 p a."""
    return a[p[inverse(a)]]


def conjugacy_orbit(p: PermArray, gens: Sequence[PermArray]) -> PermArray:
    seen = {p.tobytes()}
    rows = [p]
    frontier = [p]
    inverses = [inverse(a) for a in gens]
    while frontier:
        fresh = []
        for x in frontier:
            for a, a_inv in zip(gens, inverses):
                y = a[x[a_inv]]
                key = y.tobytes()
                if key not in seen:
                    seen.add(key)
                    rows.append(y)
                    fresh.append(y)
        frontier = fresh
    return np.array(rows, dtype=PERM_DTYPE)


def class_representatives(
    candidates: PermArray, gens: Sequence[PermArray]
) -> PermArray:
    """One element from each orbit of `gens` acting by conjugation."""
    remaining = {row.tobytes() for row in candidates}
    reps = []
    for row in candidates:
        key = row.tobytes()
        if key not in remaining:
            continue
        reps.append(row)
        for y in conjugacy_orbit(row, gens):
            remaining.discard(y.tobytes())
    return np.array(reps, dtype=PERM_DTYPE).reshape(-1, candidates.shape[1])


def _closure(gens: Sequence[PermArray], degree: int) -> dict[bytes, PermArray]:
    ident = identity(degree)
    out = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        fresh = []
        for x in frontier:
            for g in gens:
                y = g[x]
                key = y.tobytes()
                if key not in out:
                    out[key] = y
                    fresh.append(y)
        frontier = fresh
    return out


def conjugation_stabilizer(
    p: PermArray, gens: Sequence[PermArray]
) -> PermArray:
    """
    The elements of <gens> commuting with p, found from Schreier generators
    of the conjugation orbit of p. The stabilizer is enumerated explicitly,
    so it must be small.
    """
    degree = len(p)
    inverses = [inverse(a) for a in gens]
    transversal = {p.tobytes(): identity(degree)}
    frontier = [p]
    stabilizer_gens: list[PermArray] = []
    members = _closure([], degree)
    schreier: list[tuple[PermArray, PermArray]] = []
    while frontier:
        fresh = []
        for x in frontier:
            t = transversal[x.tobytes()]
            for a, a_inv in zip(gens, inverses):
                y = a[x[a_inv]]
                key = y.tobytes()
                ta = a[t]
                if key not in transversal:
                    transversal[key] = ta
                    fresh.append(y)
                else:
                    schreier.append((ta, transversal[key]))
        frontier = fresh

    for ta, t_y in schreier:
        s = inverse(t_y)[ta]
        if s.tobytes() not in members:
            stabilizer_gens.append(s)
            members = _closure(stabilizer_gens, degree)
            if len(members) > ELEMENT_LIMIT:
                _error = "Conjugation stabilizer is too large to enumerate"
                raise ValueError(_error)
    return np.array(list(members.values()), dtype=PERM_DTYPE)


def automorphism_generators(g: PermGroup) -> tuple[PermArray, ...]:
    """Generators acting on `g` by inner and stored outer automorphisms."""
    return g.generators + g.outer


def conjugacy_transversal(
    p: PermArray, gens: Sequence[PermArray]
) -> dict[bytes, PermArray]:
    """For each conjugate y of p under <gens>, some a with a^-1 p a = y."""
    transversal = {p.tobytes(): identity(len(p))}
    frontier = [p]
    inverses = [inverse(a) for a in gens]
    while frontier:
        fresh = []
        for x in frontier:
            t = transversal[x.tobytes()]
            for a, a_inv in zip(gens, inverses):
                y = a[x[a_inv]]
                key = y.tobytes()
                if key not in transversal:
                    transversal[key] = a[t]
                    fresh.append(y)
        frontier = fresh
    return transversal
