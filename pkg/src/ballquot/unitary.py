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
The hermitian lattice over Z[zeta12] and its reduction modulo the prime
over 3. Elements of the unitary group of h = diag(1, 1, 1 - alpha) are
built exactly from complex reflections in vectors of unit norm.
"""

from collections.abc import Callable, Sequence

from ballquot.cyclotomic import ALPHA, ONE, ZERO, CycloElem
from ballquot.finitegrp import (
    IDENTITY_FORM,
    GF9Elem,
    Matrix3,
    PermArray,
    PermGroup,
    Vector3,
    build_psu33,
    hermitian_product,
    isotropic_points,
    point_action,
)
from ballquot.interval import Rational

Row = tuple[CycloElem, CycloElem, CycloElem]


def _entry(x: "CycloElem | Rational") -> CycloElem:
    return x if isinstance(x, CycloElem) else CycloElem.of(x)


class HermitianMatrix3:
    """A 3x3 matrix over Q(zeta12)."""

    _rows: tuple[Row, Row, Row]

    def __init__(self, rows: Sequence[Sequence["CycloElem | Rational"]]):
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            _error = "Expected a 3x3 matrix"
            raise ValueError(_error)
        r = [tuple(_entry(x) for x in row) for row in rows]
        self._rows = (
            (r[0][0], r[0][1], r[0][2]),
            (r[1][0], r[1][1], r[1][2]),
            (r[2][0], r[2][1], r[2][2]),
        )

    @staticmethod
    def identity() -> "HermitianMatrix3":
        return HermitianMatrix3.diagonal(ONE, ONE, ONE)

    @staticmethod
    def diagonal(
        a: "CycloElem | Rational",
        b: "CycloElem | Rational",
        c: "CycloElem | Rational",
    ) -> "HermitianMatrix3":
        return HermitianMatrix3([[a, 0, 0], [0, b, 0], [0, 0, c]])

    @property
    def rows(self) -> tuple[Row, Row, Row]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> CycloElem:
        return self._rows[ij[0]][ij[1]]

    def __mul__(self, other: "HermitianMatrix3") -> "HermitianMatrix3":
        return HermitianMatrix3(
            [
                [
                    sum(
                        (self[i, k] * other[k, j] for k in range(3)),
                        ZERO,
                    )
                    for j in range(3)
                ]
                for i in range(3)
            ]
        )

    def __add__(self, other: "HermitianMatrix3") -> "HermitianMatrix3":
        return HermitianMatrix3(
            [[self[i, j] + other[i, j] for j in range(3)] for i in range(3)]
        )

    def __sub__(self, other: "HermitianMatrix3") -> "HermitianMatrix3":
        return HermitianMatrix3(
            [[self[i, j] - other[i, j] for j in range(3)] for i in range(3)]
        )

    def scale(self, x: "CycloElem | Rational") -> "HermitianMatrix3":
        c = _entry(x)
        return HermitianMatrix3(
            [[c * self[i, j] for j in range(3)] for i in range(3)]
        )

    def adjoint(self) -> "HermitianMatrix3":
        """The conjugate transpose under tau."""
        return HermitianMatrix3(
            [[self[j, i].tau() for j in range(3)] for i in range(3)]
        )

    def is_hermitian(self) -> bool:
        return self.adjoint() == self

    def is_integral(self) -> bool:
        return all(x.is_integral() for row in self._rows for x in row)

    def preserves(self, h: "HermitianMatrix3") -> bool:
        """Whether adjoint(m) h m = h."""
        return self.adjoint() * h * self == h

    def determinant(self) -> CycloElem:
        m = self
        return (
            m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermitianMatrix3):
            return NotImplemented
        return self._rows == other.rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"HermitianMatrix3({[list(r) for r in self._rows]})"


# The form of the minimal covolume lattice.
LATTICE_FORM = HermitianMatrix3.diagonal(ONE, ONE, ONE - ALPHA)


def hermitian_norm(h: HermitianMatrix3, v: Sequence[CycloElem]) -> CycloElem:
    return sum(
        (v[i].tau() * h[i, j] * v[j] for i in range(3) for j in range(3)),
        ZERO,
    )


def complex_reflection(
    h: HermitianMatrix3,
    v: Sequence["CycloElem | Rational"],
    eta: CycloElem,
) -> HermitianMatrix3:
    """
    The reflection fixing the h-orthogonal complement of v and multiplying
    v by the root of unity eta: x -> x - (1 - eta) <v, x> <v, v>^-1 v.
    """
    vec = [_entry(x) for x in v]
    if eta * eta.tau() != ONE:
        _error = f"{eta} does not have absolute value 1"
        raise ValueError(_error)
    n = hermitian_norm(h, vec)
    if n.is_zero():
        _error = "Cannot reflect in an isotropic vector"
        raise ValueError(_error)
    row = [
        sum((vec[i].tau() * h[i, j] for i in range(3)), ZERO) for j in range(3)
    ]
    c = (ONE - eta) / n
    outer = HermitianMatrix3(
        [[c * vec[i] * row[j] for j in range(3)] for i in range(3)]
    )
    return HermitianMatrix3.identity() - outer


#
# Reduction modulo the prime over 3: zeta -> -i, so alpha -> 0 and
# beta = zeta^3 -> i. Complex conjugation becomes the Frobenius.
#


def reduce_element(x: CycloElem) -> GF9Elem:
    if not x.is_integral():
        _error = f"{x} is not integral at 3"
        raise ValueError(_error)
    c0, c1, c2, c3 = (int(c) for c in x.coords)
    return GF9Elem(c0 - c2, c3 - c1)


def reduce_mod_p3(m: HermitianMatrix3) -> Matrix3:
    rows = [tuple(reduce_element(x) for x in row) for row in m.rows]
    return (
        (rows[0][0], rows[0][1], rows[0][2]),
        (rows[1][0], rows[1][1], rows[1][2]),
        (rows[2][0], rows[2][1], rows[2][2]),
    )


def reduced_preserves(m: Matrix3, h: Matrix3 = IDENTITY_FORM) -> bool:
    """Whether the reduced matrix preserves the hermitian form h over F9."""
    basis: list[Vector3] = []
    for k in range(3):
        e = [GF9Elem(0), GF9Elem(0), GF9Elem(0)]
        e[k] = GF9Elem(1)
        basis.append((e[0], e[1], e[2]))
    images = [apply_matrix(m, x) for x in basis]
    return all(
        hermitian_product(h, images[i], images[j]) == h[i][j]
        for i in range(3)
        for j in range(3)
    )


def apply_matrix(m: Matrix3, x: Vector3) -> Vector3:
    out = []
    for i in range(3):
        total = GF9Elem(0)
        for j in range(3):
            total = total + m[i][j] * x[j]
        out.append(total)
    return (out[0], out[1], out[2])


def matrix_action(m: Matrix3) -> Callable[[Vector3], Vector3]:
    return lambda x: apply_matrix(m, x)


def reduced_permutation(m: HermitianMatrix3) -> PermArray:
    """The permutation of the isotropic points induced by a lattice element."""
    reduced = reduce_mod_p3(m)
    if not reduced_preserves(reduced):
        _error = "The reduced matrix is not unitary for the standard form"
        raise ValueError(_error)
    points = isotropic_points(IDENTITY_FORM)
    return point_action(points, matrix_action(reduced))


def lies_in_psu33(m: HermitianMatrix3, group: PermGroup | None = None) -> bool:
    g = group or build_psu33()
    return g.contains(reduced_permutation(m))


def standard_reflections() -> list[HermitianMatrix3]:
    """Reflections of order 2 in unit vectors of the lattice form."""
    minus_one = -ONE
    vectors = [
        (1, 0, 0),
        (0, 1, 0),
        (1, 0, 1),
        (0, 1, 1),
        (1, 1, 0),
    ]
    out = []
    for v in vectors:
        vec = [CycloElem.of(x) for x in v]
        n = hermitian_norm(LATTICE_FORM, vec)
        if (n * n.tau()).absolute_norm() != 1:
            continue
        out.append(complex_reflection(LATTICE_FORM, vec, minus_one))
    return out
