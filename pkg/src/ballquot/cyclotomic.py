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
Exact arithmetic in Q(zeta), zeta a primitive 12th root of unity, on the
basis 1, zeta, zeta^2, zeta^3 with zeta^4 = zeta^2 - 1.
"""

from collections.abc import Sequence
from fractions import Fraction

from ballquot.interval import Rational

DEGREE = 4
GALOIS_EXPONENTS = (1, 5, 7, 11)


class CycloElem:
    _coords: tuple[Fraction, Fraction, Fraction, Fraction]

    def __init__(self, coords: Sequence[Rational]):
        if len(coords) != DEGREE:
            _error = f"Elements of Q(zeta12) have {DEGREE} coordinates"
            raise ValueError(_error)
        c = [Fraction(x) for x in coords]
        self._coords = (c[0], c[1], c[2], c[3])

    @staticmethod
    def of(x: Rational) -> "CycloElem":
        return CycloElem((x, 0, 0, 0))

    @staticmethod
    def in_k_basis(a: Rational, b: Rational) -> "CycloElem":
        """The element a + b*alpha of k = Q(alpha)."""
        return CycloElem.of(a) + ALPHA.scale(b)

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self._coords

    def scale(self, x: Rational) -> "CycloElem":
        return CycloElem([c * x for c in self._coords])

    def __add__(self, other: "CycloElem | Rational") -> "CycloElem":
        o = _coerce(other)
        return CycloElem([a + b for a, b in zip(self._coords, o.coords)])

    def __radd__(self, other: Rational) -> "CycloElem":
        return self + other

    def __sub__(self, other: "CycloElem | Rational") -> "CycloElem":
        o = _coerce(other)
        return CycloElem([a - b for a, b in zip(self._coords, o.coords)])

    def __rsub__(self, other: Rational) -> "CycloElem":
        return _coerce(other) - self

    def __neg__(self) -> "CycloElem":
        return CycloElem([-a for a in self._coords])

    def __mul__(self, other: "CycloElem | Rational") -> "CycloElem":
        o = _coerce(other)
        product = [Fraction(0)] * (2 * DEGREE - 1)
        for i, a in enumerate(self._coords):
            if a == 0:
                continue
            for j, b in enumerate(o.coords):
                product[i + j] += a * b
        # zeta^d = zeta^(d-2) - zeta^(d-4) for d >= 4
        for d in range(2 * DEGREE - 2, DEGREE - 1, -1):
            product[d - 2] += product[d]
            product[d - 4] -= product[d]
            product[d] = Fraction(0)
        return CycloElem(product[:DEGREE])

    def __rmul__(self, other: Rational) -> "CycloElem":
        return self * other

    def __pow__(self, n: int) -> "CycloElem":
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other: "CycloElem | Rational") -> "CycloElem":
        return self * _coerce(other).inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycloElem):
            return self._coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self._coords == CycloElem.of(other).coords
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coords)

    def galois(self, a: int) -> "CycloElem":
        """The image under the automorphism zeta -> zeta^a."""
        if a % 12 not in GALOIS_EXPONENTS:
            _error = f"zeta -> zeta^{a} is not an automorphism of Q(zeta12)"
            raise ValueError(_error)
        result = ZERO
        for j, c in enumerate(self._coords):
            if c != 0:
                result = result + ZETA_POWERS[(a * j) % 12].scale(c)
        return result

    def tau(self) -> "CycloElem":
        """Complex conjugation, the nontrivial automorphism of ell/k."""
        return self.galois(11)

    def relative_norm(self) -> "CycloElem":
        return self * self.tau()

    def absolute_norm(self) -> Fraction:
        result = ONE
        for a in GALOIS_EXPONENTS:
            result = result * self.galois(a)
        return result.rational_part()

    def inverse(self) -> "CycloElem":
        if self.is_zero():
            _error = "Zero is not invertible"
            raise ZeroDivisionError(_error)
        cofactor = ONE
        for a in GALOIS_EXPONENTS[1:]:
            cofactor = cofactor * self.galois(a)
        n = (self * cofactor).rational_part()
        return cofactor.scale(Fraction(1) / n)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self._coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self._coords[1:])

    def rational_part(self) -> Fraction:
        if not self.is_rational():
            _error = f"{self} is not rational"
            raise ValueError(_error)
        return self._coords[0]

    def in_k(self) -> bool:
        return self.tau() == self

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._coords)

    def __repr__(self) -> str:
        terms = []
        for j, c in enumerate(self._coords):
            if c != 0:
                terms.append(f"{c}" if j == 0 else f"{c}*z^{j}")
        return "CycloElem(" + (" + ".join(terms) or "0") + ")"


def _coerce(x: "CycloElem | Rational") -> CycloElem:
    if isinstance(x, CycloElem):
        return x
    return CycloElem.of(x)


ZERO = CycloElem((0, 0, 0, 0))
ONE = CycloElem((1, 0, 0, 0))
ZETA = CycloElem((0, 1, 0, 0))


def _zeta_powers() -> tuple[CycloElem, ...]:
    powers = [ONE]
    for _ in range(11):
        powers.append(powers[-1] * ZETA)
    return tuple(powers)


ZETA_POWERS = _zeta_powers()

# alpha = zeta + zeta^-1, alpha^2 = 3
ALPHA = ZETA + ZETA_POWERS[11]
# beta = zeta^3, beta^2 = -1
BETA = ZETA_POWERS[3]
# omega = zeta^4, a primitive cube root of unity
OMEGA = ZETA_POWERS[4]


def norm_k_q(x: CycloElem) -> Fraction:
    """The norm from k = Q(alpha) to Q of an element of k."""
    if not x.in_k():
        _error = f"{x} does not lie in k"
        raise ValueError(_error)
    return (x * x.galois(5)).rational_part()


def galois_check(a: int) -> bool:
    """Check that zeta -> zeta^a respects products of basis elements."""
    for i in range(DEGREE):
        for j in range(DEGREE):
            x = ZETA_POWERS[i]
            y = ZETA_POWERS[j]
            if (x * y).galois(a) != x.galois(a) * y.galois(a):
                return False
    return True
