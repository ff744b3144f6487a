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
Certified real intervals with rational endpoints.

Every primitive rounds outward, so the exact result of an operation on any
points inside the operand intervals lies inside the result interval. The
transcendental kernels (exp, log, pi, sqrt) take a working precision in
bits and return an enclosure; `certify` drives the precision up until a
requested width is met.
"""

import logging
import math
from collections.abc import Callable
from fractions import Fraction
from functools import lru_cache

log = logging.getLogger(__name__)

Rational = Fraction | int

MAX_CERTIFY_LEVELS = 12


def round_down(x: Rational, bits: int) -> Fraction:
    """Round toward negative infinity, keeping `bits` significant bits."""
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    num = x.numerator
    den = x.denominator
    e = abs(num).bit_length() - den.bit_length()
    shift = bits - e
    if shift >= 0:
        return Fraction((num << shift) // den, 1 << shift)
    return Fraction((num // (den << -shift)) << -shift)


def round_up(x: Rational, bits: int) -> Fraction:
    """Round toward positive infinity, keeping `bits` significant bits."""
    return -round_down(-Fraction(x), bits)


class RealInterval:
    _lo: Fraction
    _hi: Fraction

    def __init__(self, lo: Rational, hi: Rational | None = None):
        _lo = Fraction(lo)
        _hi = _lo if hi is None else Fraction(hi)
        if not _lo <= _hi:
            _error = f"Interval bounds must satisfy lo <= hi ({_lo} > {_hi})"
            raise ValueError(_error)
        self._lo = _lo
        self._hi = _hi

    @staticmethod
    def exact(x: Rational) -> "RealInterval":
        return RealInterval(x, x)

    @property
    def lo(self) -> Fraction:
        return self._lo

    @property
    def hi(self) -> Fraction:
        return self._hi

    @property
    def width(self) -> Fraction:
        return self._hi - self._lo

    @property
    def midpoint(self) -> Fraction:
        return (self._lo + self._hi) / 2

    def contains(self, x: "Rational | RealInterval") -> bool:
        if isinstance(x, RealInterval):
            return self._lo <= x.lo and x.hi <= self._hi
        return self._lo <= x <= self._hi

    def overlaps(self, other: "RealInterval") -> bool:
        return self._lo <= other.hi and other.lo <= self._hi

    def intersect(self, other: "RealInterval") -> "RealInterval":
        if not self.overlaps(other):
            _error = f"Intervals {self} and {other} are disjoint"
            raise ValueError(_error)
        return RealInterval(max(self._lo, other.lo), min(self._hi, other.hi))

    def rounded(self, bits: int) -> "RealInterval":
        return RealInterval(
            round_down(self._lo, bits), round_up(self._hi, bits)
        )

    def certainly_greater(self, x: Rational) -> bool:
        return self._lo > x

    def certainly_less(self, x: Rational) -> bool:
        return self._hi < x

    def __neg__(self) -> "RealInterval":
        return RealInterval(-self._hi, -self._lo)

    def __add__(self, other: "RealInterval | Rational") -> "RealInterval":
        o = _coerce(other)
        return RealInterval(self._lo + o.lo, self._hi + o.hi)

    def __radd__(self, other: Rational) -> "RealInterval":
        return self + other

    def __sub__(self, other: "RealInterval | Rational") -> "RealInterval":
        o = _coerce(other)
        return RealInterval(self._lo - o.hi, self._hi - o.lo)

    def __rsub__(self, other: Rational) -> "RealInterval":
        return _coerce(other) - self

    def __mul__(self, other: "RealInterval | Rational") -> "RealInterval":
        o = _coerce(other)
        products = (
            self._lo * o.lo,
            self._lo * o.hi,
            self._hi * o.lo,
            self._hi * o.hi,
        )
        return RealInterval(min(products), max(products))

    def __rmul__(self, other: Rational) -> "RealInterval":
        return self * other

    def reciprocal(self) -> "RealInterval":
        if self.contains(0):
            _error = f"Cannot invert an interval containing zero: {self}"
            raise ZeroDivisionError(_error)
        return RealInterval(1 / self._hi, 1 / self._lo)

    def __truediv__(self, other: "RealInterval | Rational") -> "RealInterval":
        return self * _coerce(other).reciprocal()

    def __rtruediv__(self, other: Rational) -> "RealInterval":
        return _coerce(other) * self.reciprocal()

    def __pow__(self, n: int) -> "RealInterval":
        if n < 0:
            return (self ** (-n)).reciprocal()
        if n == 0:
            return RealInterval.exact(1)
        a = self._lo**n
        b = self._hi**n
        if n % 2 == 1 or self._lo >= 0:
            return RealInterval(min(a, b), max(a, b))
        if self._hi <= 0:
            return RealInterval(b, a)
        return RealInterval(0, max(a, b))

    def __repr__(self) -> str:
        return f"RealInterval({float(self._lo)!r}, {float(self._hi)!r})"

    def __str__(self) -> str:
        return f"[{float(self._lo):.12g}, {float(self._hi):.12g}]"


def _coerce(x: "RealInterval | Rational") -> RealInterval:
    if isinstance(x, RealInterval):
        return x
    return RealInterval.exact(x)


def exp_rational(x: Rational, bits: int) -> RealInterval:
    x = Fraction(x)
    if x == 0:
        return RealInterval.exact(1)
    if x < 0:
        return exp_rational(-x, bits).reciprocal().rounded(bits + 4)

    halvings = 0
    y = x
    while y > Fraction(1, 2):
        y /= 2
        halvings += 1

    prec = bits + halvings + 8
    eps = Fraction(1, 1 << (prec + 2))
    s_lo = Fraction(1)
    s_hi = Fraction(1)
    t_lo = Fraction(1)
    t_hi = Fraction(1)
    n = 1
    while True:
        t_lo = round_down(t_lo * y / n, prec)
        t_hi = round_up(t_hi * y / n, prec)
        if t_hi < eps:
            break
        s_lo += t_lo
        s_hi += t_hi
        n += 1

    # The remaining terms are dominated by a geometric series of ratio 1/2.
    r = RealInterval(s_lo, s_hi + 2 * t_hi)
    for _ in range(halvings):
        r = (r * r).rounded(prec)
    return r.rounded(bits + 4)


def exp_interval(x: RealInterval, bits: int) -> RealInterval:
    return RealInterval(
        exp_rational(x.lo, bits).lo, exp_rational(x.hi, bits).hi
    )


def _atanh_series(z: Fraction, prec: int) -> RealInterval:
    # 0 <= z <= 1/3
    eps = Fraction(1, 1 << (prec + 2))
    z2 = z * z
    p_lo = z
    p_hi = z
    s_lo = Fraction(0)
    s_hi = Fraction(0)
    k = 0
    while p_hi >= eps:
        s_lo += round_down(p_lo / (2 * k + 1), prec)
        s_hi += round_up(p_hi / (2 * k + 1), prec)
        p_lo = round_down(p_lo * z2, prec)
        p_hi = round_up(p_hi * z2, prec)
        k += 1
    return RealInterval(s_lo, s_hi + 2 * p_hi)


@lru_cache(maxsize=64)
def log2_interval(bits: int) -> RealInterval:
    return (2 * _atanh_series(Fraction(1, 3), bits + 8)).rounded(bits + 4)


def log_rational(x: Rational, bits: int) -> RealInterval:
    x = Fraction(x)
    if x <= 0:
        _error = f"Logarithm argument must be positive (received {x})"
        raise ValueError(_error)
    if x == 1:
        return RealInterval.exact(0)

    k = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** k
    while m > Fraction(4, 3):
        m /= 2
        k += 1
    while m < Fraction(2, 3):
        m *= 2
        k -= 1

    prec = bits + abs(k).bit_length() + 8
    z = (m - 1) / (m + 1)
    series = _atanh_series(abs(z), prec)
    log_m = 2 * series if z >= 0 else -2 * series
    return (k * log2_interval(prec) + log_m).rounded(bits + 4)


def log_interval(x: RealInterval, bits: int) -> RealInterval:
    return RealInterval(
        log_rational(x.lo, bits).lo, log_rational(x.hi, bits).hi
    )


def _atan_inverse(n: int, prec: int) -> RealInterval:
    """Enclosure of atan(1/n) from its alternating series."""
    eps = Fraction(1, 1 << (prec + 2))
    total = RealInterval.exact(0)
    k = 0
    while True:
        term = Fraction(1, (2 * k + 1) * n ** (2 * k + 1))
        sign = -1 if k % 2 == 1 else 1
        rounded = RealInterval(round_down(term, prec), round_up(term, prec))
        if term < eps:
            # Alternating with decreasing terms: the tail lies between 0 and
            # the first omitted term.
            tail = sign * rounded
            return total + RealInterval(min(0, tail.lo), max(0, tail.hi))
        total = total + sign * rounded
        k += 1


@lru_cache(maxsize=64)
def pi_interval(bits: int) -> RealInterval:
    prec = bits + 8
    a = _atan_inverse(5, prec)
    b = _atan_inverse(239, prec)
    return (16 * a - 4 * b).rounded(bits + 4)


def sqrt_rational(x: Rational, bits: int) -> RealInterval:
    x = Fraction(x)
    if x < 0:
        _error = f"Square root argument must be non-negative (received {x})"
        raise ValueError(_error)
    if x == 0:
        return RealInterval.exact(0)
    extra = max(0, (x.denominator.bit_length() - x.numerator.bit_length()))
    p = bits + extra // 2 + 4
    scale = 1 << p
    scaled = x * scale * scale
    lo = math.isqrt(math.floor(scaled))
    hi = math.isqrt(math.ceil(scaled)) + 1
    return RealInterval(Fraction(lo, scale), Fraction(hi, scale))


def sqrt_interval(x: RealInterval, bits: int) -> RealInterval:
    return RealInterval(
        sqrt_rational(max(x.lo, Fraction(0)), bits).lo,
        sqrt_rational(x.hi, bits).hi,
    )


def power(x: RealInterval, s: Rational, bits: int) -> RealInterval:
    """Enclosure of x**s for a rational exponent s and x > 0."""
    s = Fraction(s)
    if s.denominator == 1:
        return x ** int(s)
    if not x.lo > 0:
        _error = f"Fractional powers require a positive base (received {x})"
        raise ValueError(_error)
    if s.denominator == 2:
        return sqrt_interval(x, bits + 8) ** int(2 * s)
    return exp_interval(s * log_interval(x, bits + 8), bits)


def certify(
    compute: Callable[[int], RealInterval],
    eps: Rational,
    label: str = "value",
) -> RealInterval:
    """
    Evaluate `compute` at increasing working precision until the enclosure
    is narrower than `eps`. Successive enclosures are intersected, so a
    smaller `eps` never produces a wider result.
    """
    eps = Fraction(eps)
    if not eps > 0:
        _error = f"Precision must be positive (received {eps})"
        raise ValueError(_error)

    result: RealInterval | None = None
    for level in range(MAX_CERTIFY_LEVELS):
        bits = 40 + 32 * level
        current = compute(bits)
        result = current if result is None else result.intersect(current)
        log.debug("%s: %d bits, width %.3g", label, bits, float(result.width))
        if result.width <= eps:
            return result

    _error = f"Unable to certify {label} to width {eps}"
    raise RuntimeError(_error)
