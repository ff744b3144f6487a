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
Certified enclosures of zeta and L-values, the gamma function, and the
Kronecker symbol.

Each quantity has an `*_at(..., bits)` form returning an enclosure at a
given working precision, and a public form taking a target width that
drives the precision through `certify`.
"""

import math
from collections import Counter
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache

from sympy import bernoulli
from sympy.ntheory import jacobi_symbol

from ballquot.interval import (
    Rational,
    RealInterval,
    certify,
    exp_interval,
    log_interval,
    log_rational,
    pi_interval,
    power,
)
from ballquot.model import (
    CharacterKind,
    CharacterSpec,
    FieldDesc,
    UnsupportedFieldError,
    is_fundamental_discriminant,
)


def kronecker_symbol(d: int, m: int) -> int:
    if d % 4 not in (0, 1):
        _error = f"Kronecker symbols need d = 0 or 1 (mod 4) (received {d})"
        raise ValueError(_error)
    if not m >= 1:
        _error = f"The modulus must be positive (received {m})"
        raise ValueError(_error)

    result = 1
    while m % 2 == 0:
        m //= 2
        if d % 2 == 0:
            return 0
        result *= 1 if d % 8 in (1, 7) else -1
    if m == 1:
        return result
    return result * int(jacobi_symbol(d % m, m))


@lru_cache(maxsize=256)
def bernoulli_fraction(n: int) -> Fraction:
    b = bernoulli(n)
    return Fraction(int(b.p), int(b.q))


def _check_s(s: Fraction) -> None:
    if not s > 1:
        _error = f"Zeta and L-values need s > 1 (received {s})"
        raise ValueError(_error)


def hurwitz_zeta_at(s: Rational, a: Rational, bits: int) -> RealInterval:
    """
    Enclosure of the Hurwitz zeta function by Euler-Maclaurin summation.
    The remainder after m correction terms is bounded by the first omitted
    term for real s > 1.
    """
    s = Fraction(s)
    a = Fraction(a)
    _check_s(s)
    if not 0 < a <= 1:
        _error = f"The Hurwitz shift must lie in (0, 1] (received {a})"
        raise ValueError(_error)

    prec = bits + 16
    n_terms = bits // 2 + 8
    m = bits // 4 + 2

    total = RealInterval.exact(0)
    for k in range(n_terms):
        term = power(RealInterval.exact(k + a), -s, prec)
        total = (total + term).rounded(prec)

    x = n_terms + a
    x_s = power(RealInterval.exact(x), -s, prec)
    total = total + x_s * (x / (s - 1)) + x_s / 2

    rising = s
    for j in range(1, m + 1):
        coeff = bernoulli_fraction(2 * j) / math.factorial(2 * j) * rising
        total = (total + x_s * (coeff / x ** (2 * j - 1))).rounded(prec)
        rising *= (s + 2 * j - 1) * (s + 2 * j)

    coeff = bernoulli_fraction(2 * m + 2) / math.factorial(2 * m + 2) * rising
    bound = (x_s * (abs(coeff) / x ** (2 * m + 1))).hi
    return (total + RealInterval(-bound, bound)).rounded(bits + 4)


def hurwitz_zeta(s: Rational, a: Rational, eps: Rational) -> RealInterval:
    return certify(
        lambda bits: hurwitz_zeta_at(s, a, bits),
        eps,
        f"hurwitz({s}, {a})",
    )


def riemann_zeta_at(s: Rational, bits: int) -> RealInterval:
    return hurwitz_zeta_at(s, 1, bits)


def riemann_zeta(s: Rational, eps: Rational) -> RealInterval:
    _check_s(Fraction(s))
    return certify(lambda bits: riemann_zeta_at(s, bits), eps, f"zeta({s})")


def gamma_at(s: Rational, bits: int) -> RealInterval:
    """
    Enclosure of the gamma function: shift the argument up, apply the
    Stirling series with the remainder bounded by the first omitted term,
    then divide by the exact rising product.
    """
    s = Fraction(s)
    if not 0 < s <= 4:
        _error = f"The gamma function is supported on (0, 4] (received {s})"
        raise ValueError(_error)

    prec = bits + 16
    z = s
    rising = Fraction(1)
    while z < bits // 2 + 8:
        rising *= z
        z += 1

    m = bits // 4 + 2
    two_pi = 2 * pi_interval(prec)
    series = (z - Fraction(1, 2)) * log_rational(z, prec) - z
    series = series + log_interval(two_pi, prec) / 2
    for j in range(1, m + 1):
        b = bernoulli_fraction(2 * j)
        series = series + b / (2 * j * (2 * j - 1) * z ** (2 * j - 1))

    b = bernoulli_fraction(2 * m + 2)
    bound = abs(b) / ((2 * m + 2) * (2 * m + 1) * z ** (2 * m + 1))
    series = (series + RealInterval(-bound, bound)).rounded(prec)
    return (exp_interval(series, prec) / rising).rounded(bits + 4)


def gamma_fn(s: Rational, eps: Rational) -> RealInterval:
    return certify(lambda bits: gamma_at(s, bits), eps, f"gamma({s})")


def periodic_l_at(
    coefficients: Sequence[int],
    s: Rational,
    bits: int,
) -> RealInterval:
    """
    Enclosure of the Dirichlet series whose coefficients repeat with period
    q = len(coefficients); coefficients[r - 1] is the coefficient of r.
    """
    s = Fraction(s)
    q = len(coefficients)
    prec = bits + 8
    total = RealInterval.exact(0)
    for r, c in enumerate(coefficients, start=1):
        if c != 0:
            h = hurwitz_zeta_at(s, Fraction(r, q), prec)
            total = total + c * h
    scale = power(RealInterval.exact(q), -s, prec)
    return (scale * total).rounded(bits + 4)


def kronecker_coefficients(d: int) -> list[int]:
    q = abs(d)
    return [kronecker_symbol(d, r) for r in range(1, q + 1)]


def quartic_coefficients(p: int, g: int) -> tuple[list[int], list[int]]:
    """Real and imaginary parts of the character sending g to i."""
    real = [0] * p
    imag = [0] * p
    for k in range(p - 1):
        r = pow(g, k, p)
        match k % 4:
            case 0:
                real[r - 1] = 1
            case 1:
                imag[r - 1] = 1
            case 2:
                real[r - 1] = -1
            case 3:
                imag[r - 1] = -1
    return real, imag


def dirichlet_l_at(d: int, s: Rational, bits: int) -> RealInterval:
    if d == 1:
        return riemann_zeta_at(s, bits)
    return periodic_l_at(kronecker_coefficients(d), s, bits)


def dirichlet_L(d: int, s: Rational, eps: Rational) -> RealInterval:
    if not is_fundamental_discriminant(d):
        _error = f"{d} is not a fundamental discriminant"
        raise ValueError(_error)
    _check_s(Fraction(s))
    return certify(lambda bits: dirichlet_l_at(d, s, bits), eps, f"L({s}, {d})")


def character_l_at(c: CharacterSpec, s: Rational, bits: int) -> RealInterval:
    match c.kind:
        case CharacterKind.KRONECKER:
            return dirichlet_l_at(c.modulus, s, bits)
        case CharacterKind.QUARTIC_PAIR:
            # L(psi) L(conj psi) = |L(psi)|^2
            real, imag = quartic_coefficients(c.modulus, c.generator)
            a = periodic_l_at(real, s, bits + 4)
            b = periodic_l_at(imag, s, bits + 4)
            return (a**2 + b**2).rounded(bits + 4)


def _product_at(
    characters: Sequence[CharacterSpec],
    s: Rational,
    bits: int,
) -> RealInterval:
    prec = bits + 2 * len(characters)
    total = RealInterval.exact(1)
    for c in characters:
        total = (total * character_l_at(c, s, prec)).rounded(prec)
    return total


def dedekind_zeta_at(f: FieldDesc, s: Rational, bits: int) -> RealInterval:
    if not f.analytic:
        _error = (
            f"{f.label}: unsupported analytic "
            "evaluation (no splitting data)"
        )
        raise UnsupportedFieldError(_error)
    return _product_at(f.characters, s, bits)


def dedekind_zeta(f: FieldDesc, s: Rational, eps: Rational) -> RealInterval:
    _check_s(Fraction(s))
    return certify(
        lambda bits: dedekind_zeta_at(f, s, bits),
        eps,
        f"zeta_{f.label}({s})",
    )


def relative_l_at(
    k: FieldDesc,
    ell: FieldDesc,
    s: Rational,
    bits: int,
) -> RealInterval:
    """
    The relative L-value of the extension ell/k, taken as the quotient of
    Dedekind zeta values. When the characters of k are among those of ell
    the quotient is the product of the remaining characters.
    """
    if not (k.analytic and ell.analytic):
        _error = f"{ell.label}/{k.label}: unsupported analytic evaluation"
        raise UnsupportedFieldError(_error)

    remaining = Counter(ell.characters)
    remaining.subtract(Counter(k.characters))
    if all(v >= 0 for v in remaining.values()):
        return _product_at(list(remaining.elements()), s, bits)
    return dedekind_zeta_at(ell, s, bits + 8) / dedekind_zeta_at(k, s, bits + 8)


def relative_l_value(
    k: FieldDesc,
    ell: FieldDesc,
    s: Rational,
    eps: Rational,
) -> RealInterval:
    _check_s(Fraction(s))
    return certify(
        lambda bits: relative_l_at(k, ell, s, bits),
        eps,
        f"L_{ell.label}/{k.label}({s})",
    )
