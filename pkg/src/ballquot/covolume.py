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

"""The minimal covolume search for arithmetic lattices in PU(2,1)."""

import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from enum import Enum
from fractions import Fraction
from typing import Any

from sympy import factorint

from ballquot.analytic import (
    dedekind_zeta_at,
    gamma_at,
    kronecker_symbol,
    relative_l_at,
    riemann_zeta_at,
)
from ballquot.interval import (
    Rational,
    RealInterval,
    certify,
    exp_rational,
    pi_interval,
    power,
)
from ballquot.model import (
    CharacterKind,
    DataError,
    DiscriminantBound,
    FieldDesc,
    FieldKind,
    UnsupportedFieldError,
)

log = logging.getLogger(__name__)

# Euler characteristics at most 1/288 force the field bound below 1/864.
THRESHOLD = Fraction(1, 864)
TARGET_EULER = Fraction(1, 288)

# Slavutskii's regulator bound R >= 0.00136 e^(0.57 n) w.
SLAVUTSKII_FACTOR = Fraction(136, 100000)
SLAVUTSKII_EXPONENT = Fraction(57, 100)
PRASAD_YEUNG_CONSTANT = Fraction(117504, 100000)

SMALLEST_IMAGINARY_QUADRATIC = 3
MAX_DEGREE = 5

TABLE1_DELTAS: Mapping[int, Fraction] = {
    1: Fraction("0.00145"),
    2: Fraction("0.395731"),
    3: Fraction("0.523748"),
    4: Fraction("0.589587"),
    5: Fraction("0.629827"),
}

TABLE1_PRINTED: Mapping[int, Fraction] = {
    1: Fraction("6.64809"),
    2: Fraction("9.96044"),
    3: Fraction("10.404"),
    4: Fraction("10.523"),
    5: Fraction("10.5646"),
}

TABLE2_PRINTED: Mapping[int, int] = {1: 3, 2: 3, 3: 3, 4: 1, 5: 1}

# eps = 1e-4, refined by 1e-2 at most five times.
PRECISION_SCHEDULE: tuple[Fraction, ...] = tuple(
    Fraction(1, 10**4) * Fraction(1, 100) ** k for k in range(6)
)

HERMITIAN_FORM = "diag(1, 1, 1 - alpha)"


class BoundKind(Enum):
    RATIONAL_CAP = 0
    QUADRATIC_CAP = 1
    ROOT_DISCRIMINANT_CAP = 2
    DIRECT_LOWER_BOUND = 3
    DEGREE_DEFERRAL = 4


class Verdict(Enum):
    ELIMINATED = 0
    SURVIVES = 1
    INDETERMINATE = 2
    DEFERRED = 3


class SplitKind(Enum):
    SPLIT = 0
    INERT = 1
    RAMIFIED = 2


class ScreenVerdict(Enum):
    PAIR = 0
    ABOVE_CAP = 1
    DISCRIMINANT = 2
    NOT_AN_EXTENSION = 3


class SearchAborted(RuntimeError):

    _certificate: "EliminationCertificate"

    def __init__(self, certificate: "EliminationCertificate"):
        super().__init__(f"Indeterminate: {certificate}")
        self._certificate = certificate

    @property
    def certificate(self) -> "EliminationCertificate":
        return self._certificate


class EliminationCertificate:

    _degree: int
    _candidate: tuple[int, int] | None
    _bound: BoundKind
    _value: RealInterval | None
    _threshold: Fraction
    _verdict: Verdict

    def __init__(
        self,
        degree: int,
        candidate: tuple[int, int] | None,
        bound: BoundKind,
        value: RealInterval | None,
        threshold: Fraction,
        verdict: Verdict,
    ):
        if verdict == Verdict.ELIMINATED:
            assert value is not None
            if bound == BoundKind.DIRECT_LOWER_BOUND:
                if not value.lo > threshold:
                    _error = f"Lower bound {value} does not exceed {threshold}"
                    raise ValueError(_error)
            elif not value.hi < threshold:
                _error = f"Cap {value} does not lie below {threshold}"
                raise ValueError(_error)
        self._degree = degree
        self._candidate = candidate
        self._bound = bound
        self._value = value
        self._threshold = threshold
        self._verdict = verdict

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def candidate(self) -> tuple[int, int] | None:
        return self._candidate

    @property
    def bound(self) -> BoundKind:
        return self._bound

    @property
    def value(self) -> RealInterval | None:
        return self._value

    @property
    def threshold(self) -> Fraction:
        return self._threshold

    @property
    def verdict(self) -> Verdict:
        return self._verdict

    @property
    def sort_key(self) -> tuple[int, int, int, int]:
        a, b = self._candidate if self._candidate else (0, 0)
        return (self._degree, self._bound.value, a, b)

    def to_json(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "degree": self._degree,
            "candidate": list(self._candidate) if self._candidate else None,
            "bound": self._bound.name,
            "threshold": str(self._threshold),
            "verdict": self._verdict.name,
        }
        if self._value is not None:
            result["value"] = [float(self._value.lo), float(self._value.hi)]
        return result

    def __repr__(self) -> str:
        return (
            f"EliminationCertificate(n={self._degree}, {self._candidate}, "
            f"{self._bound.name}, {self._value}, {self._verdict.name})"
        )


class Place:

    _label: str
    _residue_char: int
    _q: int
    _split_in_l: bool
    _anisotropic: bool
    _iwahori: bool

    def __init__(
        self,
        label: str,
        residue_char: int,
        q: int,
        split_in_l: bool = True,
        anisotropic: bool = False,
        iwahori: bool = False,
    ):
        factors = factorint(q)
        if list(factors) != [residue_char]:
            _error = (
                f"{label}: residue field size {q} "
                f"is not a power of {residue_char}"
            )
            raise ValueError(_error)
        self._label = label
        self._residue_char = residue_char
        self._q = q
        self._split_in_l = split_in_l
        self._anisotropic = anisotropic
        self._iwahori = iwahori

    @property
    def label(self) -> str:
        return self._label

    @property
    def residue_char(self) -> int:
        return self._residue_char

    @property
    def q(self) -> int:
        return self._q

    @property
    def split_in_l(self) -> bool:
        return self._split_in_l

    @property
    def anisotropic(self) -> bool:
        """Membership in T0, where the group is anisotropic."""
        return self._anisotropic

    @property
    def iwahori(self) -> bool:
        return self._iwahori

    @property
    def xi_order(self) -> int:
        return 3 if self._split_in_l and self._iwahori else 1


class CommClassData:
    """A field pair with its places T, factors e' and 3-part bound h3."""

    _k: FieldDesc
    _ell: FieldDesc
    _places: tuple[Place, ...]
    _h3: int
    _e_prime: dict[str, Fraction]

    def __init__(
        self,
        k: FieldDesc,
        ell: FieldDesc,
        places: Sequence[Place] = (),
        h3: int = 1,
        e_prime: Mapping[str, Rational] | None = None,
    ):
        if ell.degree != 2 * k.degree:
            _error = f"{ell.label} is not a quadratic extension of {k.label}"
            raise ValueError(_error)
        if not h3 >= 1 or set(factorint(h3)) - {3}:
            _error = f"h3 must be a power of 3 (received {h3})"
            raise ValueError(_error)

        factors = {p.label: Fraction(1) for p in places}
        for label, value in (e_prime or {}).items():
            if label not in factors:
                _error = f"e' given for {label}, which is not in T"
                raise ValueError(_error)
            factors[label] = Fraction(value)

        for p in places:
            if p.anisotropic and not p.split_in_l:
                _error = f"{p.label}: places of T0 split in {ell.label}"
                raise ValueError(_error)
            e1 = factors[p.label]
            if not e1 >= 1:
                _error = f"{p.label}: e' must be at least 1 (received {e1})"
                raise ValueError(_error)
            e2 = e1 / (3 if p.anisotropic else p.xi_order)
            if not e2 >= 1:
                _error = f"{p.label}: e'' must be at least 1 (received {e2})"
                raise ValueError(_error)
            if p.anisotropic and (e2 == 1) != (p.q == 2):
                _error = f"{p.label}: on T0, e'' = 1 exactly when q = 2"
                raise ValueError(_error)

        self._k = k
        self._ell = ell
        self._places = tuple(places)
        self._h3 = h3
        self._e_prime = factors

    @property
    def k(self) -> FieldDesc:
        return self._k

    @property
    def ell(self) -> FieldDesc:
        return self._ell

    @property
    def places(self) -> tuple[Place, ...]:
        return self._places

    @property
    def h3(self) -> int:
        return self._h3

    @property
    def degree(self) -> int:
        return self._k.degree

    def e_prime(self, label: str) -> Fraction:
        return self._e_prime[label]

    def e_double_prime(self, label: str) -> Fraction:
        p = next(p for p in self._places if p.label == label)
        return self._e_prime[label] / (3 if p.anisotropic else p.xi_order)

    def e_prime_product(self) -> Fraction:
        result = Fraction(1)
        for value in self._e_prime.values():
            result *= value
        return result

    def anisotropic_count(self) -> int:
        return sum(1 for p in self._places if p.anisotropic)


#
# Bounds.
#


def _sixteen_pi5_at(bits: int) -> RealInterval:
    return 16 * pi_interval(bits + 8) ** 5


def _zeta_root_at(n: int, bits: int) -> RealInterval:
    """zeta(2n)^(1/2), the lower bound for zeta_k(2) L_{ell/k}(3)."""
    return power(riemann_zeta_at(2 * n, bits + 8), Fraction(1, 2), bits + 8)


def prasad_euler_char_at(c: CommClassData, bits: int) -> RealInterval:
    n = c.degree
    prec = bits + 16
    numerator = 9 * power(
        RealInterval.exact(c.ell.discriminant), Fraction(5, 2), prec
    )
    numerator = numerator * dedekind_zeta_at(c.k, 2, prec)
    numerator = numerator * relative_l_at(c.k, c.ell, 3, prec)
    denominator = _sixteen_pi5_at(prec) ** n * c.k.discriminant
    value = numerator / denominator * c.e_prime_product()
    return value.rounded(bits + 4)


def prasad_euler_char(c: CommClassData, eps: Rational) -> RealInterval:
    return certify(
        lambda bits: prasad_euler_char_at(c, bits),
        eps,
        f"e({c.ell.label}/{c.k.label})",
    )


def index_bound(c: CommClassData) -> int:
    """The bound 3^(1 + #T0) h3 times #Xi over the places of T outside T0."""
    result = 3 ** (1 + c.anisotropic_count()) * c.h3
    for p in c.places:
        if not p.anisotropic:
            result *= p.xi_order
    return result


def brauer_siegel_h3_bound_at(
    ell: FieldDesc,
    s: Rational,
    bits: int,
) -> RealInterval:
    s = Fraction(s)
    if not s > 1:
        _error = f"The class number bound needs s > 1 (received {s})"
        raise ValueError(_error)
    if not ell.totally_complex:
        _error = f"{ell.label} is not totally complex"
        raise ValueError(_error)

    n = ell.degree // 2
    prec = bits + 16
    two_pi = 2 * pi_interval(prec)
    ratio = RealInterval.exact(ell.discriminant) / two_pi ** (2 * n)
    value = s * (s - 1) * gamma_at(s, prec) ** n
    value = value * power(ratio, s / 2, prec)
    value = value * dedekind_zeta_at(ell, s, prec)
    regulator = SLAVUTSKII_FACTOR * exp_rational(SLAVUTSKII_EXPONENT * n, prec)
    return (value / regulator).rounded(bits + 4)


def brauer_siegel_h3_bound(
    ell: FieldDesc,
    s: Rational,
    eps: Rational,
) -> RealInterval:
    return certify(
        lambda bits: brauer_siegel_h3_bound_at(ell, s, bits),
        eps,
        f"h({ell.label}) bound at s={s}",
    )


def _check_degree(n: int) -> None:
    if not 1 <= n <= MAX_DEGREE:
        _error = f"Degrees 1 to {MAX_DEGREE} are supported (received {n})"
        raise ValueError(_error)


def disc_upper_bound_at(n: int, delta: Rational, bits: int) -> RealInterval:
    _check_degree(n)
    delta = Fraction(delta)
    if not 0 < delta <= 2:
        _error = f"delta must lie in (0, 2] (received {delta})"
        raise ValueError(_error)

    prec = bits + 16
    inner = gamma_at(1 + delta, prec) * riemann_zeta_at(1 + delta, prec)
    inner = inner * power(pi_interval(prec), 4 - delta, prec)
    inner = inner * exp_rational(-SLAVUTSKII_EXPONENT, prec)
    first = power(inner, 1 / (3 - delta), prec)

    ratio = (
        delta
        * (delta + 1)
        / (PRASAD_YEUNG_CONSTANT * _zeta_root_at(n, prec))
    )
    second = power(ratio, 1 / ((3 - delta) * n), prec)
    return (2 * first * second).rounded(bits + 4)


def disc_upper_bound(n: int, delta: Rational, eps: Rational) -> RealInterval:
    return certify(
        lambda bits: disc_upper_bound_at(n, delta, bits),
        eps,
        f"disc bound n={n} delta={delta}",
    )


def rational_disc_cap_at(h3: int, bits: int) -> RealInterval:
    prec = bits + 16
    base = _sixteen_pi5_at(prec) * Fraction(h3, 864) / _zeta_root_at(1, prec)
    return power(base, Fraction(2, 5), prec).rounded(bits + 4)


def rational_disc_cap(eps: Rational, h3: int = 3) -> RealInterval:
    return certify(
        lambda bits: rational_disc_cap_at(h3, bits), eps, "rational cap"
    )


def root_disc_cap_at(n: int, h3: int, bits: int) -> RealInterval:
    prec = bits + 16
    base = _sixteen_pi5_at(prec) ** n * Fraction(h3, 864)
    base = base / _zeta_root_at(n, prec)
    return power(base, Fraction(1, 4 * n), prec).rounded(bits + 4)


def root_disc_cap(n: int, h3: int, eps: Rational) -> RealInterval:
    """The bound on Disc_ell^(1/2n), using Disc_ell^(1/2) >= Disc_k."""
    return certify(
        lambda bits: root_disc_cap_at(n, h3, bits),
        eps,
        f"root discriminant cap n={n} h={h3}",
    )


def quadratic_disc_cap(eps: Rational) -> RealInterval:
    return root_disc_cap(2, 3, eps)


def direct_lower_bound_at(
    disc_k: int,
    disc_l: int,
    n: int,
    h3: int,
    bits: int,
) -> RealInterval:
    prec = bits + 16
    value = power(RealInterval.exact(disc_l), Fraction(5, 2), prec)
    value = value * _zeta_root_at(n, prec)
    value = value / (_sixteen_pi5_at(prec) ** n * (disc_k * h3))
    return value.rounded(bits + 4)


def direct_lower_bound(
    disc_k: int,
    disc_l: int,
    n: int,
    h3: int,
    eps: Rational,
) -> RealInterval:
    return certify(
        lambda bits: direct_lower_bound_at(disc_k, disc_l, n, h3, bits),
        eps,
        f"direct bound ({disc_k}, {disc_l})",
    )


def minimal_volume_data(eps: Rational) -> dict[str, Any]:
    volume = certify(
        lambda bits: (
            8 * pi_interval(bits) ** 2 / 3 * TARGET_EULER
        ).rounded(bits),
        eps,
        "minimal volume",
    )
    return {
        "volume": volume,
        "b_at_pi2_over_108": Fraction(8, 3) / Fraction(1, 108),
        "b_at_pi2_over_1944": Fraction(8, 3) / Fraction(1, 1944),
    }


#
# Discriminant lower bounds and class numbers.
#


class DiscriminantBounds:

    _bounds: dict[int, DiscriminantBound]

    def __init__(self, bounds: Iterable[DiscriminantBound]):
        self._bounds = {}
        for b in bounds:
            if b.degree in self._bounds:
                _error = f"Duplicate discriminant bound for degree {b.degree}"
                raise DataError(_error)
            self._bounds[b.degree] = b
        degrees = sorted(self._bounds)
        for d0, d1 in zip(degrees, degrees[1:]):
            r0 = self._bounds[d0].root_discriminant
            if r0 > self._bounds[d1].root_discriminant:
                _error = (
                    "Discriminant bounds decrease "
                    f"from degree {d0} to {d1}"
                )
                raise DataError(_error)

    @property
    def max_degree(self) -> int:
        return max(self._bounds)

    def entries(self) -> list[DiscriminantBound]:
        return [self._bounds[d] for d in sorted(self._bounds)]

    def lookup(self, degree: int) -> DiscriminantBound:
        """The entry for the largest tabulated degree not above `degree`."""
        usable = [d for d in self._bounds if d <= degree]
        if not usable:
            _error = f"No discriminant bound at or below degree {degree}"
            raise DataError(_error)
        return self._bounds[max(usable)]


def class_number_bound(
    n: int,
    disc_bound: RealInterval,
    bounds: DiscriminantBounds,
) -> int:
    """
    The largest 3^a such that an unramified degree 3^a extension of ell
    escapes the tabulated root discriminant bounds.
    """
    h = 1
    a = 1
    while True:
        degree = 2 * n * 3**a
        entry = bounds.lookup(degree)
        if entry.root_discriminant > disc_bound.hi:
            return h
        if degree > bounds.max_degree:
            _error = f"Discriminant bounds do not reach degree {degree}"
            raise DataError(_error)
        h = 3**a
        a += 1


def reproduce_table1(eps: Rational) -> dict[int, RealInterval]:
    return {n: disc_upper_bound(n, d, eps) for n, d in TABLE1_DELTAS.items()}


def reproduce_table2(
    bounds: DiscriminantBounds,
    eps: Rational = Fraction(1, 10**6),
) -> dict[int, int]:
    result = {}
    for n, interval in reproduce_table1(eps).items():
        result[n] = class_number_bound(n, interval, bounds)
        log.debug("class number bound n=%d: %d", n, result[n])
    return result


#
# Fields.
#


class ExtensionScreen:

    _field: FieldDesc
    _verdict: ScreenVerdict
    _subfield: FieldDesc | None

    def __init__(
        self,
        field: FieldDesc,
        verdict: ScreenVerdict,
        subfield: FieldDesc | None = None,
    ):
        if (verdict == ScreenVerdict.PAIR) != (subfield is not None):
            _error = f"{field.label}: a pair needs exactly one subfield"
            raise ValueError(_error)
        self._field = field
        self._verdict = verdict
        self._subfield = subfield

    @property
    def field(self) -> FieldDesc:
        return self._field

    @property
    def verdict(self) -> ScreenVerdict:
        return self._verdict

    @property
    def subfield(self) -> FieldDesc | None:
        return self._subfield

    def __repr__(self) -> str:
        return f"ExtensionScreen({self._field.label}, {self._verdict.name})"


class FieldCatalog:

    _fields: dict[str, FieldDesc]

    def __init__(self, fields: Iterable[FieldDesc]):
        self._fields = {}
        for f in fields:
            if f.label in self._fields:
                _error = f"Duplicate field label {f.label}"
                raise DataError(_error)
            self._fields[f.label] = f
        for f in self._fields.values():
            for s in f.subfields:
                sub = self._fields.get(s)
                if sub is None:
                    _error = f"{f.label}: unknown subfield {s}"
                    raise DataError(_error)
                if f.degree % sub.degree != 0:
                    _error = (
                        f"{f.label}: degree is not "
                        f"a multiple of that of {s}"
                    )
                    raise DataError(_error)
                power_of_disc = sub.discriminant ** (f.degree // sub.degree)
                if f.discriminant % power_of_disc != 0:
                    _error = (
                        f"{f.label}: discriminant not "
                        f"divisible by that of {s}"
                    )
                    raise DataError(_error)

    def __getitem__(self, label: str) -> FieldDesc:
        try:
            return self._fields[label]
        except KeyError:
            _error = f"Unknown field {label}"
            raise DataError(_error) from None

    def __iter__(self) -> Any:
        return iter(self._fields.values())

    def __len__(self) -> int:
        return len(self._fields)

    def totally_real(self, degree: int, max_disc: Rational) -> list[FieldDesc]:
        return sorted(
            (
                f
                for f in self._fields.values()
                if f.degree == degree
                and f.totally_real
                and f.discriminant <= max_disc
            ),
            key=lambda f: f.discriminant,
        )

    def totally_complex(
        self, degree: int, max_disc: Rational
    ) -> list[FieldDesc]:
        return sorted(
            (
                f
                for f in self._fields.values()
                if f.degree == degree
                and f.totally_complex
                and f.discriminant <= max_disc
            ),
            key=lambda f: f.discriminant,
        )

    def find(self, degree: int, discriminant: int) -> FieldDesc:
        for f in self._fields.values():
            if f.degree == degree and f.discriminant == discriminant:
                return f
        _error = f"No field of degree {degree} and discriminant {discriminant}"
        raise DataError(_error)

    def screen_extensions(
        self,
        n: int,
        max_disc_k: Rational,
        max_disc_l: Rational,
    ) -> list[ExtensionScreen]:
        """Disc_k^2 divides Disc_ell whenever ell is quadratic over k."""
        ks = self.totally_real(n, max_disc_k)
        screens = []
        fields = sorted(
            (
                f
                for f in self._fields.values()
                if f.degree == 2 * n and f.totally_complex
            ),
            key=lambda f: f.discriminant,
        )
        for ell in fields:
            if ell.discriminant > max_disc_l:
                screens.append(ExtensionScreen(ell, ScreenVerdict.ABOVE_CAP))
                continue
            divisible = [
                k for k in ks if ell.discriminant % k.discriminant**2 == 0
            ]
            if not divisible:
                screens.append(
                    ExtensionScreen(ell, ScreenVerdict.DISCRIMINANT)
                )
                continue
            below = [k for k in divisible if k.label in ell.subfields]
            if not below:
                screens.append(
                    ExtensionScreen(ell, ScreenVerdict.NOT_AN_EXTENSION)
                )
                continue
            for k in below:
                screens.append(ExtensionScreen(ell, ScreenVerdict.PAIR, k))
        return screens

    def candidate_pairs(
        self,
        n: int,
        max_disc_k: Rational,
        max_disc_l: Rational,
    ) -> list[tuple[FieldDesc, FieldDesc]]:
        pairs = []
        for s in self.screen_extensions(n, max_disc_k, max_disc_l):
            if s.subfield is None:
                log.debug("rejected %s", s)
                continue
            pairs.append((s.subfield, s.field))
        return sorted(
            pairs, key=lambda p: (p[0].discriminant, p[1].discriminant)
        )


def three_part(h: int) -> int:
    return 3 ** factorint(h).get(3, 0)


#
# The cascade.
#


def _decide(
    degree: int,
    candidate: tuple[int, int] | None,
    bound: BoundKind,
    threshold: Fraction,
    compute: Callable[[Fraction], RealInterval],
) -> EliminationCertificate:
    lower = bound == BoundKind.DIRECT_LOWER_BOUND
    value = None
    for eps in PRECISION_SCHEDULE:
        value = compute(eps)
        if lower and value.lo > threshold:
            verdict = Verdict.ELIMINATED
        elif lower and value.hi <= threshold:
            verdict = Verdict.SURVIVES
        elif not lower and value.hi < threshold:
            verdict = Verdict.ELIMINATED
        elif not lower and value.lo >= threshold:
            verdict = Verdict.SURVIVES
        else:
            log.debug("indeterminate at eps=%s: %s", eps, value)
            continue
        return EliminationCertificate(
            degree, candidate, bound, value, threshold, verdict
        )
    return EliminationCertificate(
        degree, candidate, bound, value, threshold, Verdict.INDETERMINATE
    )


def _direct_certificates(
    n: int,
    catalog: FieldCatalog,
    cap: RealInterval,
    class_bound: int,
) -> list[EliminationCertificate]:
    max_disc_l = cap.hi ** (2 * n)
    max_disc_k = cap.hi**n
    certificates = []
    for k, ell in catalog.candidate_pairs(n, max_disc_k, max_disc_l):
        h3 = (
            three_part(ell.class_number)
            if ell.class_number is not None
            else class_bound
        )
        pair = (k.discriminant, ell.discriminant)
        cert = _decide(
            n,
            pair,
            BoundKind.DIRECT_LOWER_BOUND,
            THRESHOLD,
            lambda eps: direct_lower_bound(pair[0], pair[1], n, h3, eps),
        )
        log.debug("%s", cert)
        certificates.append(cert)
    return certificates


def field_bound_cascade(
    n: int,
    catalog: FieldCatalog,
    bounds: DiscriminantBounds,
    class_bounds: Mapping[int, int] = TABLE2_PRINTED,
) -> list[EliminationCertificate]:
    if n > MAX_DEGREE:
        return [
            EliminationCertificate(
                n,
                None,
                BoundKind.DEGREE_DEFERRAL,
                None,
                Fraction(3),
                Verdict.DEFERRED,
            )
        ]
    _check_degree(n)
    h3 = class_bounds[n]

    match n:
        case 1:
            cert = _decide(
                1,
                None,
                BoundKind.RATIONAL_CAP,
                Fraction(SMALLEST_IMAGINARY_QUADRATIC),
                lambda eps: rational_disc_cap(eps, h3),
            )
            return [cert]
        case 2:
            kind = BoundKind.QUADRATIC_CAP
        case _:
            kind = BoundKind.ROOT_DISCRIMINANT_CAP

    lower = bounds.lookup(2 * n).root_discriminant
    cert = _decide(n, None, kind, lower, lambda eps: root_disc_cap(n, h3, eps))
    certificates = [cert]
    if cert.verdict == Verdict.SURVIVES:
        assert cert.value is not None
        certificates.extend(_direct_certificates(n, catalog, cert.value, h3))
    return certificates


#
# The division algebra.
#


class PlaceBehaviour:

    _prime: int
    _in_k: SplitKind
    _q: int
    _in_l: SplitKind

    def __init__(self, prime: int, in_k: SplitKind, q: int, in_l: SplitKind):
        self._prime = prime
        self._in_k = in_k
        self._q = q
        self._in_l = in_l

    @property
    def prime(self) -> int:
        return self._prime

    @property
    def in_k(self) -> SplitKind:
        return self._in_k

    @property
    def q(self) -> int:
        """The size of the residue field at the places of k over the prime."""
        return self._q

    @property
    def in_l(self) -> SplitKind:
        return self._in_l

    def __repr__(self) -> str:
        return (
            f"PlaceBehaviour({self._prime}, k: {self._in_k.name}, "
            f"q={self._q}, ell/k: {self._in_l.name})"
        )


def _quadratic_discriminants(
    k: FieldDesc,
    ell: FieldDesc,
) -> tuple[int, int, int]:
    if k.kind != FieldKind.REAL_QUADRATIC or k.parameter is None:
        _error = f"{k.label} is not a real quadratic field"
        raise UnsupportedFieldError(_error)
    ds = [
        c.modulus
        for c in ell.characters
        if c.kind == CharacterKind.KRONECKER and c.modulus != 1
    ]
    if len(ell.characters) != 4 or len(ds) != 3 or k.parameter not in ds:
        _error = f"{ell.label} is not a biquadratic field containing {k.label}"
        raise UnsupportedFieldError(_error)
    others = [d for d in ds if d != k.parameter]
    return (k.parameter, others[0], others[1])


def _symbol_kind(symbol: int) -> SplitKind:
    match symbol:
        case 1:
            return SplitKind.SPLIT
        case -1:
            return SplitKind.INERT
        case _:
            return SplitKind.RAMIFIED


def place_behaviour(k: FieldDesc, ell: FieldDesc, p: int) -> PlaceBehaviour:
    """Read off from the three quadratic subfields of a biquadratic ell."""
    d_k, d_1, d_2 = _quadratic_discriminants(k, ell)
    s_k = kronecker_symbol(d_k, p)
    s_1 = kronecker_symbol(d_1, p)
    s_2 = kronecker_symbol(d_2, p)

    in_k = _symbol_kind(s_k)
    q = p * p if in_k == SplitKind.INERT else p

    match in_k:
        case SplitKind.INERT:
            # Frobenius is nontrivial on k, so it has order 2 in ell.
            in_l = (
                SplitKind.SPLIT
                if s_1 != 0 and s_2 != 0
                else SplitKind.RAMIFIED
            )
        case SplitKind.SPLIT:
            if s_1 == 0 or s_2 == 0:
                in_l = SplitKind.RAMIFIED
            else:
                in_l = _symbol_kind(s_1)
        case SplitKind.RAMIFIED:
            unramified = [s for s in (s_1, s_2) if s != 0]
            in_l = (
                _symbol_kind(unramified[0])
                if unramified
                else SplitKind.RAMIFIED
            )

    return PlaceBehaviour(p, in_k, q, in_l)


def e_double_prime_exceeds_one(q: int) -> bool:
    """On T0, e'' = 1 exactly when the residue field is F2."""
    return q != 2


class DivisionAlgebraRecord:
    _place_over_2: PlaceBehaviour
    _survey: tuple[PlaceBehaviour, ...]
    _min_split_q: int

    def __init__(
        self,
        place_over_2: PlaceBehaviour,
        survey: Sequence[PlaceBehaviour],
    ):
        self._place_over_2 = place_over_2
        self._survey = tuple(survey)
        self._min_split_q = min(
            p.q for p in self._survey if p.in_l == SplitKind.SPLIT
        )

    @property
    def place_over_2(self) -> PlaceBehaviour:
        return self._place_over_2

    @property
    def survey(self) -> tuple[PlaceBehaviour, ...]:
        return self._survey

    @property
    def min_split_q(self) -> int:
        return self._min_split_q

    @property
    def degree_one(self) -> bool:
        """The place over 2 is inert in ell, so T0 forces e'' > 1."""
        v2 = self._place_over_2
        return (
            v2.in_k == SplitKind.RAMIFIED
            and v2.q == 2
            and v2.in_l != SplitKind.SPLIT
            and e_double_prime_exceeds_one(self._min_split_q)
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "placeOver2": {
                "inK": self._place_over_2.in_k.name,
                "q": self._place_over_2.q,
                "inL": self._place_over_2.in_l.name,
            },
            "minSplitQ": self._min_split_q,
            "degreeOne": self.degree_one,
        }


def division_algebra_check(
    k: FieldDesc,
    ell: FieldDesc,
    primes: Sequence[int] = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37),
) -> DivisionAlgebraRecord:
    survey = [place_behaviour(k, ell, p) for p in primes]
    return DivisionAlgebraRecord(place_behaviour(k, ell, 2), survey)


#
# The full search.
#


class SearchReport:
    _table1: dict[int, RealInterval]
    _table2: dict[int, int]
    _certificates: tuple[EliminationCertificate, ...]
    _survivors: tuple[tuple[int, int], ...]
    _division: DivisionAlgebraRecord
    _principal_euler: RealInterval
    _principal_exact: Fraction
    _index: int

    def __init__(
        self,
        table1: Mapping[int, RealInterval],
        table2: Mapping[int, int],
        certificates: Sequence[EliminationCertificate],
        division: DivisionAlgebraRecord,
        principal_euler: RealInterval,
        principal_exact: Fraction,
        index: int,
    ):
        self._table1 = dict(table1)
        self._table2 = dict(table2)
        self._certificates = tuple(
            sorted(certificates, key=lambda c: c.sort_key)
        )
        self._survivors = tuple(
            c.candidate
            for c in self._certificates
            if c.candidate is not None and c.verdict == Verdict.SURVIVES
        )
        self._division = division
        self._principal_euler = principal_euler
        self._principal_exact = principal_exact
        self._index = index

    @property
    def table1(self) -> dict[int, RealInterval]:
        return self._table1

    @property
    def table2(self) -> dict[int, int]:
        return self._table2

    @property
    def certificates(self) -> tuple[EliminationCertificate, ...]:
        return self._certificates

    @property
    def survivors(self) -> tuple[tuple[int, int], ...]:
        return self._survivors

    @property
    def division(self) -> DivisionAlgebraRecord:
        return self._division

    @property
    def principal_euler(self) -> RealInterval:
        return self._principal_euler

    @property
    def principal_exact(self) -> Fraction:
        return self._principal_exact

    @property
    def index(self) -> int:
        return self._index

    @property
    def minimal_euler(self) -> Fraction:
        return self._principal_exact / self._index

    @property
    def hermitian_form(self) -> str:
        return HERMITIAN_FORM

    def alternatives(self) -> dict[str, bool]:
        realized = {self._principal_exact / i for i in (1, self._index)}
        return {
            str(x): x in realized for x in (Fraction(1, 288), Fraction(1, 108))
        }

    def to_json(self) -> dict[str, Any]:
        return {
            "survivors": [list(s) for s in self._survivors],
            "certificates": [c.to_json() for c in self._certificates],
            "constants": {
                "table1": {
                    str(n): [float(v.lo), float(v.hi)]
                    for n, v in sorted(self._table1.items())
                },
                "table2": {str(n): h for n, h in sorted(self._table2.items())},
                "principalEuler": str(self._principal_exact),
                "index": self._index,
                "minimalEuler": str(self.minimal_euler),
                "alternatives": self.alternatives(),
            },
            "hermitianForm": HERMITIAN_FORM,
            "divisionAlgebra": self._division.to_json(),
        }


def identify_rational(
    value: RealInterval,
    max_denominator: int = 10000,
) -> Fraction:
    guess = value.midpoint.limit_denominator(max_denominator)
    if not value.contains(guess):
        _error = f"No fraction with denominator <= {max_denominator} in {value}"
        raise ValueError(_error)
    return guess


def run_full_search(
    catalog: FieldCatalog,
    bounds: DiscriminantBounds,
    class_bounds: Mapping[int, int] | None = None,
    eps: Rational = Fraction(1, 10**8),
) -> SearchReport:
    log.info("reproducing the root discriminant bounds")
    table1 = reproduce_table1(Fraction(1, 10**6))
    table2 = {n: class_number_bound(n, v, bounds) for n, v in table1.items()}
    for n, h in table2.items():
        if h != TABLE2_PRINTED[n]:
            log.warning("class number bound for n=%d is %d", n, h)

    effective = dict(class_bounds) if class_bounds is not None else table2
    certificates = []
    for n in range(1, MAX_DEGREE + 2):
        log.info("eliminating degree %d", n)
        for cert in field_bound_cascade(n, catalog, bounds, effective):
            if cert.verdict == Verdict.INDETERMINATE:
                raise SearchAborted(cert)
            certificates.append(cert)

    survivors = [
        c
        for c in certificates
        if c.candidate is not None and c.verdict == Verdict.SURVIVES
    ]
    if len(survivors) != 1:
        _error = f"Expected a single surviving pair, found {survivors}"
        raise RuntimeError(_error)

    n = survivors[0].degree
    assert survivors[0].candidate is not None
    disc_k, disc_l = survivors[0].candidate
    k = catalog.find(n, disc_k)
    ell = catalog.find(2 * n, disc_l)
    log.info("survivor: %s and %s", k.label, ell.label)

    division = division_algebra_check(k, ell)
    if not division.degree_one:
        _error = f"The division algebra check failed for {ell.label}"
        raise RuntimeError(_error)

    h3 = three_part(ell.class_number) if ell.class_number else 1
    data = CommClassData(k, ell, (), h3)
    principal = prasad_euler_char(data, eps)
    exact = identify_rational(principal)
    return SearchReport(
        table1,
        table2,
        certificates,
        division,
        principal,
        exact,
        index_bound(data),
    )
