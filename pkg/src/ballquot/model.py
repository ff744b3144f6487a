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

from collections.abc import Sequence
from enum import Enum
from fractions import Fraction

from sympy import factorint, isprime
from sympy.ntheory import is_primitive_root


class DataError(ValueError):
    """Shipped or user-supplied data is internally inconsistent."""


class UnsupportedFieldError(ValueError):
    """A field carries no splitting data, so its zeta function is opaque."""


class Provenance(Enum):
    PAPER = 0
    TRIVIAL = 1
    DERIVED = 2


class FieldKind(Enum):
    RATIONALS = 0
    REAL_QUADRATIC = 1
    IMAGINARY_QUADRATIC = 2
    CYCLOTOMIC = 3
    TABULATED = 4


class CharacterKind(Enum):
    KRONECKER = 0
    QUARTIC_PAIR = 1


def is_fundamental_discriminant(d: int) -> bool:
    if d == 1:
        return True
    if d == 0:
        return False
    if d % 4 == 1:
        return all(e == 1 for e in factorint(abs(d)).values())
    if d % 4 == 0:
        m = d // 4
        if m % 4 not in (2, 3):
            return False
        return all(e == 1 for e in factorint(abs(m)).values())
    return False


class CharacterSpec:
    """A Kronecker character, or a conjugate pair of quartic characters."""

    _kind: CharacterKind
    _modulus: int
    _generator: int

    def __init__(self, kind: CharacterKind, modulus: int, generator: int = 0):
        match kind:
            case CharacterKind.KRONECKER:
                if not is_fundamental_discriminant(modulus):
                    _error = f"{modulus} is not a fundamental discriminant"
                    raise DataError(_error)
            case CharacterKind.QUARTIC_PAIR:
                if modulus % 4 != 1 or not isprime(modulus):
                    _error = (
                        "Quartic pairs need a prime "
                        f"p = 1 mod 4 ({modulus})"
                    )
                    raise DataError(_error)
                if not is_primitive_root(generator, modulus):
                    _error = f"{generator} does not generate (Z/{modulus})^*"
                    raise DataError(_error)
        self._kind = kind
        self._modulus = modulus
        self._generator = generator

    @property
    def kind(self) -> CharacterKind:
        return self._kind

    @property
    def modulus(self) -> int:
        return self._modulus

    @property
    def generator(self) -> int:
        return self._generator

    @property
    def count(self) -> int:
        match self._kind:
            case CharacterKind.KRONECKER:
                return 1
            case CharacterKind.QUARTIC_PAIR:
                return 2

    @property
    def conductor_product(self) -> int:
        match self._kind:
            case CharacterKind.KRONECKER:
                return abs(self._modulus)
            case CharacterKind.QUARTIC_PAIR:
                return self._modulus * self._modulus

    @property
    def key(self) -> tuple[int, int, int]:
        return (self._kind.value, self._modulus, self._generator)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CharacterSpec):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        match self._kind:
            case CharacterKind.KRONECKER:
                return f"chi({self._modulus})"
            case CharacterKind.QUARTIC_PAIR:
                return f"psi({self._modulus}, {self._generator})"


class FieldDesc:
    _label: str
    _degree: int
    _real_places: int
    _complex_places: int
    _discriminant: int
    _kind: FieldKind
    _parameter: int | None
    _class_number: int | None
    _subfields: tuple[str, ...]
    _characters: tuple[CharacterSpec, ...]

    def __init__(
        self,
        label: str,
        degree: int,
        real_places: int,
        complex_places: int,
        discriminant: int,
        kind: FieldKind,
        parameter: int | None = None,
        class_number: int | None = None,
        subfields: Sequence[str] = (),
        characters: Sequence[CharacterSpec] = (),
    ):
        if not degree >= 1:
            _error = f"{label}: degree must be positive"
            raise DataError(_error)
        if real_places + 2 * complex_places != degree:
            _error = (
                f"{label}: signature ({real_places}, "
                f"{complex_places}) does not match degree {degree}"
            )
            raise DataError(_error)
        if not discriminant >= 1:
            _error = f"{label}: the absolute discriminant must be positive"
            raise DataError(_error)
        if class_number is not None and not class_number >= 1:
            _error = f"{label}: class numbers must be positive"
            raise DataError(_error)

        match kind:
            case FieldKind.RATIONALS:
                if degree != 1 or discriminant != 1:
                    _error = (
                        f"{label}: the rationals have "
                        "degree 1 and discriminant 1"
                    )
                    raise DataError(_error)
            case FieldKind.REAL_QUADRATIC:
                if parameter is None or parameter <= 1:
                    _error = f"{label}: a real quadratic field needs D > 1"
                    raise DataError(_error)
                if not is_fundamental_discriminant(parameter):
                    _error = (
                        f"{label}: {parameter} is not "
                        "a fundamental discriminant"
                    )
                    raise DataError(_error)
                if discriminant != parameter or real_places != 2:
                    _error = f"{label}: inconsistent real quadratic data"
                    raise DataError(_error)
            case FieldKind.IMAGINARY_QUADRATIC:
                if parameter is None or parameter >= 0:
                    _error = (
                        f"{label}: an imaginary "
                        "quadratic field needs D < 0"
                    )
                    raise DataError(_error)
                if not is_fundamental_discriminant(parameter):
                    _error = (
                        f"{label}: {parameter} is not "
                        "a fundamental discriminant"
                    )
                    raise DataError(_error)
                if discriminant != -parameter or complex_places != 1:
                    _error = f"{label}: inconsistent imaginary quadratic data"
                    raise DataError(_error)
            case FieldKind.CYCLOTOMIC:
                if parameter is None or parameter < 3:
                    _error = f"{label}: a cyclotomic field needs m >= 3"
                    raise DataError(_error)
            case FieldKind.TABULATED:
                pass

        if characters:
            count = sum(c.count for c in characters)
            if count != degree:
                _error = (
                    f"{label}: {count} characters "
                    f"given for degree {degree}"
                )
                raise DataError(_error)
            product = 1
            for c in characters:
                product *= c.conductor_product
            if product != discriminant:
                _error = (
                    f"{label}: conductor product {product} differs "
                    f"from the discriminant {discriminant}"
                )
                raise DataError(_error)

        self._label = label
        self._degree = degree
        self._real_places = real_places
        self._complex_places = complex_places
        self._discriminant = discriminant
        self._kind = kind
        self._parameter = parameter
        self._class_number = class_number
        self._subfields = tuple(subfields)
        self._characters = tuple(characters)

    @property
    def label(self) -> str:
        return self._label

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def signature(self) -> tuple[int, int]:
        return (self._real_places, self._complex_places)

    @property
    def discriminant(self) -> int:
        return self._discriminant

    @property
    def kind(self) -> FieldKind:
        return self._kind

    @property
    def parameter(self) -> int | None:
        return self._parameter

    @property
    def class_number(self) -> int | None:
        return self._class_number

    @property
    def subfields(self) -> tuple[str, ...]:
        return self._subfields

    @property
    def characters(self) -> tuple[CharacterSpec, ...]:
        return self._characters

    @property
    def analytic(self) -> bool:
        return len(self._characters) > 0

    @property
    def totally_real(self) -> bool:
        return self._complex_places == 0

    @property
    def totally_complex(self) -> bool:
        return self._real_places == 0

    def __repr__(self) -> str:
        return (
            f"FieldDesc({self._label}, n={self._degree}, "
            f"D={self._discriminant})"
        )


class DiscriminantBound:
    _degree: int
    _root_discriminant: Fraction
    _source: str

    def __init__(self, degree: int, root_discriminant: Fraction, source: str):
        if not degree >= 2 or degree % 2 != 0:
            _error = f"Totally complex degrees are even and positive ({degree})"
            raise DataError(_error)
        if not root_discriminant > 1:
            _error = f"Root discriminant bounds exceed 1 ({root_discriminant})"
            raise DataError(_error)
        self._degree = degree
        self._root_discriminant = root_discriminant
        self._source = source

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def root_discriminant(self) -> Fraction:
        return self._root_discriminant

    @property
    def source(self) -> str:
        return self._source


class TorsionWitness:
    _label: str
    _word: str
    _order: int | None
    _local_group: str

    def __init__(
        self,
        label: str,
        word: str,
        order: int | None,
        local_group: str = "",
    ):
        if order is not None and not order >= 2:
            _error = f"Torsion witness {label} must have order at least 2"
            raise DataError(_error)
        self._label = label
        self._word = word
        self._order = order
        self._local_group = local_group

    @property
    def label(self) -> str:
        return self._label

    @property
    def word(self) -> str:
        return self._word

    @property
    def order(self) -> int | None:
        return self._order

    @property
    def local_group(self) -> str:
        return self._local_group
