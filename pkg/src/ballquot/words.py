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
Words in free groups and finite presentations.

Words are written in letter-exponent notation: generator names (a letter
followed by optional digits) separated by spaces or `*`, exponents as `^n`,
parenthesised subwords with exponents, and commutators `(x, y)` or `[x, y]`
standing for x^-1 y^-1 x y.
"""

import re
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import FreeGroupElement, free_group

Letter = tuple[int, int]

_TOKEN = re.compile(r"\s*(?:([A-Za-z][0-9_]*)|(-?\d+)|(.))")
_NAME = re.compile(r"^[A-Za-z][0-9_]*$")
_CLOSERS = (("sym", ")"), ("sym", "]"), ("sym", ","))


class Word:
    """A freely reduced word: adjacent letters have distinct generators."""

    _letters: tuple[Letter, ...]

    def __init__(self, letters: Iterable[Letter] = ()):
        stack: list[Letter] = []
        for g, e in letters:
            if g < 0:
                _error = f"Generator indices are non-negative (received {g})"
                raise ValueError(_error)
            if e == 0:
                continue
            if stack and stack[-1][0] == g:
                total = stack[-1][1] + e
                stack.pop()
                if total != 0:
                    stack.append((g, total))
            else:
                stack.append((g, e))
        self._letters = tuple(stack)

    @staticmethod
    def generator(g: int, e: int = 1) -> "Word":
        return Word([(g, e)])

    @staticmethod
    def commutator(a: "Word", b: "Word") -> "Word":
        return a.inverse() * b.inverse() * a * b

    @property
    def letters(self) -> tuple[Letter, ...]:
        return self._letters

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self._letters)

    def is_identity(self) -> bool:
        return not self._letters

    def __mul__(self, other: "Word") -> "Word":
        return Word(self._letters + other.letters)

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self._letters))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self._letters == other.letters

    def __hash__(self) -> int:
        return hash(self._letters)

    def generators_used(self) -> frozenset[int]:
        return frozenset(g for g, _ in self._letters)

    def cyclically_reduced(self) -> "Word":
        letters = list(self._letters)
        while len(letters) >= 2 and letters[0][0] == letters[-1][0]:
            g, e0 = letters[0]
            e1 = letters[-1][1]
            middle = letters[1:-1]
            letters = [(g, e0 + e1), *middle] if e0 + e1 != 0 else middle
        return Word(letters)

    def expanded(self) -> list[Letter]:
        """The word as a sequence of letters with exponent +1 or -1."""
        out = []
        for g, e in self._letters:
            out.extend([(g, 1 if e > 0 else -1)] * abs(e))
        return out

    def exponent_sums(self, count: int) -> list[int]:
        sums = [0] * count
        for g, e in self._letters:
            sums[g] += e
        return sums

    def format(self, names: Sequence[str]) -> str:
        if not self._letters:
            return "1"
        parts = []
        for g, e in self._letters:
            parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        return " ".join(parts)

    def to_sympy(self, gens: Sequence[FreeGroupElement]) -> FreeGroupElement:
        result = gens[0] ** 0
        for g, e in self._letters:
            result = result * gens[g] ** e
        return result

    def __repr__(self) -> str:
        return f"Word({list(self._letters)})"


class _Parser:
    _tokens: list[tuple[str, str]]
    _position: int
    _index: Mapping[str, int]
    _text: str

    def __init__(self, text: str, index: Mapping[str, int]):
        self._text = text
        self._index = index
        self._position = 0
        self._tokens = []
        for m in _TOKEN.finditer(text):
            name, number, symbol = m.groups()
            if name is not None:
                self._tokens.append(("name", name))
            elif number is not None:
                self._tokens.append(("int", number))
            elif symbol is not None and not symbol.isspace():
                self._tokens.append(("sym", symbol))

    def _peek(self) -> tuple[str, str] | None:
        if self._position < len(self._tokens):
            return self._tokens[self._position]
        return None

    def _take(self) -> tuple[str, str]:
        token = self._peek()
        if token is None:
            _error = f"Unexpected end of word {self._text!r}"
            raise ValueError(_error)
        self._position += 1
        return token

    def _expect(self, symbol: str) -> None:
        kind, value = self._take()
        if kind != "sym" or value != symbol:
            _error = f"Expected {symbol!r} in {self._text!r}, found {value!r}"
            raise ValueError(_error)

    def parse(self) -> Word:
        word = self._word()
        if self._peek() is not None:
            _error = f"Unexpected {self._peek()} in {self._text!r}"
            raise ValueError(_error)
        return word

    def _word(self) -> Word:
        result = Word()
        while True:
            token = self._peek()
            if token is None or token in _CLOSERS:
                return result
            if token == ("sym", "*"):
                self._take()
                continue
            result = result * self._factor()

    def _factor(self) -> Word:
        atom = self._atom()
        if self._peek() == ("sym", "^"):
            self._take()
            kind, value = self._take()
            if kind != "int":
                _error = f"Expected an exponent in {self._text!r}"
                raise ValueError(_error)
            return atom ** int(value)
        return atom

    def _atom(self) -> Word:
        kind, value = self._take()
        if kind == "name":
            if value not in self._index:
                _error = f"Unknown generator {value!r} in {self._text!r}"
                raise ValueError(_error)
            return Word.generator(self._index[value])
        if kind == "sym" and value in ("(", "["):
            close = ")" if value == "(" else "]"
            first = self._word()
            if self._peek() == ("sym", ","):
                self._take()
                second = self._word()
                self._expect(close)
                return Word.commutator(first, second)
            if value == "[":
                _error = f"Brackets denote commutators in {self._text!r}"
                raise ValueError(_error)
            self._expect(close)
            return first
        if kind == "int" and value == "1":
            return Word()
        _error = f"Unexpected {value!r} in {self._text!r}"
        raise ValueError(_error)


def parse_word(text: str, names: Sequence[str]) -> Word:
    return _Parser(text, {n: i for i, n in enumerate(names)}).parse()


class Presentation:
    """Generators and cyclically reduced relators."""

    _names: tuple[str, ...]
    _relators: tuple[Word, ...]

    def __init__(self, names: Sequence[str], relators: Iterable[Word]):
        if len(set(names)) != len(names):
            _error = f"Generator names must be distinct: {list(names)}"
            raise ValueError(_error)
        for n in names:
            if not _NAME.match(n):
                _error = f"Invalid generator name {n!r}"
                raise ValueError(_error)
        rels = []
        for r in relators:
            if any(g >= len(names) for g in r.generators_used()):
                _error = f"Relator {r} uses an unknown generator"
                raise ValueError(_error)
            reduced = r.cyclically_reduced()
            if not reduced.is_identity():
                rels.append(reduced)
        self._names = tuple(names)
        self._relators = tuple(rels)

    @staticmethod
    def parse(names: Sequence[str], relators: Sequence[str]) -> "Presentation":
        return Presentation(names, [parse_word(r, names) for r in relators])

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def relators(self) -> tuple[Word, ...]:
        return self._relators

    @property
    def generator_count(self) -> int:
        return len(self._names)

    def index(self, name: str) -> int:
        try:
            return self._names.index(name)
        except ValueError:
            _error = f"Unknown generator {name!r}"
            raise ValueError(_error) from None

    def word(self, text: str) -> Word:
        return parse_word(text, self._names)

    def format(self, w: Word) -> str:
        return w.format(self._names)

    def with_relators(self, extra: Iterable[Word]) -> "Presentation":
        """Tietze: add relators (consequences leave the group unchanged)."""
        return Presentation(self._names, [*self._relators, *extra])

    def with_generator(self, name: str, value: Word) -> "Presentation":
        """Tietze: add a generator together with the relator name^-1 value."""
        fresh = Word.generator(len(self._names))
        return Presentation(
            [*self._names, name], [*self._relators, fresh.inverse() * value]
        )

    def relabelled(self, mapping: Mapping[str, str]) -> "Presentation":
        return Presentation(
            [mapping.get(n, n) for n in self._names], self._relators
        )

    def permuted_relators(self, order: Sequence[int]) -> "Presentation":
        return Presentation(self._names, [self._relators[i] for i in order])

    def exponent_rows(self) -> list[dict[int, int]]:
        rows = []
        for r in self._relators:
            sums = r.exponent_sums(len(self._names))
            row = {g: e for g, e in enumerate(sums)}
            rows.append({g: e for g, e in row.items() if e != 0})
        return rows

    def to_sympy(self) -> tuple[FpGroup, tuple[FreeGroupElement, ...]]:
        free, *gens = free_group(", ".join(self._names))
        return (
            FpGroup(free, [r.to_sympy(gens) for r in self._relators]),
            tuple(gens),
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "generators": list(self._names),
            "relators": [self.format(r) for r in self._relators],
        }

    @staticmethod
    def from_json(data: Mapping[str, Any]) -> "Presentation":
        return Presentation.parse(
            [str(n) for n in data["generators"]],
            [str(r) for r in data["relators"]],
        )

    def __repr__(self) -> str:
        rels = ", ".join(self.format(r) for r in self._relators)
        return f"<{', '.join(self._names)} | {rels}>"


GAMMA_GENERATORS = ("b", "j", "u", "v")

GAMMA_RELATORS = (
    "b^3",
    "u^4",
    "v^8",
    "(u, j)",
    "(v, j)",
    "j^-3 v^2",
    "(b v u^3)^3",
    "u v (u v^-1)^2",
    "(b j)^2 u^-2 v^-1",
    "b^-1 u^-2 v^-1 b v u^2",
)

# The same relator with one more factor b j, as it appears among the
# conditions a finite quotient must satisfy.
PROPOSITION_RELATOR = "(b j)^3 u^-2 v^-1"

RELATOR_VARIANTS = ("presentation", "proposition")

G10_GENERATORS = ("j", "u", "v")

G10_RELATORS = (
    "u^4",
    "v^8",
    "(u, j)",
    "(v, j)",
    "j^-3 v^2",
    "u v (u v^-1)^2",
)

# Relators checked on a finite quotient besides those of the reflection group.
CONDITION_RELATORS = (
    "(b v u^3)^3",
    "(b j)^2 u^-2 v^-1",
    "b^-1 u^-2 v^-1 b v u^2",
)

G10_ORDER = 288


def relator_variant_strings(variant: str) -> tuple[str, ...]:
    match variant:
        case "presentation":
            return GAMMA_RELATORS
        case "proposition":
            return tuple(
                PROPOSITION_RELATOR if r == "(b j)^2 u^-2 v^-1" else r
                for r in GAMMA_RELATORS
            )
        case _:
            _error = (
                f"Unknown relator variant {variant!r} "
                f"(known: {', '.join(RELATOR_VARIANTS)})"
            )
            raise ValueError(_error)


def gamma(variant: str = "presentation") -> Presentation:
    return Presentation.parse(
        GAMMA_GENERATORS, relator_variant_strings(variant)
    )


def g10() -> Presentation:
    return Presentation.parse(G10_GENERATORS, G10_RELATORS)


def condition_relators(variant: str = "presentation") -> tuple[str, ...]:
    if variant == "proposition":
        return (
            CONDITION_RELATORS[0],
            PROPOSITION_RELATOR,
            CONDITION_RELATORS[2],
        )
    relator_variant_strings(variant)
    return CONDITION_RELATORS
