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
Finitely presented groups: abelian invariants, coset enumeration, searches
for epimorphisms onto finite permutation groups, and the checks applied to
the resulting finite quotients.
"""

import logging
import time
from collections.abc import Callable, Iterable, Mapping, Sequence
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any

import numpy as np
from sympy import Matrix, ZZ, primerange
from sympy.combinatorics.coset_table import coset_enumeration_r
from sympy.matrices.normalforms import smith_normal_form

from ballquot.finitegrp import (
    PERM_DTYPE,
    PermArray,
    PermGroup,
    automorphism_generators,
    class_representatives,
    conjugacy_transversal,
    conjugation_stabilizer,
    cycle_notation,
    element_order,
    identity,
    inverse,
    is_identity,
    parse_cycle_notation,
    target,
)
from ballquot.interval import RealInterval, certify, pi_interval
from ballquot.model import TorsionWitness
from ballquot.words import (
    G10_ORDER,
    Presentation,
    Word,
    condition_relators,
    g10,
    gamma,
    parse_word,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_COSETS = 10**6
DEFAULT_SEARCH_BUDGET = 50_000_000
GAMMA_SEARCH_ORDER = ("v", "u", "j", "b")
GAMMA_ORDER_CONSTRAINTS = {"b": 3, "u": 4, "v": 8, "j": 12}
SURVEY_TARGETS = ("a4", "frob21", "a5", "psl27")

_OVERFLOW_MESSAGE = "coset enumeration has defined more than"


class CosetOverflowError(RuntimeError):
    """Coset enumeration defined more cosets than permitted."""

    limit: int

    def __init__(self, limit: int):
        super().__init__(f"Coset enumeration exceeded {limit} cosets")
        self.limit = limit


class SearchBudgetExhausted(RuntimeError):
    """An epimorphism search ran out of its candidate budget."""

    budget: int

    def __init__(self, budget: int):
        super().__init__(
            f"Epimorphism search exhausted its budget of {budget} candidates"
        )
        self.budget = budget


class DeadlineExceeded(RuntimeError):
    """A long computation passed its deadline."""


def _check_deadline(deadline: float | None) -> None:
    if deadline is not None and time.monotonic() > deadline:
        _error = "Computation passed its deadline"
        raise DeadlineExceeded(_error)


#
# Abelian invariants.
#


def abelian_invariants(
    rows: Iterable[Mapping[int, int]],
    columns: int,
    deadline: float | None = None,
) -> list[int]:
    """
    The invariants of Z^columns modulo the given relation rows: the
    torsion coefficients above 1 in increasing order followed by one 0 per
    free factor. Unit pivots are eliminated sparsely before the remaining
    matrix is handed to a Smith normal form.
    """
    live: dict[int, dict[int, int]] = {}
    by_column: dict[int, set[int]] = {c: set() for c in range(columns)}
    for k, row in enumerate(rows):
        clean = {c: e for c, e in row.items() if e != 0}
        if clean:
            live[k] = clean
            for c in clean:
                by_column[c].add(k)

    removed_columns: set[int] = set()
    progress = True
    while progress:
        progress = False
        for k in sorted(live, key=lambda r: len(live[r])):
            _check_deadline(deadline)
            row = live.get(k)
            if row is None:
                continue
            units = [c for c, e in row.items() if abs(e) == 1]
            if not units:
                continue
            pivot = min(units, key=lambda c: len(by_column[c]))
            sign = row[pivot]
            del live[k]
            for c in row:
                by_column[c].discard(k)
            for other in list(by_column[pivot]):
                target_row = live[other]
                factor = target_row[pivot] * sign
                for c, e in row.items():
                    value = target_row.get(c, 0) - factor * e
                    if value == 0:
                        if c in target_row:
                            del target_row[c]
                            by_column[c].discard(other)
                    else:
                        if c not in target_row:
                            by_column[c].add(other)
                        target_row[c] = value
                if not target_row:
                    del live[other]
            removed_columns.add(pivot)
            by_column[pivot] = set()
            progress = True

    remaining = [c for c in range(columns) if c not in removed_columns]
    if not remaining:
        return []
    if not live:
        return [0] * len(remaining)

    position = {c: i for i, c in enumerate(remaining)}
    dense = [[0] * len(remaining) for _ in live]
    for i, row in enumerate(live.values()):
        for c, e in row.items():
            dense[i][position[c]] = e
    log.debug(
        "abelian invariants: %d x %d after unit elimination",
        len(dense),
        len(remaining),
    )
    snf = smith_normal_form(Matrix(dense), domain=ZZ)
    diagonal = [
        abs(int(snf[i, i])) for i in range(min(snf.rows, snf.cols))
    ]
    nonzero = [d for d in diagonal if d != 0]
    torsion = sorted(d for d in nonzero if d > 1)
    return torsion + [0] * (len(remaining) - len(nonzero))


def abelianization(p: Presentation) -> list[int]:
    return abelian_invariants(p.exponent_rows(), p.generator_count)


def abelian_quotient_count(invariants: Sequence[int], prime: int) -> int:
    """The number of normal subgroups with quotient Z/prime."""
    rank = sum(1 for d in invariants if d == 0 or d % prime == 0)
    return (prime**rank - 1) // (prime - 1)


#
# Coset tables.
#


class CosetTable:
    """
    A complete coset table. Row c lists the cosets c.x0, c.x0^-1, c.x1, ...
    with coset 0 the subgroup itself.
    """

    _generator_count: int
    _rows: list[list[int]]

    def __init__(self, generator_count: int, rows: Sequence[Sequence[int]]):
        width = 2 * generator_count
        for c, row in enumerate(rows):
            if len(row) != width:
                _error = f"Coset {c} has {len(row)} entries, expected {width}"
                raise ValueError(_error)
            for g in range(generator_count):
                forward = row[2 * g]
                if not 0 <= forward < len(rows):
                    _error = f"Coset {c} maps outside the table"
                    raise ValueError(_error)
                if rows[forward][2 * g + 1] != c:
                    _error = (
                        f"Coset {c}: columns {2 * g} and "
                        f"{2 * g + 1} are not inverse"
                    )
                    raise ValueError(_error)
        self._generator_count = generator_count
        self._rows = [list(r) for r in rows]

    @property
    def index(self) -> int:
        return len(self._rows)

    @property
    def generator_count(self) -> int:
        return self._generator_count

    @property
    def rows(self) -> list[list[int]]:
        return self._rows

    def act(self, coset: int, g: int, sign: int) -> int:
        return self._rows[coset][2 * g + (0 if sign > 0 else 1)]

    def trace(self, coset: int, w: Word) -> int:
        for g, e in w.expanded():
            coset = self.act(coset, g, e)
        return coset

    def permutations(self) -> list[PermArray]:
        """The action of each generator on cosets, x acting after c."""
        return [
            np.array([row[2 * g] for row in self._rows], dtype=PERM_DTYPE)
            for g in range(self._generator_count)
        ]


def todd_coxeter(
    p: Presentation,
    subgroup: Sequence[Word] = (),
    max_cosets: int = DEFAULT_MAX_COSETS,
) -> CosetTable:
    fp, gens = p.to_sympy()
    ys = [w.to_sympy(gens) for w in subgroup]
    try:
        table = coset_enumeration_r(fp, ys, max_cosets=max_cosets)
    except ValueError as e:
        if _OVERFLOW_MESSAGE in str(e):
            raise CosetOverflowError(max_cosets) from e
        raise
    table.compress()
    table.standardize()
    log.debug("coset enumeration: index %d", len(table.table))
    return CosetTable(p.generator_count, table.table)


def regular_representation(
    p: Presentation, max_cosets: int = DEFAULT_MAX_COSETS
) -> PermGroup:
    """A finite presented group acting on itself, one generator per name."""
    table = todd_coxeter(p, (), max_cosets)
    return PermGroup("regular", table.index, table.permutations())


@lru_cache(maxsize=1)
def g10_regular() -> PermGroup:
    rep = regular_representation(g10())
    if rep.degree != G10_ORDER:
        _error = f"The reflection group has order {rep.degree}, not {G10_ORDER}"
        raise ArithmeticError(_error)
    return rep


#
# Homomorphisms to permutation groups.
#


def word_image(w: Word, images: Sequence[PermArray], degree: int) -> PermArray:
    current = identity(degree)
    for g, e in w.letters:
        step = images[g] if e > 0 else inverse(images[g])
        for _ in range(abs(e)):
            current = step[current]
    return current


def derive_witness_orders(
    witnesses: Iterable[TorsionWitness],
) -> list[TorsionWitness]:
    """
    Fill in missing orders. Words in j, u, v are evaluated in the regular
    representation of the reflection group, which embeds in the lattice.
    """
    out = []
    for w in witnesses:
        if w.order is not None:
            out.append(w)
            continue
        try:
            word = parse_word(w.word, g10().names)
        except ValueError:
            _error = (
                f"Torsion witness {w.label} has no "
                "order and is not a word in j, u, v"
            )
            raise ValueError(_error) from None
        rep = g10_regular()
        order = element_order(word_image(word, rep.generators, rep.degree))
        log.debug("witness %s: derived order %d", w.label, order)
        out.append(TorsionWitness(w.label, w.word, order, w.local_group))
    return out


class FiniteQuotientMap:
    """An assignment of target elements to the generators of a presentation."""

    _presentation: Presentation
    _target: PermGroup
    _images: tuple[PermArray, ...]
    _image_group: PermGroup | None

    def __init__(
        self,
        presentation: Presentation,
        target_group: PermGroup,
        images: Sequence[PermArray],
    ):
        if len(images) != presentation.generator_count:
            _error = (
                f"Expected {presentation.generator_count} "
                f"images, received {len(images)}"
            )
            raise ValueError(_error)
        for x in images:
            if len(x) != target_group.degree:
                _error = (
                    f"Image of degree {len(x)} in a target "
                    f"of degree {target_group.degree}"
                )
                raise ValueError(_error)
        self._presentation = presentation
        self._target = target_group
        self._images = tuple(np.asarray(x, dtype=PERM_DTYPE) for x in images)
        self._image_group = None

    @property
    def presentation(self) -> Presentation:
        return self._presentation

    @property
    def target(self) -> PermGroup:
        return self._target

    @property
    def images(self) -> tuple[PermArray, ...]:
        return self._images

    def image_of(self, name: str) -> PermArray:
        return self._images[self._presentation.index(name)]

    def evaluate(self, w: Word) -> PermArray:
        return word_image(w, self._images, self._target.degree)

    def evaluate_text(self, text: str) -> PermArray:
        return self.evaluate(self._presentation.word(text))

    def failing_relators(self) -> list[Word]:
        return [
            r
            for r in self._presentation.relators
            if not is_identity(self.evaluate(r))
        ]

    def is_homomorphism(self) -> bool:
        return not self.failing_relators()

    def image_group(self) -> PermGroup:
        if self._image_group is None:
            self._image_group = PermGroup(
                f"image in {self._target.name}",
                self._target.degree,
                self._images,
            )
        return self._image_group

    def image_order(self) -> int:
        return self.image_group().order()

    def is_surjective(self) -> bool:
        return self.image_order() == self._target.order()

    def to_json(self) -> dict[str, Any]:
        return {
            "target": self._target.name,
            "images": {
                n: cycle_notation(x)
                for n, x in zip(self._presentation.names, self._images)
            },
        }

    @staticmethod
    def from_json(
        presentation: Presentation, data: Mapping[str, Any]
    ) -> "FiniteQuotientMap":
        group = target(str(data["target"]))
        images = data["images"]
        return FiniteQuotientMap(
            presentation,
            group,
            [
                parse_cycle_notation(str(images[n]), group.degree)
                for n in presentation.names
            ],
        )

    def __repr__(self) -> str:
        return (
            f"FiniteQuotientMap({self._target.name}, "
            f"index={self.image_order()})"
        )


def _relator_holds(
    w: Word,
    fixed: Mapping[int, PermArray],
    batch_generator: int,
    batch: PermArray,
) -> np.ndarray[Any, Any]:
    """Evaluate a relator with each row of `batch` as one generator."""
    rows, degree = batch.shape
    batch_inverse = np.argsort(batch, axis=1)
    points = np.arange(degree, dtype=np.intp)
    current = np.broadcast_to(points, (rows, degree)).copy()
    for g, e in w.letters:
        if g == batch_generator:
            step = batch if e > 0 else batch_inverse
            for _ in range(abs(e)):
                current = np.take_along_axis(step, current, axis=1).astype(
                    np.intp
                )
        else:
            fixed_step = fixed[g] if e > 0 else inverse(fixed[g])
            for _ in range(abs(e)):
                current = fixed_step[current].astype(np.intp)
    result: np.ndarray[Any, Any] = np.all(current == points, axis=1)
    return result


def _power_orders(p: Presentation) -> dict[int, int]:
    """Exponents n of relators of the form x^n."""
    out: dict[int, int] = {}
    for r in p.relators:
        if len(r.letters) == 1:
            g, e = r.letters[0]
            out[g] = gcd(out.get(g, 0), abs(e))
    return out


class Canonicalizer:
    """
    Canonical keys for tuples of target elements up to automorphisms of the
    target: the leading element is moved to the least element of its class,
    and the rest are minimized over that element's centralizer.
    """

    _gens: tuple[PermArray, ...]
    _leading: dict[bytes, tuple[bytes, PermArray]]
    _stabilizers: dict[bytes, PermArray]

    def __init__(self, target_group: PermGroup):
        self._gens = automorphism_generators(target_group)
        self._leading = {}
        self._stabilizers = {}

    def _lead(self, first: PermArray) -> tuple[bytes, PermArray]:
        key = first.tobytes()
        cached = self._leading.get(key)
        if cached is None:
            transversal = conjugacy_transversal(first, self._gens)
            rep = min(transversal)
            cached = (rep, transversal[rep])
            self._leading[key] = cached
        return cached

    def _stabilizer(self, rep: bytes) -> PermArray:
        cached = self._stabilizers.get(rep)
        if cached is None:
            p = np.frombuffer(rep, dtype=PERM_DTYPE).copy()
            cached = conjugation_stabilizer(p, self._gens).astype(np.intp)
            self._stabilizers[rep] = cached
        return cached

    def key(self, images: Sequence[PermArray]) -> bytes:
        rep, a = self._lead(images[0])
        if len(images) == 1:
            return rep
        a_inv = inverse(a)
        moved = [a[x[a_inv]].astype(np.intp) for x in images[1:]]
        stabilizer = self._stabilizer(rep)
        stabilizer_inverse = np.argsort(stabilizer, axis=1)
        blocks = [
            np.take_along_axis(stabilizer, x[stabilizer_inverse], axis=1)
            for x in moved
        ]
        keys = np.concatenate(blocks, axis=1)
        best = np.lexsort(keys.T[::-1])[0]
        return rep + keys[best].astype(PERM_DTYPE).tobytes()


class _Search:
    _presentation: Presentation
    _target: PermGroup
    _order: list[int]
    _candidates: list[PermArray]
    _relators_at: list[list[Word]]
    _budget: int
    _spent: int
    _canonical: Canonicalizer
    _found: dict[bytes, FiniteQuotientMap]

    def __init__(
        self,
        presentation: Presentation,
        target_group: PermGroup,
        order_constraints: Mapping[str, int],
        search_order: Sequence[str],
        budget: int,
    ):
        self._presentation = presentation
        self._target = target_group
        self._order = [presentation.index(n) for n in search_order]
        if sorted(self._order) != list(range(presentation.generator_count)):
            _error = (
                f"Search order {list(search_order)} "
                "must list every generator once"
            )
            raise ValueError(_error)

        elements = target_group.elements()
        orders = target_group.element_orders()
        divisors = _power_orders(presentation)
        self._candidates = []
        for g in self._order:
            mask = np.ones(len(elements), dtype=bool)
            name = presentation.names[g]
            if name in order_constraints:
                mask &= orders == order_constraints[name]
            if g in divisors:
                mask &= divisors[g] % orders == 0
            self._candidates.append(elements[mask])

        position = {g: k for k, g in enumerate(self._order)}
        self._relators_at = [[] for _ in self._order]
        for r in presentation.relators:
            depth = max(position[g] for g in r.generators_used())
            self._relators_at[depth].append(r)

        self._candidates[0] = class_representatives(
            self._candidates[0], automorphism_generators(target_group)
        )
        self._budget = budget
        self._spent = 0
        self._canonical = Canonicalizer(target_group)
        self._found = {}

    def _filter(
        self, depth: int, assigned: Mapping[int, PermArray]
    ) -> PermArray:
        candidates = self._candidates[depth]
        g = self._order[depth]
        for r in self._relators_at[depth]:
            if len(candidates) == 0:
                break
            self._spent += len(candidates)
            if self._spent > self._budget:
                raise SearchBudgetExhausted(self._budget)
            candidates = candidates[_relator_holds(r, assigned, g, candidates)]
        return candidates

    def _visit(self, depth: int, assigned: dict[int, PermArray]) -> None:
        g = self._order[depth]
        for x in self._filter(depth, assigned):
            assigned[g] = x
            if depth + 1 < len(self._order):
                self._visit(depth + 1, assigned)
                continue
            images = [assigned[k] for k in range(len(self._order))]
            m = FiniteQuotientMap(self._presentation, self._target, images)
            if not m.is_surjective():
                continue
            key = self._canonical.key([images[k] for k in self._order])
            if key not in self._found:
                self._found[key] = m
        assigned.pop(g, None)

    def run(self) -> list[FiniteQuotientMap]:
        if self._presentation.generator_count == 0:
            return []
        self._visit(0, {})
        log.info(
            "search onto %s: %d classes after %d candidate checks",
            self._target.name,
            len(self._found),
            self._spent,
        )
        results = [self._found[k] for k in sorted(self._found)]
        for m in results:
            if not m.is_homomorphism():
                _error = (
                    "Search produced a map violating "
                    f"{m.failing_relators()}"
                )
                raise ArithmeticError(_error)
        return results


def find_epimorphisms(
    p: Presentation,
    target_group: PermGroup,
    order_constraints: Mapping[str, int] | None = None,
    search_order: Sequence[str] | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> list[FiniteQuotientMap]:
    """
    All epimorphisms from the presented group onto `target_group`, one per
    class under automorphisms of the target, in a canonical order.
    Generators constrained to an order only map to elements of exactly that
    order; generators x with a relator x^n map to elements of order dividing n.
    """
    search = _Search(
        p,
        target_group,
        order_constraints or {},
        search_order or p.names,
        budget,
    )
    return search.run()


def find_gamma_epimorphisms(
    target_group: PermGroup,
    variant: str = "presentation",
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> list[FiniteQuotientMap]:
    return find_epimorphisms(
        gamma(variant),
        target_group,
        GAMMA_ORDER_CONSTRAINTS,
        GAMMA_SEARCH_ORDER,
        budget,
    )


def equivalent_maps(a: FiniteQuotientMap, b: FiniteQuotientMap) -> bool:
    """Whether two maps to the same target differ by an automorphism of it."""
    if a.target.name != b.target.name:
        return False
    if a.presentation.names != b.presentation.names:
        return False
    canonical = Canonicalizer(a.target)
    return canonical.key(a.images) == canonical.key(b.images)


#
# Checks on finite quotients.
#


class TorsionCheck:
    """Witnesses whose image order differs from their order."""

    _failures: tuple[tuple[str, int, int], ...]

    def __init__(self, failures: Iterable[tuple[str, int, int]]):
        self._failures = tuple(failures)

    @property
    def failures(self) -> tuple[tuple[str, int, int], ...]:
        """(label, expected order, image order) triples."""
        return self._failures

    @property
    def torsion_free(self) -> bool:
        return not self._failures

    def to_json(self) -> dict[str, Any]:
        return {
            "torsionFree": self.torsion_free,
            "failures": [
                {"label": label, "order": expected, "imageOrder": got}
                for label, expected, got in self._failures
            ],
        }


def torsion_free_kernel(
    m: FiniteQuotientMap, witnesses: Iterable[TorsionWitness]
) -> TorsionCheck:
    """
    The kernel is torsion-free when every torsion witness keeps its order
    in the quotient.
    """
    entries = list(witnesses)
    if not entries:
        _error = "At least one torsion witness is required"
        raise ValueError(_error)
    failures = []
    for w in entries:
        if w.order is None:
            _error = f"Torsion witness {w.label} has no order"
            raise ValueError(_error)
        word = parse_word(w.word, m.presentation.names)
        got = element_order(m.evaluate(word))
        if got != w.order:
            failures.append((w.label, w.order, got))
    return TorsionCheck(failures)


class HurwitzCheck:
    _reflection_group: bool
    _relations: bool
    _torsion: TorsionCheck

    def __init__(
        self, reflection_group: bool, relations: bool, torsion: TorsionCheck
    ):
        self._reflection_group = reflection_group
        self._relations = relations
        self._torsion = torsion

    @property
    def reflection_group(self) -> bool:
        """j, u, v generate a faithful copy of the reflection group."""
        return self._reflection_group

    @property
    def relations(self) -> bool:
        return self._relations

    @property
    def torsion(self) -> TorsionCheck:
        return self._torsion

    @property
    def passed(self) -> bool:
        return (
            self._reflection_group
            and self._relations
            and self._torsion.torsion_free
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "reflectionGroup": self._reflection_group,
            "relations": self._relations,
            "torsion": self._torsion.to_json(),
            "passed": self.passed,
        }


def hurwitz_ball_group_check(
    images: Mapping[str, PermArray],
    witnesses: Iterable[TorsionWitness],
    variant: str = "presentation",
) -> HurwitzCheck:
    """
    Check that images of b, j, u, v in a finite permutation group define a
    quotient of the lattice with torsion-free kernel.
    """
    try:
        b, j, u, v = (np.asarray(images[n], dtype=PERM_DTYPE) for n in "bjuv")
    except KeyError as e:
        _error = f"Missing image for generator {e}"
        raise ValueError(_error) from None
    degree = len(b)

    reflection = g10()
    sub = FiniteQuotientMap(
        reflection, PermGroup("check", degree, []), [j, u, v]
    )
    reflection_ok = sub.is_homomorphism() and sub.image_order() == G10_ORDER

    lattice = gamma(variant)
    full = FiniteQuotientMap(
        lattice, PermGroup("check", degree, []), [b, j, u, v]
    )
    relations_ok = is_identity(full.evaluate_text("b^3")) and all(
        is_identity(full.evaluate_text(r)) for r in condition_relators(variant)
    )
    return HurwitzCheck(
        reflection_ok, relations_ok, torsion_free_kernel(full, witnesses)
    )


def check_map(
    m: FiniteQuotientMap,
    witnesses: Iterable[TorsionWitness],
    variant: str = "presentation",
) -> HurwitzCheck:
    return hurwitz_ball_group_check(
        {n: m.image_of(n) for n in "bjuv"}, witnesses, variant
    )


class CoverInvariants:
    _index: int
    _euler: Fraction
    _volume: RealInterval

    def __init__(self, index: int, euler: Fraction, volume: RealInterval):
        self._index = index
        self._euler = euler
        self._volume = volume

    @property
    def index(self) -> int:
        return self._index

    @property
    def euler(self) -> Fraction:
        return self._euler

    @property
    def volume(self) -> RealInterval:
        return self._volume

    @property
    def integral(self) -> bool:
        return self._euler.denominator == 1

    @property
    def holomorphic_euler_characteristic(self) -> Fraction:
        return self._euler / 3

    @property
    def canonical_self_intersection(self) -> Fraction:
        return 3 * self._euler

    def to_json(self) -> dict[str, Any]:
        return {
            "index": self._index,
            "euler": str(self._euler),
            "volume": [float(self._volume.lo), float(self._volume.hi)],
            "chiO": str(self.holomorphic_euler_characteristic),
            "K2": str(self.canonical_self_intersection),
        }


def cover_invariants(
    m: FiniteQuotientMap, eps: float = 1e-9
) -> CoverInvariants:
    """The ball quotient by the kernel: index, Euler number and volume."""
    index = m.image_order()
    euler = Fraction(index, G10_ORDER)
    volume = certify(
        lambda bits: (8 * pi_interval(bits) ** 2 / 3 * euler).rounded(bits),
        Fraction(eps),
        "cover volume",
    )
    return CoverInvariants(index, euler, volume)


class CoverRelation:
    _is_cover: bool
    _degree: int | None

    def __init__(self, is_cover: bool, degree: int | None):
        self._is_cover = is_cover
        self._degree = degree

    @property
    def is_cover(self) -> bool:
        return self._is_cover

    @property
    def degree(self) -> int | None:
        return self._degree

    def to_json(self) -> dict[str, Any]:
        return {"isCover": self._is_cover, "degree": self._degree}


def regular_cover_relation(
    upper: FiniteQuotientMap, lower: FiniteQuotientMap
) -> CoverRelation:
    """
    Whether the kernel of `upper` lies in the kernel of `lower`. That holds
    exactly when the pairs of images generate a group no larger than the
    image of `upper`, in which case the cover has degree |upper|/|lower|.
    """
    if upper.presentation.names != lower.presentation.names:
        _error = "Maps must be defined on the same generators"
        raise ValueError(_error)
    d_upper = upper.target.degree
    d_lower = lower.target.degree
    pairs = [
        np.concatenate([x, y + d_upper]).astype(PERM_DTYPE)
        for x, y in zip(upper.images, lower.images)
    ]
    diagonal = PermGroup("diagonal", d_upper + d_lower, pairs)
    n_upper = upper.image_order()
    if diagonal.order() != n_upper:
        return CoverRelation(False, None)
    return CoverRelation(True, n_upper // lower.image_order())


def composed_map(
    m: FiniteQuotientMap,
    projection: Callable[[PermArray], PermArray],
    target_group: PermGroup,
) -> FiniteQuotientMap:
    """The map m followed by a homomorphism given on target elements."""
    return FiniteQuotientMap(
        m.presentation, target_group, [projection(x) for x in m.images]
    )


def coset_table_of_quotient(m: FiniteQuotientMap) -> CosetTable:
    """The coset table of the kernel of m: cosets are elements of the image."""
    elements = m.image_group().elements().astype(np.intp)
    index = {
        row.astype(PERM_DTYPE).tobytes(): k for k, row in enumerate(elements)
    }
    columns = []
    for x in m.images:
        for step in (x, inverse(x)):
            moved = step[elements].astype(PERM_DTYPE)
            columns.append([index[row.tobytes()] for row in moved])
    rows = [list(r) for r in zip(*columns)]
    return CosetTable(m.presentation.generator_count, rows)


class SchreierData:
    """
    Spanning tree data for rewriting relators on the cosets of a subgroup.
    Schreier generators are the coset-generator pairs not on the tree.
    """

    _table: CosetTable
    _generators: dict[tuple[int, int], int]

    def __init__(self, table: CosetTable):
        self._table = table
        tree: set[tuple[int, int]] = set()
        seen = {0}
        frontier = [0]
        while frontier:
            fresh = []
            for c in frontier:
                for g in range(table.generator_count):
                    for sign in (1, -1):
                        d = table.act(c, g, sign)
                        if d in seen:
                            continue
                        seen.add(d)
                        fresh.append(d)
                        tree.add((c, g) if sign > 0 else (d, g))
            frontier = fresh
        self._generators = {}
        for c in range(table.index):
            for g in range(table.generator_count):
                if (c, g) not in tree:
                    self._generators[(c, g)] = len(self._generators)

    @property
    def generator_count(self) -> int:
        return len(self._generators)

    @property
    def generators(self) -> dict[tuple[int, int], int]:
        return self._generators

    def rewrite(self, coset: int, w: Word) -> list[tuple[int, int]]:
        """The relator w read from `coset` as a word in Schreier generators."""
        out = []
        for g, e in w.expanded():
            if e > 0:
                s = self._generators.get((coset, g))
                if s is not None:
                    out.append((s, 1))
                coset = self._table.act(coset, g, 1)
            else:
                before = self._table.act(coset, g, -1)
                s = self._generators.get((before, g))
                if s is not None:
                    out.append((s, -1))
                coset = before
        return out


def reidemeister_schreier(p: Presentation, table: CosetTable) -> Presentation:
    """A presentation of the subgroup whose cosets `table` enumerates."""
    data = SchreierData(table)
    names = [f"s{k}" for k in range(data.generator_count)]
    relators = [
        Word(data.rewrite(c, r))
        for c in range(table.index)
        for r in p.relators
    ]
    return Presentation(names, relators)


def subgroup_abelian_invariants(
    p: Presentation,
    table: CosetTable,
    deadline: float | None = None,
) -> list[int]:
    """
    Abelian invariants of a finite-index subgroup, accumulating exponent
    sums of the rewritten relators without building words.
    """
    data = SchreierData(table)
    log.info(
        "subgroup of index %d: %d Schreier generators, %d relators",
        table.index,
        data.generator_count,
        table.index * len(p.relators),
    )

    def rows() -> Iterable[dict[int, int]]:
        for c in range(table.index):
            _check_deadline(deadline)
            for r in p.relators:
                row: dict[int, int] = {}
                for s, e in data.rewrite(c, r):
                    row[s] = row.get(s, 0) + e
                yield row

    return abelian_invariants(rows(), data.generator_count, deadline)


def kernel_abelian_invariants(
    m: FiniteQuotientMap, timeout: float | None = None
) -> list[int]:
    deadline = None if timeout is None else time.monotonic() + timeout
    return subgroup_abelian_invariants(
        m.presentation, coset_table_of_quotient(m), deadline
    )


#
# Surface invariants.
#


class HodgeData:
    """
    Numerical invariants of a smooth compact ball quotient surface from its
    first Betti number, Euler number and geometric genus.
    """

    _irregularity: int
    _euler: int
    _geometric_genus: int

    def __init__(self, first_betti: int, euler: int, geometric_genus: int):
        if first_betti % 2 != 0:
            _error = (
                f"First Betti number {first_betti} "
                "of a Kähler surface must be even"
            )
            raise ValueError(_error)
        self._irregularity = first_betti // 2
        self._euler = euler
        self._geometric_genus = geometric_genus

    @staticmethod
    def from_ball_quotient(first_betti: int, euler: int) -> "HodgeData":
        """p_g from Noether's formula with c1^2 = 3e, so chi = e/3."""
        if euler % 3 != 0:
            _error = f"Euler number {euler} of a ball quotient is not 3 chi"
            raise ValueError(_error)
        q = first_betti // 2
        return HodgeData(first_betti, euler, euler // 3 - 1 + q)

    @property
    def irregularity(self) -> int:
        return self._irregularity

    @property
    def euler(self) -> int:
        return self._euler

    @property
    def geometric_genus(self) -> int:
        return self._geometric_genus

    @property
    def h11(self) -> int:
        """From e = 2 - 4q + 2 p_g + h11."""
        return (
            self._euler
            - 2
            + 4 * self._irregularity
            - 2 * self._geometric_genus
        )

    @property
    def holomorphic_euler_characteristic(self) -> int:
        return 1 - self._irregularity + self._geometric_genus

    def consistent(self) -> bool:
        """Noether's formula with c1^2 = 3 c2 and a non-negative h11."""
        chi = self.holomorphic_euler_characteristic
        return self.h11 >= 0 and 12 * chi == 4 * self._euler

    def to_json(self) -> dict[str, Any]:
        return {
            "q": self._irregularity,
            "pg": self._geometric_genus,
            "h11": self.h11,
            "e": self._euler,
            "chiO": self.holomorphic_euler_characteristic,
            "consistent": self.consistent(),
        }


#
# Small quotients.
#


class SurveyEntry:
    _target: str
    _order: int
    _classes: int
    _torsion_free: int | None

    def __init__(
        self,
        target_name: str,
        order: int,
        classes: int,
        torsion_free: int | None,
    ):
        self._target = target_name
        self._order = order
        self._classes = classes
        self._torsion_free = torsion_free

    @property
    def target(self) -> str:
        return self._target

    @property
    def order(self) -> int:
        return self._order

    @property
    def classes(self) -> int:
        return self._classes

    @property
    def torsion_free(self) -> int | None:
        """Classes with torsion-free kernel, where witnesses were supplied."""
        return self._torsion_free

    def to_json(self) -> dict[str, Any]:
        return {
            "target": self._target,
            "order": self._order,
            "classes": self._classes,
            "torsionFree": self._torsion_free,
        }


def quotient_survey(
    p: Presentation,
    max_index: int,
    witnesses: Sequence[TorsionWitness] = (),
    targets: Sequence[str] = SURVEY_TARGETS,
    search_order: Sequence[str] | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> list[SurveyEntry]:
    """
    Count normal subgroups with small quotients: cyclic quotients of prime
    order from the abelian invariants, and the named nonabelian targets of
    order at most `max_index` by search.
    """
    entries = []
    invariants = abelianization(p)
    for prime in primerange(2, max_index + 1):
        count = abelian_quotient_count(invariants, int(prime))
        if count > 0:
            entries.append(SurveyEntry(f"z{prime}", int(prime), count, None))

    for name in targets:
        group = target(name)
        order = group.order()
        if order > max_index:
            continue
        maps = find_epimorphisms(p, group, None, search_order, budget)
        torsion_free = None
        if witnesses:
            torsion_free = sum(
                1
                for m in maps
                if torsion_free_kernel(m, witnesses).torsion_free
            )
        entries.append(SurveyEntry(name, order, len(maps), torsion_free))
    return entries
