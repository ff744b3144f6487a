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

import random
from fractions import Fraction

import numpy as np
import pytest

from ballquot.finitegrp import (
    PermGroup,
    a4_to_z3,
    alternating_a4,
    cyclic_group,
    element_order,
    is_identity,
    perm,
    target,
)
from ballquot.fpgroup import (
    CosetOverflowError,
    CosetTable,
    FiniteQuotientMap,
    HodgeData,
    SchreierData,
    SearchBudgetExhausted,
    abelian_invariants,
    abelian_quotient_count,
    abelianization,
    check_map,
    composed_map,
    coset_table_of_quotient,
    cover_invariants,
    derive_witness_orders,
    equivalent_maps,
    find_epimorphisms,
    find_gamma_epimorphisms,
    g10_regular,
    hurwitz_ball_group_check,
    kernel_abelian_invariants,
    quotient_survey,
    regular_cover_relation,
    regular_representation,
    reidemeister_schreier,
    todd_coxeter,
    torsion_free_kernel,
    word_image,
)
from ballquot.model import TorsionWitness
from ballquot.words import Presentation, Word, g10, gamma
from ballquot.xml import load_torsion_witnesses

# The (2,3,3) triangle group, isomorphic to A4.
TETRAHEDRAL = Presentation.parse(["x", "y"], ["x^2", "y^3", "(x y)^3"])

TETRAHEDRAL_WITNESSES = [
    TorsionWitness("x", "x", 2),
    TorsionWitness("y", "y", 3),
]


@pytest.fixture(scope="module")
def onto_a4() -> FiniteQuotientMap:
    maps = find_epimorphisms(TETRAHEDRAL, target("a4"))
    assert len(maps) == 1
    return maps[0]


@pytest.fixture(scope="module")
def onto_z3() -> FiniteQuotientMap:
    maps = find_epimorphisms(TETRAHEDRAL, target("z3"))
    assert len(maps) == 1
    return maps[0]


@pytest.fixture(scope="module")
def witnesses() -> list[TorsionWitness]:
    return derive_witness_orders(load_torsion_witnesses())


@pytest.fixture(scope="module")
def s1_maps() -> list[FiniteQuotientMap]:
    return find_gamma_epimorphisms(target("psu33xz3"))


class TestAbelian:
    def test_abelian_0(self) -> None:
        assert abelian_invariants([{0: 2}, {1: 3}], 2) == [6]

    def test_abelian_1(self) -> None:
        assert abelian_invariants([{0: 1, 1: -1}], 2) == [0]

    def test_abelian_2(self) -> None:
        assert abelian_invariants([], 3) == [0, 0, 0]
        assert abelian_invariants([{0: 1}], 1) == []

    def test_abelian_3(self) -> None:
        assert abelian_invariants([{0: 4, 1: 6}], 2) == [2, 0]

    def test_abelian_4(self) -> None:
        assert abelian_invariants([{0: 0}, {1: 5, 0: 0}], 2) == [5, 0]

    def test_abelian_gamma_0(self) -> None:
        assert abelianization(gamma()) == [3]
        assert abelianization(gamma("proposition")) == [3, 3]

    def test_abelian_g10_0(self) -> None:
        assert abelianization(g10()) == [12]

    def test_abelian_count_0(self) -> None:
        assert abelian_quotient_count([3], 3) == 1
        assert abelian_quotient_count([3], 2) == 0
        assert abelian_quotient_count([0, 0], 2) == 3
        assert abelian_quotient_count([2, 0], 2) == 3


class TestCosets:
    def test_table_0(self) -> None:
        table = CosetTable(1, [[1, 1], [0, 0]])
        assert table.index == 2
        assert table.act(0, 0, 1) == 1
        assert table.act(1, 0, -1) == 0

    def test_table_error_0(self) -> None:
        with pytest.raises(ValueError, match="expected 2"):
            CosetTable(1, [[0]])

    def test_table_error_1(self) -> None:
        with pytest.raises(ValueError, match="not inverse"):
            CosetTable(1, [[1, 1], [1, 0]])

    def test_table_error_2(self) -> None:
        with pytest.raises(ValueError, match="outside the table"):
            CosetTable(1, [[2, 0]])

    def test_todd_coxeter_0(self) -> None:
        table = todd_coxeter(TETRAHEDRAL)
        assert table.index == 12
        assert len(table.permutations()) == 2

    def test_todd_coxeter_1(self) -> None:
        y = TETRAHEDRAL.word("y")
        table = todd_coxeter(TETRAHEDRAL, [y])
        assert table.index == 4
        assert table.trace(0, y) == 0
        assert table.trace(0, TETRAHEDRAL.word("x y x^-1")) != 0

    def test_todd_coxeter_g10_0(self) -> None:
        assert todd_coxeter(g10()).index == 288
        assert g10_regular().degree == 288

    def test_todd_coxeter_overflow_0(self) -> None:
        with pytest.raises(CosetOverflowError, match="2000") as e:
            todd_coxeter(gamma(), (), 2000)
        assert e.value.limit == 2000

    def test_todd_coxeter_invariance_0(self) -> None:
        rng = random.Random(288)
        for p, n in ((TETRAHEDRAL, 12), (g10(), 288)):
            count = len(p.relators)
            for _ in range(3):
                order = rng.sample(range(count), count)
                q = p.permuted_relators(order)
                assert todd_coxeter(q).index == n

                k = p.generator_count
                relabel = rng.sample(range(k), k)
                names = [""] * k
                for g, h in enumerate(relabel):
                    names[h] = p.names[g]
                r = Presentation(
                    names,
                    [
                        Word((relabel[g], e) for g, e in w.letters)
                        for w in q.relators
                    ],
                )
                assert todd_coxeter(r).index == n
                assert abelianization(r) == abelianization(p)

    def test_tietze_invariance_0(self) -> None:
        a = Word.generator(0)
        b = Word.generator(1)
        for p in (TETRAHEDRAL, g10(), gamma(), gamma("proposition")):
            expected = abelianization(p)
            q = p.with_generator("t", a * b * a.inverse())
            assert abelianization(q) == expected
            first = p.relators[0]
            consequence = b * first * b.inverse() * p.relators[-1]
            assert abelianization(p.with_relators([consequence])) == expected
        assert todd_coxeter(g10().with_generator("t", a * b)).index == 288

    def test_regular_0(self) -> None:
        g = regular_representation(TETRAHEDRAL)
        assert g.order() == 12
        assert g.is_transitive()

    def test_word_image_0(self) -> None:
        images = [perm([1, 0, 2]), perm([1, 2, 0])]
        w = TETRAHEDRAL.word("x y^-1")
        assert list(word_image(w, images, 3)) == [0, 2, 1]
        assert is_identity(word_image(w * w.inverse(), images, 3))


class TestWitnesses:
    def test_witnesses_0(self) -> None:
        out = derive_witness_orders([TorsionWitness("u", "u", None)])
        assert out[0].order == 4

    def test_witnesses_1(self) -> None:
        out = derive_witness_orders([TorsionWitness("b", "b", 3)])
        assert out[0].order == 3

    def test_witnesses_2(self) -> None:
        with pytest.raises(ValueError, match="not a word in j, u, v"):
            derive_witness_orders([TorsionWitness("b", "b", None)])

    def test_witnesses_shipped_0(
        self, witnesses: list[TorsionWitness]
    ) -> None:
        orders = {w.label: w.order for w in witnesses}
        assert orders["b"] == 3
        assert orders["j"] in (6, 12)
        assert orders["u"] == 4
        assert orders["v"] in (4, 8)
        assert all(w.order is not None for w in witnesses)


class TestEpimorphisms:
    def test_epimorphisms_0(self, onto_a4: FiniteQuotientMap) -> None:
        assert onto_a4.is_homomorphism()
        assert onto_a4.is_surjective()
        assert onto_a4.image_order() == 12
        assert element_order(onto_a4.image_of("x")) == 2

    def test_epimorphisms_1(self, onto_z3: FiniteQuotientMap) -> None:
        assert is_identity(onto_z3.image_of("x"))
        assert onto_z3.image_order() == 3

    def test_epimorphisms_2(self) -> None:
        assert find_epimorphisms(TETRAHEDRAL, target("a5")) == []

    def test_epimorphisms_budget_0(self) -> None:
        with pytest.raises(SearchBudgetExhausted, match="budget of 1"):
            find_epimorphisms(TETRAHEDRAL, target("a4"), budget=1)

    def test_epimorphisms_order_0(self) -> None:
        with pytest.raises(ValueError, match="every generator once"):
            find_epimorphisms(TETRAHEDRAL, target("a4"), search_order=["x"])

    def test_epimorphisms_constraints_0(self) -> None:
        maps = find_epimorphisms(TETRAHEDRAL, target("a4"), {"y": 2})
        assert maps == []

    def test_epimorphisms_json_0(self, onto_a4: FiniteQuotientMap) -> None:
        data = onto_a4.to_json()
        assert data["target"] == "a4"
        again = FiniteQuotientMap.from_json(TETRAHEDRAL, data)
        for x, y in zip(again.images, onto_a4.images):
            assert np.array_equal(x, y)

    def test_epimorphisms_error_0(self) -> None:
        with pytest.raises(ValueError, match="Expected 2 images"):
            FiniteQuotientMap(TETRAHEDRAL, alternating_a4(), [perm([0, 1])])
        with pytest.raises(ValueError, match="Image of degree 3"):
            FiniteQuotientMap(
                TETRAHEDRAL,
                alternating_a4(),
                [perm([0, 1, 2]), perm([0, 1, 2])],
            )

    def test_epimorphisms_failing_0(self) -> None:
        m = FiniteQuotientMap(
            TETRAHEDRAL,
            alternating_a4(),
            [perm([1, 2, 0, 3]), perm([1, 2, 0, 3])],
        )
        assert not m.is_homomorphism()
        assert TETRAHEDRAL.word("x^2") in m.failing_relators()

    def test_epimorphisms_equivalent_0(
        self, onto_a4: FiniteQuotientMap
    ) -> None:
        outer = alternating_a4().outer[0]
        moved = FiniteQuotientMap(
            TETRAHEDRAL,
            onto_a4.target,
            [outer[x[np.argsort(outer)]] for x in onto_a4.images],
        )
        assert moved.is_homomorphism()
        assert equivalent_maps(onto_a4, moved)

    def test_epimorphisms_equivalent_1(
        self, onto_a4: FiniteQuotientMap, onto_z3: FiniteQuotientMap
    ) -> None:
        assert not equivalent_maps(onto_a4, onto_z3)
        projected = composed_map(onto_a4, a4_to_z3, cyclic_group(3))
        assert projected.is_homomorphism()
        assert equivalent_maps(projected, onto_z3)


class TestQuotients:
    def test_cover_0(
        self, onto_a4: FiniteQuotientMap, onto_z3: FiniteQuotientMap
    ) -> None:
        relation = regular_cover_relation(onto_a4, onto_z3)
        assert relation.is_cover
        assert relation.degree == 4
        reverse = regular_cover_relation(onto_z3, onto_a4)
        assert not reverse.is_cover
        assert reverse.degree is None

    def test_cover_1(self, onto_a4: FiniteQuotientMap) -> None:
        other = FiniteQuotientMap(
            g10(), PermGroup("t", 1, []), [perm([0])] * 3
        )
        with pytest.raises(ValueError, match="same generators"):
            regular_cover_relation(onto_a4, other)

    def test_torsion_0(self, onto_a4: FiniteQuotientMap) -> None:
        check = torsion_free_kernel(onto_a4, TETRAHEDRAL_WITNESSES)
        assert check.torsion_free
        assert check.to_json()["failures"] == []

    def test_torsion_1(self, onto_z3: FiniteQuotientMap) -> None:
        check = torsion_free_kernel(onto_z3, TETRAHEDRAL_WITNESSES)
        assert not check.torsion_free
        assert check.failures == (("x", 2, 1),)

    def test_torsion_2(self, onto_a4: FiniteQuotientMap) -> None:
        with pytest.raises(ValueError, match="At least one"):
            torsion_free_kernel(onto_a4, [])
        with pytest.raises(ValueError, match="has no order"):
            torsion_free_kernel(onto_a4, [TorsionWitness("x", "x", None)])

    def test_schreier_0(self, onto_z3: FiniteQuotientMap) -> None:
        table = coset_table_of_quotient(onto_z3)
        assert table.index == 3
        assert SchreierData(table).generator_count == 4
        assert kernel_abelian_invariants(onto_z3) == [2, 2]

    def test_schreier_1(self, onto_a4: FiniteQuotientMap) -> None:
        table = coset_table_of_quotient(onto_a4)
        assert table.index == 12
        kernel = reidemeister_schreier(TETRAHEDRAL, table)
        assert kernel.generator_count == 13
        assert abelianization(kernel) == []

    def test_survey_0(self) -> None:
        entries = quotient_survey(TETRAHEDRAL, 12, targets=("a4", "a5"))
        assert [e.target for e in entries] == ["z3", "a4"]
        assert [e.classes for e in entries] == [1, 1]
        assert entries[1].torsion_free is None

    def test_survey_1(self) -> None:
        entries = quotient_survey(
            TETRAHEDRAL, 12, TETRAHEDRAL_WITNESSES, targets=("a4",)
        )
        assert entries[-1].torsion_free == 1
        assert entries[-1].to_json()["order"] == 12


class TestSurface:
    def test_s1_0(
        self,
        s1_maps: list[FiniteQuotientMap],
        witnesses: list[TorsionWitness],
    ) -> None:
        passing = [m for m in s1_maps if check_map(m, witnesses).passed]
        assert passing
        m = passing[0]
        assert m.image_order() == 18144
        invariants = cover_invariants(m)
        assert invariants.index == 18144
        assert invariants.euler == 63
        assert invariants.integral
        assert invariants.holomorphic_euler_characteristic == 21
        assert invariants.canonical_self_intersection == 189

    def test_s1_1(self, s1_maps: list[FiniteQuotientMap]) -> None:
        for m in s1_maps:
            assert m.is_homomorphism()
            assert m.is_surjective()
            for a in s1_maps:
                if a is not m:
                    assert not equivalent_maps(a, m)

    def test_s1_2(
        self,
        s1_maps: list[FiniteQuotientMap],
        witnesses: list[TorsionWitness],
    ) -> None:
        m = next(m for m in s1_maps if check_map(m, witnesses).passed)
        check = hurwitz_ball_group_check(
            {n: m.image_of(n) for n in "bjuv"}, witnesses
        )
        assert check.reflection_group
        assert check.relations
        assert check.torsion.torsion_free
        assert check.to_json()["passed"] == check.passed

    def test_s1_3(self, witnesses: list[TorsionWitness]) -> None:
        with pytest.raises(ValueError, match="Missing image"):
            hurwitz_ball_group_check({"b": perm([0])}, witnesses)

    def test_cover_volume_0(self, onto_z3: FiniteQuotientMap) -> None:
        invariants = cover_invariants(onto_z3)
        assert invariants.euler == Fraction(3, 288)
        assert not invariants.integral
        lo = float(invariants.volume.lo)
        assert abs(lo - 8 * 9.8696044 / 3 * 3 / 288) < 1e-6

    def test_hodge_0(self) -> None:
        h = HodgeData(14, 63, 27)
        assert h.irregularity == 7
        assert h.h11 == 35
        assert h.holomorphic_euler_characteristic == 21
        assert h.consistent()
        assert h.to_json()["h11"] == 35

    def test_hodge_1(self) -> None:
        assert not HodgeData(14, 63, 20).consistent()
        with pytest.raises(ValueError, match="must be even"):
            HodgeData(3, 63, 27)

    def test_hodge_2(self) -> None:
        h = HodgeData.from_ball_quotient(14, 63)
        assert (h.irregularity, h.geometric_genus, h.h11) == (7, 27, 35)
        assert h.consistent()
        plane = HodgeData.from_ball_quotient(0, 3)
        assert (plane.geometric_genus, plane.h11) == (0, 1)
        with pytest.raises(ValueError, match="not 3 chi"):
            HodgeData.from_ball_quotient(0, 64)
