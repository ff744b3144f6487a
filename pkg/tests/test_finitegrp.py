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
from itertools import product

import numpy as np
import pytest

from ballquot.finitegrp import (
    GF9_ALL,
    GF9_I,
    GF9_ONE,
    GF9_ZERO,
    IDENTITY_FORM,
    PSU33_ORDER,
    ConstructionError,
    GF9Elem,
    PermGroup,
    a4_to_z3,
    alternating_a4,
    alternating_a5,
    automorphism_generators,
    build_psu33,
    class_representatives,
    compose,
    conjugacy_orbit,
    conjugacy_transversal,
    conjugate,
    conjugation_stabilizer,
    cycle_notation,
    cyclic_group,
    diagonal_form,
    direct_product,
    element_order,
    frobenius21,
    hermitian_product,
    identity,
    inverse,
    is_identity,
    isotropic_points,
    normalize,
    parse_cycle_notation,
    perm,
    project_factor,
    projective_points,
    psl27,
    psu3_order,
    su33_center,
    target,
    target_names,
)


@pytest.fixture(scope="module")
def psu33() -> PermGroup:
    return build_psu33()


class TestPerm:
    def test_perm_0(self) -> None:
        with pytest.raises(ValueError, match="Not a permutation"):
            perm([0, 0, 1])

    def test_perm_compose_0(self) -> None:
        p = perm([1, 2, 0])
        q = perm([0, 2, 1])
        assert list(compose(p, q)) == [2, 1, 0]
        assert is_identity(compose(p, inverse(p)))

    def test_perm_order_0(self) -> None:
        assert element_order(perm([1, 2, 0, 4, 3])) == 6
        assert element_order(identity(4)) == 1

    def test_perm_cycles_0(self) -> None:
        p = parse_cycle_notation("(0 1 2)(3 4)", 5)
        assert list(p) == [1, 2, 0, 4, 3]
        assert cycle_notation(p) == "(0 1 2)(3 4)"
        assert cycle_notation(identity(3)) == "()"
        assert is_identity(parse_cycle_notation("()", 3))

    def test_perm_conjugate_0(self) -> None:
        p = perm([1, 2, 0, 3])
        a = perm([3, 1, 2, 0])
        c = conjugate(p, a)
        assert np.array_equal(compose(a, c), compose(p, a))


class TestPermGroup:
    def test_group_degree_0(self) -> None:
        with pytest.raises(ValueError, match="permutation of degree 3"):
            PermGroup("bad", 4, [[1, 2, 0]])

    def test_group_small_0(self) -> None:
        assert cyclic_group(3).order() == 3
        assert alternating_a4().order() == 12
        assert alternating_a5().order() == 60
        assert psl27().order() == 168

    def test_group_small_1(self) -> None:
        groups = [
            cyclic_group(3),
            cyclic_group(5),
            alternating_a4(),
            alternating_a5(),
            psl27(),
        ]
        for g in groups:
            assert g.order() == len(g.elements())
            assert all(g.order() % int(k) == 0 for k in g.element_orders())

    def test_group_classes_0(self) -> None:
        assert alternating_a5().conjugacy_class_sizes() == [1, 12, 12, 15, 20]
        assert psl27().conjugacy_class_sizes() == [1, 21, 24, 24, 42, 56]

    def test_group_elements_0(self) -> None:
        g = alternating_a4()
        xs = g.elements()
        assert len(xs) == 12
        assert is_identity(xs[0])
        assert g.index_of(identity(4)) == 0
        assert g.index_of(xs[7]) == 7

    def test_group_element_orders_0(self) -> None:
        g = alternating_a4()
        orders = sorted(int(x) for x in g.element_orders())
        assert orders == [1, 2, 2, 2] + [3] * 8
        assert len(g.elements_of_order(3)) == 8

    def test_group_properties_0(self) -> None:
        assert cyclic_group(5).is_abelian()
        assert not alternating_a4().is_abelian()
        assert psl27().is_transitive()
        assert alternating_a4().contains(perm([1, 0, 3, 2]))
        assert not alternating_a4().contains(perm([1, 0, 2, 3]))

    def test_group_product_0(self) -> None:
        g = direct_product("z3xa4", cyclic_group(3), alternating_a4())
        assert g.degree == 7
        assert g.order() == 36
        x = g.generators[-1]
        assert np.array_equal(
            project_factor(x, 3, 4), alternating_a4().generators[-1]
        )
        assert is_identity(project_factor(x, 0, 3))

    def test_group_lagrange_0(self, psu33: PermGroup) -> None:
        xs = psu33.elements()
        rng = random.Random(6048)
        for _ in range(1000):
            x = xs[rng.randrange(len(xs))]
            y = xs[rng.randrange(len(xs))]
            xy = compose(x, y)
            assert psu33.contains(xy)
            assert PSU33_ORDER % element_order(xy) == 0

    def test_group_closure_0(self, psu33: PermGroup) -> None:
        groups = [
            frobenius21(psu33),
            direct_product("z3xz4", cyclic_group(3), cyclic_group(4)),
            direct_product("z4xz2", cyclic_group(4), cyclic_group(2)),
            direct_product("z3xa4", cyclic_group(3), alternating_a4()),
            psu33,
        ]
        orders = [21, 12, 8, 36, PSU33_ORDER]
        for g, n in zip(groups, orders, strict=True):
            assert g.order() == n
            assert len(g.elements()) == n
        assert groups[1].is_abelian()
        assert {int(k) for k in groups[2].element_orders()} == {1, 2, 4}


class TestQuotientA4:
    def test_a4_z3_0(self) -> None:
        xs = alternating_a4().elements()
        for p, q in product(xs, repeat=2):
            lhs = a4_to_z3(compose(p, q))
            rhs = compose(a4_to_z3(p), a4_to_z3(q))
            assert np.array_equal(lhs, rhs)

    def test_a4_z3_1(self) -> None:
        xs = alternating_a4().elements()
        kernel = [p for p in xs if is_identity(a4_to_z3(p))]
        assert len(kernel) == 4
        z3 = cyclic_group(3)
        assert all(z3.contains(a4_to_z3(p)) for p in xs)


class TestGF9:
    def test_gf9_0(self) -> None:
        assert GF9_I * GF9_I == -GF9_ONE
        assert GF9_I.frob() == -GF9_I
        assert len(set(GF9_ALL)) == 9

    def test_gf9_inverse_0(self) -> None:
        for x in GF9_ALL:
            if not x.is_zero():
                assert x * x.inverse() == GF9_ONE
                assert x / x == GF9_ONE

    def test_gf9_inverse_1(self) -> None:
        with pytest.raises(ZeroDivisionError, match="not invertible"):
            GF9_ZERO.inverse()

    def test_gf9_frobenius_0(self) -> None:
        for x, y in product(GF9_ALL, repeat=2):
            assert (x * y).frob() == x.frob() * y.frob()
            assert (x + y).frob() == x.frob() + y.frob()
            assert x.frob() == x * x * x

    def test_gf9_points_0(self) -> None:
        assert len(projective_points()) == 91
        assert len(isotropic_points(IDENTITY_FORM)) == 28

    def test_gf9_points_1(self) -> None:
        with pytest.raises(ValueError, match="degenerate"):
            isotropic_points(diagonal_form(1, 1, 0))
        z = GF9_ZERO
        skew = ((GF9_I, z, z), (z, GF9_ONE, z), (z, z, GF9_ONE))
        with pytest.raises(ValueError, match="not hermitian"):
            isotropic_points(skew)

    def test_gf9_normalize_0(self) -> None:
        x = (GF9_ZERO, GF9Elem(2), GF9_I)
        assert normalize(x) == (GF9_ZERO, GF9_ONE, GF9Elem(0, 2))
        with pytest.raises(ValueError, match="zero vector"):
            normalize((GF9_ZERO, GF9_ZERO, GF9_ZERO))

    def test_gf9_hermitian_0(self) -> None:
        for x in isotropic_points(IDENTITY_FORM):
            assert hermitian_product(IDENTITY_FORM, x, x).is_zero()

    def test_gf9_center_0(self) -> None:
        assert su33_center() == [GF9_ONE]


class TestPSU33:
    def test_psu33_order_0(self) -> None:
        assert psu3_order(3) == PSU33_ORDER
        assert psu3_order(2) == 72
        assert psu3_order(5) == 126000

    def test_psu33_0(self, psu33: PermGroup) -> None:
        assert psu33.degree == 28
        assert psu33.order() == PSU33_ORDER
        assert psu33.is_transitive()
        assert len(psu33.outer) == 1

    def test_psu33_outer_0(self, psu33: PermGroup) -> None:
        frob = psu33.outer[0]
        assert element_order(frob) == 2
        assert not psu33.contains(frob)
        for g in psu33.generators:
            assert psu33.contains(conjugate(g, frob))

    def test_psu33_frobenius21_0(self, psu33: PermGroup) -> None:
        f = frobenius21(psu33)
        assert f.order() == 21
        assert not f.is_abelian()
        assert all(psu33.contains(g) for g in f.generators)

    def test_psu33_frobenius21_1(self) -> None:
        with pytest.raises(ConstructionError, match="no elements of order 7"):
            frobenius21(cyclic_group(3))

    def test_psu33_targets_0(self) -> None:
        names = list(target_names())
        assert "psu33xa4" in names
        assert "frob21" in names
        assert target("a4") is target("a4")
        with pytest.raises(ValueError, match="Unknown target group"):
            target("m11")


class TestConjugation:
    def test_conjugation_orbit_0(self) -> None:
        g = alternating_a4()
        p = perm([1, 2, 0, 3])
        assert len(conjugacy_orbit(p, g.generators)) == 4

    def test_conjugation_transversal_0(self) -> None:
        g = alternating_a4()
        p = perm([1, 2, 0, 3])
        transversal = conjugacy_transversal(p, g.generators)
        assert len(transversal) == 4
        for key, a in transversal.items():
            assert conjugate(p, a).tobytes() == key

    def test_conjugation_stabilizer_0(self) -> None:
        g = alternating_a4()
        p = perm([1, 2, 0, 3])
        stab = conjugation_stabilizer(p, g.generators)
        assert len(stab) == 3
        for a in stab:
            assert np.array_equal(conjugate(p, a), p)

    def test_conjugation_representatives_0(self) -> None:
        z3 = cyclic_group(3)
        inner = class_representatives(z3.elements(), z3.generators)
        assert len(inner) == 3
        full = class_representatives(
            z3.elements(), automorphism_generators(z3)
        )
        assert len(full) == 2

    def test_conjugation_representatives_1(self) -> None:
        g = psl27()
        reps = class_representatives(g.elements(), g.generators)
        assert len(reps) == 6
