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

import mpmath
import pytest

from ballquot.dmorbifold import (
    ORBIFOLD_STRATA,
    ORBIFOLD_TUPLE,
    BallTuple,
    Stability,
    Stratification,
    Stratum,
    aut_bound,
    check_int,
    check_sigma_int,
    classify_configuration,
    curve_weights,
    derive_stratification,
    hurwitz_bound,
    invariant_conversions,
    minimal_volume,
    orbifold_euler,
    six_lines_data,
    solve_triangle,
    triangle_orbifold,
    triangle_stratification,
    volume_constant,
    volume_lower_bound,
    xiao_bound,
)

mpmath.mp.dps = 30


def mp(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


class TestBallTuple:
    def test_parse_0(self) -> None:
        t = BallTuple.parse("(2,2,2,7,11)/12")
        assert t == ORBIFOLD_TUPLE
        assert t.dimension == 2
        assert BallTuple.parse("1/6, 1/6, 1/6, 7/12, 11/12") == t

    def test_parse_1(self) -> None:
        with pytest.raises(ValueError, match="Unparseable"):
            BallTuple.parse("(1,2,x)/3")

    def test_invalid_0(self) -> None:
        with pytest.raises(ValueError, match="at least 4"):
            BallTuple([Fraction(2, 3)] * 3)
        with pytest.raises(ValueError, match="sum to 2"):
            BallTuple([Fraction(1, 4)] * 4)
        with pytest.raises(ValueError, match=r"lie in \(0, 1\)"):
            BallTuple([1, Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)])


class TestIntegrality:
    def test_int_0(self) -> None:
        result = check_int(ORBIFOLD_TUPLE)
        assert not result.satisfied
        assert (1, 2, Fraction(3, 2)) in result.witnesses

    def test_sigma_int_0(self) -> None:
        result = check_sigma_int(ORBIFOLD_TUPLE)
        assert result.satisfied
        assert result.witnesses == ()

    def test_sigma_int_1(self) -> None:
        t = BallTuple.parse("(1,1,1,1,2)/3")
        assert check_int(t).satisfied
        assert check_sigma_int(t).satisfied

    def test_sigma_int_2(self) -> None:
        t = BallTuple.parse("(2,2,2,3,7)/8")
        result = check_sigma_int(t)
        assert not result.satisfied
        assert result.to_json()["witnesses"][0]["pair"] == [1, 5]

    def test_sigma_int_3(self) -> None:
        rng = random.Random(24)
        sampled = 0
        while sampled < 10**4:
            d = rng.randint(2, 24)
            n = rng.randint(4, 6)
            head = [rng.randint(1, d - 1) for _ in range(n - 1)]
            last = 2 * d - sum(head)
            if not 1 <= last <= d - 1:
                continue
            t = BallTuple(Fraction(a, d) for a in [*head, last])
            sampled += 1
            strict = check_int(t)
            weak = check_sigma_int(t)
            assert set(weak.witnesses) <= set(strict.witnesses)
            if strict.satisfied:
                assert weak.satisfied


class TestStability:
    def test_stability_0(self) -> None:
        t = ORBIFOLD_TUPLE
        assert classify_configuration(t, "abcde") == Stability.STABLE
        assert classify_configuration(t, "abcdd") == Stability.UNSTABLE

    def test_stability_1(self) -> None:
        t = BallTuple([Fraction(1, 2)] * 4)
        stability = classify_configuration(t, "aabc")
        assert stability == Stability.STRICTLY_SEMISTABLE

    def test_stability_2(self) -> None:
        with pytest.raises(ValueError, match="Expected 5 positions"):
            classify_configuration(ORBIFOLD_TUPLE, "abc")


class TestTriangle:
    def test_solve_0(self) -> None:
        t = solve_triangle(2, 3, 7)
        assert t == BallTuple.parse("(29,13,43,83)/84")
        triangle = triangle_orbifold(t)
        assert triangle.r == (2, 3, 7)
        assert triangle.valid

    def test_sphere_0(self) -> None:
        assert orbifold_euler(triangle_stratification([2, 3, 7])) == Fraction(
            -1, 42
        )

    def test_triangle_0(self) -> None:
        with pytest.raises(ValueError, match="4-entry"):
            triangle_orbifold(ORBIFOLD_TUPLE)

    def test_triangle_1(self) -> None:
        t = BallTuple.parse("(1,1,1,1)/2")
        with pytest.raises(ValueError, match="Pole"):
            triangle_orbifold(t)

    def test_triangle_2(self) -> None:
        t = BallTuple(
            [Fraction(2, 5), Fraction(1, 5), Fraction(1, 2), Fraction(9, 10)]
        )
        triangle = triangle_orbifold(t)
        assert not triangle.valid

    def test_solve_1(self) -> None:
        with pytest.raises(ValueError, match="positive"):
            solve_triangle(2, 0, 7)


class TestStrata:
    def test_orbifold_euler_0(self) -> None:
        assert orbifold_euler(ORBIFOLD_STRATA) == Fraction(1, 288)
        assert ORBIFOLD_STRATA.stratum("z1").weight == 288

    def test_curve_weights_0(self) -> None:
        assert curve_weights(ORBIFOLD_TUPLE) == {"C1": 4, "C2": 3}
        with pytest.raises(NotImplementedError):
            curve_weights(BallTuple.parse("(1,1,1,1,2)/3"))

    def test_derived_0(self) -> None:
        derived = derive_stratification()
        assert set(derived.strata) == set(ORBIFOLD_STRATA.strata)
        assert orbifold_euler(derived) == Fraction(1, 288)

    def test_refined_0(self) -> None:
        parts = [Stratum("C1a", 0, 4), Stratum("C1b", -1, 4)]
        refined = ORBIFOLD_STRATA.refined("C1", parts)
        assert orbifold_euler(refined) == Fraction(1, 288)
        with pytest.raises(ValueError, match="keep weight"):
            ORBIFOLD_STRATA.refined(
                "C1", [Stratum("x", 0, 3), Stratum("y", -1, 4)]
            )
        with pytest.raises(ValueError, match="total Euler"):
            ORBIFOLD_STRATA.refined("C1", [Stratum("x", 0, 4)])

    def test_stratification_0(self) -> None:
        with pytest.raises(ValueError, match="distinct"):
            Stratification([Stratum("a", 1, 1), Stratum("a", 1, 2)])
        with pytest.raises(ValueError, match="positive"):
            Stratum("a", 1, 0)
        with pytest.raises(KeyError):
            ORBIFOLD_STRATA.stratum("z9")


class TestSixLines:
    def test_lines_0(self) -> None:
        data = six_lines_data()
        assert len(data.lines) == 6
        orbits = data.line_orbits()
        assert sorted(orbits["C1"]) == [(1, 4), (2, 4), (3, 4)]
        assert sorted(orbits["C2"]) == [(1, 2), (1, 3), (2, 3)]

    def test_incidence_0(self) -> None:
        data = six_lines_data()
        assert data.incidence() == {"z1": 3, "z2": 3, "z3": 2, "z4": 1, "z5": 0}

    def test_orbits_0(self) -> None:
        data = six_lines_data()
        for lifts in data.points.values():
            assert len(data.orbit(lifts[0])) == len(lifts)


class TestInvariants:
    def test_conversions_0(self) -> None:
        rng = random.Random(288)
        for _ in range(1000):
            e = 3 * rng.randint(1, 10**6)
            inv = invariant_conversions(e)
            assert inv.chi_o == e // 3
            assert inv.k2 == 3 * e
            assert inv.k2 == 9 * inv.chi_o
            value = 8 * mpmath.pi**2 / 3 * e
            assert mp(inv.volume.lo) <= value <= mp(inv.volume.hi)

    def test_bounds_0(self) -> None:
        assert hurwitz_bound(3) == 168
        assert aut_bound(63) == 18144
        assert aut_bound(252) == 288 * 252
        with pytest.raises(ValueError, match="genus"):
            hurwitz_bound(1)

    def test_xiao_0(self) -> None:
        assert xiao_bound(1, True) == 1764
        assert xiao_bound(1, True, ball=True) == 1728
        assert xiao_bound(2, False) == 576

    def test_volume_0(self) -> None:
        lower = volume_lower_bound().midpoint
        assert abs(lower - Fraction("0.005077")) < Fraction(1, 10**6)
        minimal = minimal_volume().midpoint
        assert abs(minimal - Fraction("0.0913852")) < Fraction(1, 10**6)
        assert volume_constant(Fraction(1, 1944)) == 5184
        assert volume_constant(Fraction(1, 108)) == 288
        with pytest.raises(ValueError, match="positive"):
            volume_constant(0)
