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

from fractions import Fraction
from itertools import product

import pytest

from ballquot.covolume import (
    TABLE1_DELTAS,
    TABLE1_PRINTED,
    TABLE2_PRINTED,
    BoundKind,
    CommClassData,
    DiscriminantBounds,
    EliminationCertificate,
    ExtensionScreen,
    FieldCatalog,
    Place,
    ScreenVerdict,
    SearchReport,
    SplitKind,
    Verdict,
    class_number_bound,
    direct_lower_bound,
    disc_upper_bound,
    division_algebra_check,
    field_bound_cascade,
    identify_rational,
    index_bound,
    minimal_volume_data,
    place_behaviour,
    prasad_euler_char,
    quadratic_disc_cap,
    rational_disc_cap,
    reproduce_table2,
    root_disc_cap,
    run_full_search,
    three_part,
)
from ballquot.interval import RealInterval
from ballquot.model import (
    DataError,
    DiscriminantBound,
    FieldDesc,
    FieldKind,
    UnsupportedFieldError,
)
from ballquot.xml import load_discriminant_bounds, load_fields

EPS = Fraction(1, 10**6)
CATALOG = FieldCatalog(load_fields())
BOUNDS = DiscriminantBounds(load_discriminant_bounds())


def near(x: RealInterval, printed: str, relative: Fraction) -> bool:
    value = Fraction(printed)
    slack = abs(value) * relative
    return x.lo - slack <= value <= x.hi + slack


@pytest.fixture(scope="module")
def search() -> SearchReport:
    return run_full_search(CATALOG, BOUNDS)


class TestTables:
    def test_table1_0(self) -> None:
        for n in (2, 3, 4, 5):
            value = disc_upper_bound(n, TABLE1_DELTAS[n], EPS)
            printed = TABLE1_PRINTED[n]
            assert abs(value.midpoint - printed) <= Fraction(5, 10**4), n

    def test_table1_1(self) -> None:
        value = disc_upper_bound(1, TABLE1_DELTAS[1], EPS)
        assert near(value, "6.64809", Fraction(2, 1000))

    def test_table1_2(self) -> None:
        with pytest.raises(ValueError, match="Degrees 1 to 5"):
            disc_upper_bound(6, Fraction(1, 2), EPS)

    def test_table2_0(self) -> None:
        assert reproduce_table2(BOUNDS) == dict(TABLE2_PRINTED)

    def test_class_number_bound_0(self) -> None:
        interval = RealInterval(Fraction(10), Fraction(10))
        assert class_number_bound(4, interval, BOUNDS) == 1
        small = RealInterval(Fraction(5), Fraction(5))
        assert class_number_bound(1, small, BOUNDS) == 3

    def test_three_part_0(self) -> None:
        assert three_part(1) == 1
        assert three_part(18) == 9
        assert three_part(7) == 1


class TestConstants:
    def test_caps_0(self) -> None:
        assert near(rational_disc_cap(EPS, 3), "2.8116", Fraction(2, 1000))
        assert near(quadratic_disc_cap(EPS), "4.1011", Fraction(2, 1000))
        assert near(root_disc_cap(3, 3, EPS), "5.214", Fraction(2, 1000))
        assert near(root_disc_cap(4, 1, EPS), "5.481", Fraction(2, 1000))
        assert near(root_disc_cap(5, 1, EPS), "5.965", Fraction(2, 1000))

    def test_direct_0(self) -> None:
        eps = Fraction(1, 10**9)
        for k, ell, n, printed in (
            (5, 125, 2, "0.00152"),
            (8, 256, 2, "0.00569"),
            (49, 16807, 3, "0.00642"),
            (81, 19683, 3, "0.00577"),
        ):
            value = direct_lower_bound(k, ell, n, 1, eps)
            assert near(value, printed, Fraction(2, 1000)), (k, ell)
            assert value.certainly_greater(Fraction(1, 864))

    def test_minimal_volume_0(self) -> None:
        data = minimal_volume_data(EPS)
        assert near(data["volume"], "0.0913852", Fraction(1, 10**5))
        assert data["b_at_pi2_over_108"] == 288
        assert data["b_at_pi2_over_1944"] == 5184

    def test_identify_0(self) -> None:
        x = RealInterval(Fraction(1, 96) - Fraction(1, 10**9), Fraction(1, 96))
        assert identify_rational(x) == Fraction(1, 96)
        with pytest.raises(ValueError, match="No fraction"):
            identify_rational(RealInterval(Fraction(1, 10**7)), 10)


class TestData:
    def test_bounds_0(self) -> None:
        b = DiscriminantBound(4, Fraction(3), "")
        with pytest.raises(DataError, match="Duplicate"):
            DiscriminantBounds([b, b])

    def test_bounds_1(self) -> None:
        with pytest.raises(DataError, match="decrease"):
            DiscriminantBounds(
                [
                    DiscriminantBound(4, Fraction(5), ""),
                    DiscriminantBound(6, Fraction(4), ""),
                ]
            )

    def test_bounds_2(self) -> None:
        assert BOUNDS.lookup(7).degree == 6
        with pytest.raises(DataError, match="No discriminant bound"):
            BOUNDS.lookup(1)

    def test_catalog_0(self) -> None:
        f = FieldDesc(
            "x", 2, 0, 1, 3, FieldKind.IMAGINARY_QUADRATIC, -3, subfields=["y"]
        )
        with pytest.raises(DataError, match="unknown subfield"):
            FieldCatalog([f])

    def test_catalog_1(self) -> None:
        with pytest.raises(DataError, match="Unknown field"):
            CATALOG["nonexistent"]
        with pytest.raises(DataError, match="No field of degree"):
            CATALOG.find(2, 2)

    def test_catalog_2(self) -> None:
        pairs = CATALOG.candidate_pairs(2, 17, 300)
        labels = [(k.label, ell.label) for k, ell in pairs]
        assert ("Q(sqrt3)", "Q(zeta12)") in labels
        assert all(ell.degree == 4 for _, ell in pairs)

    def test_catalog_3(self) -> None:
        cap = root_disc_cap(3, 3, EPS)
        screens = CATALOG.screen_extensions(3, cap.hi**3, cap.hi**6)
        verdicts = {s.field.label: s.verdict for s in screens}
        assert len(verdicts) == 12
        pairs = {
            (s.subfield.label, s.field.label)
            for s in screens
            if s.subfield is not None
        }
        assert pairs == {("cubic-49", "Q(zeta7)"), ("cubic-81", "Q(zeta9)")}
        assert verdicts["sextic-20627"] == ScreenVerdict.ABOVE_CAP
        assert verdicts["sextic-21168"] == ScreenVerdict.ABOVE_CAP
        rejected = set(verdicts) - {
            "Q(zeta7)",
            "Q(zeta9)",
            "sextic-20627",
            "sextic-21168",
        }
        assert len(rejected) == 8
        for label in rejected:
            assert verdicts[label] == ScreenVerdict.DISCRIMINANT, label

    def test_catalog_4(self) -> None:
        cubic = CATALOG["cubic-49"]
        sextic = FieldDesc("x", 6, 0, 3, 2401 * 5, FieldKind.TABULATED)
        catalog = FieldCatalog([cubic, sextic])
        (screen,) = catalog.screen_extensions(3, 150, 20000)
        assert screen.verdict == ScreenVerdict.NOT_AN_EXTENSION
        assert screen.subfield is None
        assert catalog.candidate_pairs(3, 150, 20000) == []

    def test_catalog_5(self) -> None:
        with pytest.raises(ValueError, match="exactly one subfield"):
            ExtensionScreen(CATALOG["Q(zeta7)"], ScreenVerdict.PAIR)

    def test_catalog_6(self) -> None:
        cap = root_disc_cap(3, 3, EPS)
        ks = CATALOG.totally_real(3, cap.hi**3)
        assert [k.label for k in ks] == ["cubic-49", "cubic-81"]


class TestCommClass:
    k = CATALOG["Q(sqrt3)"]
    ell = CATALOG["Q(zeta12)"]

    def test_principal_0(self) -> None:
        data = CommClassData(self.k, self.ell)
        value = prasad_euler_char(data, Fraction(1, 10**12))
        assert value.contains(Fraction(1, 96))
        assert index_bound(data) == 3

    def test_comm_class_0(self) -> None:
        with pytest.raises(ValueError, match="power of 3"):
            CommClassData(self.k, self.ell, (), 2)
        with pytest.raises(ValueError, match="not a quadratic extension"):
            CommClassData(self.ell, self.k)

    def test_places_0(self) -> None:
        p = Place("v13", 13, 13, split_in_l=True, iwahori=True)
        data = CommClassData(self.k, self.ell, [p], 1, {"v13": 3})
        assert data.e_double_prime("v13") == 1
        assert index_bound(data) == 9

    def test_places_1(self) -> None:
        with pytest.raises(ValueError, match="not a power"):
            Place("v", 2, 6)
        p = Place("v4", 2, 4, anisotropic=True)
        with pytest.raises(ValueError, match="exactly when q = 2"):
            CommClassData(self.k, self.ell, [p], 1, {"v4": 3})

    def test_places_2(self) -> None:
        eps = Fraction(1, 10**12)
        base = prasad_euler_char(CommClassData(self.k, self.ell), eps)
        v13 = Place("v13", 13, 13, split_in_l=True, iwahori=True)
        v5 = Place("v5", 5, 25)
        v2 = Place("v2", 2, 2, anisotropic=True)
        for e13, e5 in product((3, 9), (1, 2, 7)):
            e_prime = {"v13": e13, "v5": e5, "v2": 3}
            data = CommClassData(self.k, self.ell, [v13, v5, v2], 1, e_prime)
            assert data.e_prime_product() == 3 * e13 * e5
            value = prasad_euler_char(data, eps)
            assert value.contains(Fraction(3 * e13 * e5, 96))
            assert value.overlaps(base * data.e_prime_product())

    def test_places_3(self) -> None:
        places = [
            Place("v13", 13, 13, split_in_l=True, iwahori=True),
            Place("v5", 5, 25, iwahori=True),
            Place("v7", 7, 49, split_in_l=False),
            Place("v2", 2, 2, anisotropic=True),
        ]
        e_prime = {"v13": 3, "v5": 3, "v7": 1, "v2": 3}
        for mask, h3 in product(range(16), (1, 3, 9, 27)):
            chosen = [p for j, p in enumerate(places) if mask >> j & 1]
            factors = {p.label: e_prime[p.label] for p in chosen}
            data = CommClassData(self.k, self.ell, chosen, h3, factors)
            bound = index_bound(data)
            while bound % 3 == 0:
                bound //= 3
            assert bound == 1

    def test_monotone_0(self) -> None:
        eps = Fraction(1, 10**9)
        q = CATALOG["Q"]
        small = prasad_euler_char(CommClassData(q, CATALOG["Q(sqrt-3)"]), eps)
        large = prasad_euler_char(CommClassData(q, CATALOG["Q(i)"]), eps)
        assert large.certainly_greater(small.hi)
        for n, disc_k in ((1, 1), (2, 12), (3, 49)):
            previous = None
            for disc_l in range(disc_k**2, disc_k**2 + 400, 37):
                value = direct_lower_bound(disc_k, disc_l, n, 1, eps)
                if previous is not None:
                    assert value.certainly_greater(previous.hi)
                previous = value

    def test_behaviour_0(self) -> None:
        v2 = place_behaviour(self.k, self.ell, 2)
        assert v2.in_k == SplitKind.RAMIFIED
        assert v2.q == 2
        assert v2.in_l == SplitKind.INERT

    def test_behaviour_1(self) -> None:
        v13 = place_behaviour(self.k, self.ell, 13)
        assert v13.in_k == SplitKind.SPLIT
        assert v13.in_l == SplitKind.SPLIT
        v5 = place_behaviour(self.k, self.ell, 5)
        assert v5.in_k == SplitKind.INERT
        assert v5.q == 25

    def test_behaviour_2(self) -> None:
        with pytest.raises(UnsupportedFieldError):
            place_behaviour(CATALOG["Q"], self.ell, 2)

    def test_division_0(self) -> None:
        record = division_algebra_check(self.k, self.ell)
        assert record.min_split_q == 13
        assert record.degree_one


class TestCascade:
    def test_certificate_0(self) -> None:
        with pytest.raises(ValueError, match="does not lie below"):
            EliminationCertificate(
                1,
                None,
                BoundKind.RATIONAL_CAP,
                RealInterval(3, 4),
                Fraction(3),
                Verdict.ELIMINATED,
            )

    def test_cascade_0(self) -> None:
        (cert,) = field_bound_cascade(1, CATALOG, BOUNDS)
        assert cert.bound == BoundKind.RATIONAL_CAP
        assert cert.verdict == Verdict.ELIMINATED

    def test_cascade_1(self) -> None:
        (cert,) = field_bound_cascade(6, CATALOG, BOUNDS)
        assert cert.verdict == Verdict.DEFERRED
        assert cert.bound == BoundKind.DEGREE_DEFERRAL

    def test_cascade_2(self) -> None:
        ones = {n: 1 for n in TABLE2_PRINTED}
        for n in (2, 3, 4, 5):
            assert root_disc_cap(n, 1, EPS).hi < root_disc_cap(n, 3, EPS).lo
        survivors = set()
        for n in ones:
            for c in field_bound_cascade(n, CATALOG, BOUNDS, ones):
                assert c.verdict != Verdict.INDETERMINATE
                if c.candidate is not None and c.verdict == Verdict.SURVIVES:
                    survivors.add(c.candidate)
        assert survivors == {(12, 144)}

    def test_search_0(self, search: SearchReport) -> None:
        assert search.survivors == ((12, 144),)
        assert search.principal_exact == Fraction(1, 96)
        assert search.index == 3
        assert search.minimal_euler == Fraction(1, 288)
        assert search.alternatives() == {"1/288": True, "1/108": False}
        assert search.hermitian_form == "diag(1, 1, 1 - alpha)"

    def test_search_1(self, search: SearchReport) -> None:
        for c in search.certificates:
            assert c.verdict != Verdict.INDETERMINATE
            if c.candidate is not None and c.candidate != (12, 144):
                assert c.verdict == Verdict.ELIMINATED
        degrees = {c.degree for c in search.certificates}
        assert degrees == {1, 2, 3, 4, 5, 6}

    def test_search_2(self, search: SearchReport) -> None:
        data = search.to_json()
        assert data["survivors"] == [[12, 144]]
        assert data["constants"]["minimalEuler"] == "1/288"
        assert data["divisionAlgebra"]["degreeOne"]
