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
Deligne-Mostow ball tuples, the orbifold of the tuple (2,2,2,7,11)/12 on
the quotient of the plane by the symmetric group on three letters, and the
conversions between Euler numbers, volumes and automorphism bounds of ball
quotient surfaces.
"""

import logging
import re
from collections.abc import Iterable, Sequence
from enum import Enum
from fractions import Fraction
from itertools import combinations, permutations
from typing import Any

from ballquot.cyclotomic import OMEGA, ONE, ZERO, CycloElem
from ballquot.interval import Rational, RealInterval, certify, pi_interval

log = logging.getLogger(__name__)

HURWITZ_CONSTANT = 84
AUT_CONSTANT = 288
XIAO_RATIONAL_CONSTANT = 42 * 42
XIAO_BALL_CONSTANT = 1728
XIAO_CONSTANT = 288
# vol >= pi^2 / 1944, as a multiple of pi^2.
VOLUME_LOWER_BOUND = Fraction(1, 1944)
MINIMAL_VOLUME = Fraction(1, 108)
VOLUME_PER_EULER = Fraction(8, 3)


class BallTuple:
    """Weights in (0, 1) summing to 2."""

    _mu: tuple[Fraction, ...]

    def __init__(self, mu: Iterable[Rational]):
        values = tuple(Fraction(x) for x in mu)
        if len(values) < 4:
            _error = (
                "A ball tuple has at least 4 "
                f"entries (received {len(values)})"
            )
            raise ValueError(_error)
        for x in values:
            if not 0 < x < 1:
                _error = f"Ball tuple entries lie in (0, 1) (received {x})"
                raise ValueError(_error)
        if sum(values) != 2:
            _error = f"Ball tuple entries sum to 2 (received {sum(values)})"
            raise ValueError(_error)
        self._mu = values

    @staticmethod
    def parse(text: str) -> "BallTuple":
        """Either "(a,b,...)/d" or comma-separated fractions."""
        body = text.replace(" ", "")
        scaled = re.fullmatch(r"\(([-0-9,]+)\)/(\d+)", body)
        try:
            if scaled:
                d = int(scaled.group(2))
                return BallTuple(
                    Fraction(int(a), d) for a in scaled.group(1).split(",")
                )
            return BallTuple(Fraction(x) for x in body.split(","))
        except (ValueError, ZeroDivisionError) as e:
            _error = f"Unparseable ball tuple {text!r}: {e}"
            raise ValueError(_error) from None

    @property
    def mu(self) -> tuple[Fraction, ...]:
        return self._mu

    def __len__(self) -> int:
        return len(self._mu)

    @property
    def dimension(self) -> int:
        return len(self._mu) - 3

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BallTuple):
            return NotImplemented
        return self._mu == other.mu

    def __hash__(self) -> int:
        return hash(self._mu)

    def __repr__(self) -> str:
        return "BallTuple(" + ", ".join(str(x) for x in self._mu) + ")"


ORBIFOLD_TUPLE = BallTuple(Fraction(a, 12) for a in (2, 2, 2, 7, 11))


class IntegralityResult:
    """Failing pairs are reported with 1-based indices."""

    _satisfied: bool
    _witnesses: tuple[tuple[int, int, Fraction], ...]

    def __init__(self, witnesses: Iterable[tuple[int, int, Fraction]]):
        self._witnesses = tuple(witnesses)
        self._satisfied = not self._witnesses

    @property
    def satisfied(self) -> bool:
        return self._satisfied

    @property
    def witnesses(self) -> tuple[tuple[int, int, Fraction], ...]:
        return self._witnesses

    def to_json(self) -> dict[str, Any]:
        return {
            "satisfied": self._satisfied,
            "witnesses": [
                {"pair": [j, k], "value": str(v)} for j, k, v in self._witnesses
            ],
        }


def _pair_reciprocals(t: BallTuple) -> Iterable[tuple[int, int, Fraction]]:
    for j, k in combinations(range(len(t)), 2):
        s = t.mu[j] + t.mu[k]
        if s < 1:
            yield j, k, 1 / (1 - s)


def check_int(t: BallTuple) -> IntegralityResult:
    return IntegralityResult(
        (j + 1, k + 1, r)
        for j, k, r in _pair_reciprocals(t)
        if r.denominator != 1
    )


def check_sigma_int(t: BallTuple) -> IntegralityResult:
    """As check_int, but equal weights only need a half-integer."""
    failures = []
    for j, k, r in _pair_reciprocals(t):
        allowed = 2 * r if t.mu[j] == t.mu[k] else r
        if allowed.denominator != 1:
            failures.append((j + 1, k + 1, r))
    return IntegralityResult(failures)


class Stability(Enum):
    STABLE = "stable"
    STRICTLY_SEMISTABLE = "strictly-semistable"
    UNSTABLE = "unstable"


def classify_configuration(
    t: BallTuple, positions: Sequence[object]
) -> Stability:
    """
    Classify points on the projective line with weights t, where
    positions[j] names the location of point j and equal names coincide.
    """
    if len(positions) != len(t):
        _error = f"Expected {len(t)} positions, received {len(positions)}"
        raise ValueError(_error)
    totals: dict[object, Fraction] = {}
    for mu, z in zip(t.mu, positions):
        totals[z] = totals.get(z, Fraction(0)) + mu
    worst = max(totals.values())
    if worst < 1:
        return Stability.STABLE
    if worst == 1:
        return Stability.STRICTLY_SEMISTABLE
    return Stability.UNSTABLE


#
# Triangle orbifolds.
#


TRIANGLE_PAIRS = ((0, 1), (1, 2), (2, 0))


class TriangleOrbifold:
    _r: tuple[Fraction, Fraction, Fraction]
    _witnesses: tuple[tuple[int, int, Fraction], ...]

    def __init__(
        self,
        r: tuple[Fraction, Fraction, Fraction],
        witnesses: Iterable[tuple[int, int, Fraction]],
    ):
        self._r = r
        self._witnesses = tuple(witnesses)

    @property
    def r(self) -> tuple[Fraction, Fraction, Fraction]:
        return self._r

    @property
    def valid(self) -> bool:
        return not self._witnesses

    @property
    def witnesses(self) -> tuple[tuple[int, int, Fraction], ...]:
        return self._witnesses

    def to_json(self) -> dict[str, Any]:
        return {
            "r": [str(x) for x in self._r],
            "valid": self.valid,
            "witnesses": [
                {"pair": [j, k], "value": str(v)} for j, k, v in self._witnesses
            ],
        }


def triangle_orbifold(t: BallTuple) -> TriangleOrbifold:
    """
    The cone orders r_j = (1 - mu_j - mu_{j+1})^-1 for j = 1, 2, 3, with
    j + 1 read cyclically in {1, 2, 3}.
    """
    if len(t) != 4:
        _error = (
            "Triangle orbifolds come from "
            f"4-entry tuples (received {len(t)})"
        )
        raise ValueError(_error)
    rs = []
    failures = []
    for j, k in TRIANGLE_PAIRS:
        s = t.mu[j] + t.mu[k]
        if s == 1:
            _error = f"Pole: mu_{j + 1} + mu_{k + 1} = 1"
            raise ValueError(_error)
        r = 1 / (1 - s)
        rs.append(r)
        allowed = 2 * r if t.mu[j] == t.mu[k] else r
        if r <= 0 or allowed.denominator != 1:
            failures.append((j + 1, k + 1, r))
    return TriangleOrbifold((rs[0], rs[1], rs[2]), failures)


def solve_triangle(r1: Rational, r2: Rational, r3: Rational) -> BallTuple:
    """The 4-entry tuple whose triangle orbifold has cone orders r1, r2, r3."""
    rs = [Fraction(x) for x in (r1, r2, r3)]
    if any(r <= 0 for r in rs):
        _error = f"Cone orders must be positive (received {rs})"
        raise ValueError(_error)
    inv = [1 / r for r in rs]
    s = (3 - sum(inv)) / 2
    return BallTuple(
        [s - (1 - inv[1]), s - (1 - inv[2]), s - (1 - inv[0]), 2 - s]
    )


#
# Stratified Euler characteristics.
#


class Stratum:
    _label: str
    _chi: Fraction
    _weight: int

    def __init__(self, label: str, chi: Rational, weight: int):
        if weight < 1:
            _error = (
                f"Stratum {label}: weight must be "
                f"positive (received {weight})"
            )
            raise ValueError(_error)
        self._label = label
        self._chi = Fraction(chi)
        self._weight = weight

    @property
    def label(self) -> str:
        return self._label

    @property
    def chi(self) -> Fraction:
        return self._chi

    @property
    def weight(self) -> int:
        return self._weight

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Stratum):
            return NotImplemented
        return (self._label, self._chi, self._weight) == (
            other.label,
            other.chi,
            other.weight,
        )

    def __hash__(self) -> int:
        return hash((self._label, self._chi, self._weight))

    def __repr__(self) -> str:
        return f"Stratum({self._label}, chi={self._chi}, weight={self._weight})"


class Stratification:
    _strata: tuple[Stratum, ...]

    def __init__(self, strata: Iterable[Stratum]):
        self._strata = tuple(strata)
        labels = [s.label for s in self._strata]
        if len(set(labels)) != len(labels):
            _error = f"Stratum labels must be distinct: {labels}"
            raise ValueError(_error)

    @property
    def strata(self) -> tuple[Stratum, ...]:
        return self._strata

    def stratum(self, label: str) -> Stratum:
        for s in self._strata:
            if s.label == label:
                return s
        _error = f"No stratum {label!r}"
        raise KeyError(_error)

    def underlying_euler(self) -> Fraction:
        return sum((s.chi for s in self._strata), Fraction(0))

    def refined(self, label: str, parts: Sequence[Stratum]) -> "Stratification":
        """Replace one stratum by parts of the same weight."""
        old = self.stratum(label)
        if sum((p.chi for p in parts), Fraction(0)) != old.chi:
            _error = (
                f"Parts of {label} must have total "
                f"Euler characteristic {old.chi}"
            )
            raise ValueError(_error)
        if any(p.weight != old.weight for p in parts):
            _error = f"Parts of {label} must keep weight {old.weight}"
            raise ValueError(_error)
        out: list[Stratum] = []
        for s in self._strata:
            out.extend(parts if s.label == label else [s])
        return Stratification(out)

    def to_json(self) -> list[dict[str, Any]]:
        return [
            {"label": s.label, "chi": str(s.chi), "weight": s.weight}
            for s in self._strata
        ]


def orbifold_euler(s: Stratification) -> Fraction:
    return sum((x.chi / x.weight for x in s.strata), Fraction(0))


def triangle_stratification(r: Sequence[int]) -> Stratification:
    """A sphere with cone points of the given orders."""
    strata = [Stratum("open", 2 - len(r), 1)]
    strata.extend(Stratum(f"p{k + 1}", 1, int(x)) for k, x in enumerate(r))
    return Stratification(strata)


POINT_WEIGHTS = {"z1": 288, "z2": 24, "z3": 12, "z4": 8, "z5": 3}

POINT_LOCAL_GROUPS = {
    "z1": "G10",
    "z2": "G4",
    "z3": "Z/3 x Z/4",
    "z4": "Z/4 x Z/2",
    "z5": "Z/3",
}

ORBIFOLD_STRATA = Stratification(
    [
        Stratum("open", 0, 1),
        Stratum("C1", -1, 4),
        Stratum("C2", -1, 3),
        Stratum("z1", 1, 288),
        Stratum("z2", 1, 24),
        Stratum("z3", 1, 12),
        Stratum("z4", 1, 8),
        Stratum("z5", 1, 3),
    ]
)

# Euler number of the plane modulo the symmetric group on the coordinates.
QUOTIENT_PLANE_EULER = 3


def curve_weights(t: BallTuple) -> dict[str, int]:
    """
    Weights of the two branch curves: C1, the coordinate lines, from a pair
    of unequal weights; C2, the diagonal lines, from the equal pair, doubled
    by the symmetric group.
    """
    if t != ORBIFOLD_TUPLE:
        _error = f"Curve weights are only known for {ORBIFOLD_TUPLE}"
        raise NotImplementedError(_error)
    c1 = 1 / (1 - (t.mu[0] + t.mu[3]))
    c2 = 2 / (1 - (t.mu[0] + t.mu[1]))
    if c1.denominator != 1 or c2.denominator != 1:
        _error = f"Curve weights {c1}, {c2} are not integral"
        raise ArithmeticError(_error)
    return {"C1": int(c1), "C2": int(c2)}


#
# The six lines.
#


ProjectivePoint = tuple[CycloElem, CycloElem, CycloElem]


def _point(*xs: CycloElem | int) -> ProjectivePoint:
    a, b, c = (x if isinstance(x, CycloElem) else CycloElem.of(x) for x in xs)
    return (a, b, c)


def same_point(x: ProjectivePoint, y: ProjectivePoint) -> bool:
    return all(
        x[i] * y[j] - x[j] * y[i] == ZERO for i, j in ((0, 1), (0, 2), (1, 2))
    )


def on_line(line: ProjectivePoint, x: ProjectivePoint) -> bool:
    return line[0] * x[0] + line[1] * x[1] + line[2] * x[2] == ZERO


class SixLines:
    """
    Lines are keyed by pairs of tuple indices (1-based): (i, j) with
    i, j <= 3 is the diagonal x_i = x_j; (k, 4) is the coordinate line
    x_k = 0. Points are keyed by orbit label.
    """

    _lines: dict[tuple[int, int], ProjectivePoint]
    _points: dict[str, tuple[ProjectivePoint, ...]]

    def __init__(
        self,
        lines: dict[tuple[int, int], ProjectivePoint],
        points: dict[str, tuple[ProjectivePoint, ...]],
    ):
        self._lines = lines
        self._points = points

    @property
    def lines(self) -> dict[tuple[int, int], ProjectivePoint]:
        return self._lines

    @property
    def points(self) -> dict[str, tuple[ProjectivePoint, ...]]:
        return self._points

    def lines_through(self, x: ProjectivePoint) -> list[tuple[int, int]]:
        return [k for k, line in self._lines.items() if on_line(line, x)]

    def incidence(self) -> dict[str, int]:
        """Number of lines through each lift, which is constant on an orbit."""
        out = {}
        for label, lifts in self._points.items():
            counts = {len(self.lines_through(x)) for x in lifts}
            if len(counts) != 1:
                _error = f"Lifts of {label} lie on different numbers of lines"
                raise ArithmeticError(_error)
            out[label] = counts.pop()
        return out

    def orbit(self, x: ProjectivePoint) -> list[ProjectivePoint]:
        found: list[ProjectivePoint] = []
        for sigma in permutations(range(3)):
            y = (x[sigma[0]], x[sigma[1]], x[sigma[2]])
            if not any(same_point(y, z) for z in found):
                found.append(y)
        return found

    def line_orbits(self) -> dict[str, list[tuple[int, int]]]:
        """C1: coordinate lines; C2: diagonal lines."""
        return {
            "C1": [k for k in self._lines if k[1] == 4],
            "C2": [k for k in self._lines if k[1] != 4],
        }


def six_lines_data(t: BallTuple = ORBIFOLD_TUPLE) -> SixLines:
    mu = t.mu
    pairs = [
        (i + 1, j + 1)
        for i, j in combinations(range(len(mu)), 2)
        if mu[i] + mu[j] <= 1
    ]
    lines: dict[tuple[int, int], ProjectivePoint] = {}
    for i, j in pairs:
        if j <= 3:
            coeffs = [0, 0, 0]
            coeffs[i - 1] = 1
            coeffs[j - 1] = -1
            lines[(i, j)] = _point(*coeffs)
        elif j == 4:
            coeffs = [0, 0, 0]
            coeffs[i - 1] = 1
            lines[(i, j)] = _point(*coeffs)
        else:
            _error = f"No line model for the pair {(i, j)}"
            raise NotImplementedError(_error)
    w2 = OMEGA * OMEGA
    points = {
        "z1": (_point(1, 0, 0), _point(0, 1, 0), _point(0, 0, 1)),
        "z2": (_point(1, 1, 1),),
        "z3": (_point(1, 1, 0), _point(1, 0, 1), _point(0, 1, 1)),
        "z4": (_point(0, 1, -1), _point(1, 0, -1), _point(1, -1, 0)),
        "z5": (_point(ONE, OMEGA, w2), _point(ONE, w2, OMEGA)),
    }
    return SixLines(lines, points)


def derive_stratification(data: SixLines | None = None) -> Stratification:
    """
    Recompute the stratification of the quotient orbifold from the line
    arrangement: each line orbit maps onto a rational curve, punctured at
    the marked points it meets; the open part takes the rest of the Euler
    number of the quotient plane.
    """
    six = data or six_lines_data()
    weights = curve_weights(ORBIFOLD_TUPLE)
    strata = []
    curve_total = Fraction(0)
    for curve, keys in six.line_orbits().items():
        line = six.lines[keys[0]]
        marked = [
            label
            for label, lifts in six.points.items()
            if any(on_line(line, x) for x in lifts)
        ]
        chi = Fraction(2 - len(marked))
        log.debug("%s meets %s", curve, ", ".join(marked))
        curve_total += chi
        strata.append(Stratum(curve, chi, weights[curve]))
    open_chi = QUOTIENT_PLANE_EULER - curve_total - len(six.points)
    return Stratification(
        [Stratum("open", open_chi, 1)]
        + strata
        + [Stratum(label, 1, POINT_WEIGHTS[label]) for label in six.points]
    )


#
# Invariants of smooth ball quotient surfaces.
#


class SurfaceInvariants:
    _e: Fraction
    _volume: RealInterval

    def __init__(self, e: Rational, volume: RealInterval):
        self._e = Fraction(e)
        self._volume = volume

    @property
    def e(self) -> Fraction:
        return self._e

    @property
    def chi_o(self) -> Fraction:
        return self._e / 3

    @property
    def k2(self) -> Fraction:
        return 3 * self._e

    @property
    def volume(self) -> RealInterval:
        return self._volume

    @property
    def aut_bound(self) -> Fraction:
        return aut_bound(self._e)

    def to_json(self) -> dict[str, Any]:
        return {
            "e": str(self._e),
            "chiO": str(self.chi_o),
            "K2": str(self.k2),
            "volume": [float(self._volume.lo), float(self._volume.hi)],
            "autBound": str(self.aut_bound),
        }


def pi_squared_multiple(c: Rational, eps: Rational, label: str) -> RealInterval:
    factor = Fraction(c)
    return certify(
        lambda bits: (pi_interval(bits) ** 2 * factor).rounded(bits), eps, label
    )


def invariant_conversions(
    e: Rational, eps: Rational = Fraction(1, 10**9)
) -> SurfaceInvariants:
    return SurfaceInvariants(
        e, pi_squared_multiple(VOLUME_PER_EULER * Fraction(e), eps, "volume")
    )


def hurwitz_bound(g: int) -> int:
    if g < 2:
        _error = f"Hurwitz's bound needs genus at least 2 (received {g})"
        raise ValueError(_error)
    return HURWITZ_CONSTANT * (g - 1)


def aut_bound(e: Rational) -> Fraction:
    return AUT_CONSTANT * Fraction(e)


def xiao_bound(
    c1sq: Rational, rational_quotient: bool, ball: bool = False
) -> Fraction:
    """
    Xiao's bound on automorphisms of a surface of general type. For ball
    quotients the rational case constant drops to 1728.
    """
    if rational_quotient:
        constant = XIAO_BALL_CONSTANT if ball else XIAO_RATIONAL_CONSTANT
    else:
        constant = XIAO_CONSTANT
    return constant * Fraction(c1sq)


def volume_lower_bound(eps: Rational = Fraction(1, 10**9)) -> RealInterval:
    return pi_squared_multiple(VOLUME_LOWER_BOUND, eps, "volume lower bound")


def minimal_volume(eps: Rational = Fraction(1, 10**9)) -> RealInterval:
    return pi_squared_multiple(MINIMAL_VOLUME, eps, "minimal volume")


def volume_constant(c: Rational) -> Fraction:
    """b = 8 pi^2 / (3 c) for a volume lower bound c, a multiple of pi^2."""
    if Fraction(c) <= 0:
        _error = f"Volume bound must be positive (received {c})"
        raise ValueError(_error)
    return VOLUME_PER_EULER / Fraction(c)
