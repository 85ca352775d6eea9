"""Curve families whose rational places serve as worker evaluation points.

Three families are supported over GF(q):

* RationalCurve      -- the projective line; q affine points plus one at infinity.
* KummerCurve        -- y^m = prod(x - a_i) / prod(x - b_j), gcd(m, q) = 1.
* TraceCurve         -- Tr(y) = prod(x - a_i) / prod(x - b_j), where Tr is the
                        trace of GF(p^u) over GF(p); extension degree p^(u-1).

Only numerator/denominator degree gaps of +1 or -1 are supported. That pins
down all ramification data in closed form, so genus, pole degrees and the
point count need no general divisor machinery:

* every denominator root is totally ramified and carries a simple pole of y;
* with a +1 gap the place at infinity is totally ramified (one rational point);
  with a -1 gap, Kummer curves still ramify totally over infinity (y has a
  simple zero there), while trace curves split into p^(u-1) rational points
  cut out by Tr(y) = 0;
* genus: Kummer (m-1) * (#roots - 1) / 2 over all roots; trace
  (B-1) * (p^(u-1) - 1) with B the number of simple poles of the right side.

Affine fibers are enumerated exhaustively with the field's root/preimage
solvers, so every emitted place satisfies the defining equation exactly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import (ConfigInvalid, DuplicateRoots, FieldNotMatchingU, GcdViolation,
                         PlaceNotEvaluable, UnsupportedDegreeGap)
from .field import Field

AFFINE = "affine_regular"
DENOM_POLE = "denominator_ramified"
INFINITE = "infinite"

_KIND_RANK = {AFFINE: 0, DENOM_POLE: 1, INFINITE: 2}


@dataclass(frozen=True)
class Place:
    """One rational place. Affine places carry coordinates; denominator-pole
    places carry only x; places over infinity carry y exactly when y stays
    finite there (split trace fibers)."""

    id: int
    kind: str
    x: int | None = None
    y: int | None = None


@dataclass(frozen=True)
class PoleData:
    """Closed-form pole bookkeeping for the coordinate functions.

    y_pole_degree is None for the rational curve (there is no y).
    """

    y_pole_x_codes: tuple
    y_pole_at_infinity: bool
    y_pole_degree: int | None
    x_pole_degree: int


@dataclass(frozen=True)
class FriendlyReport:
    mode: str
    m: int
    genus: int
    y_pole_degree: int | None
    x_pole_degree: int
    checks: tuple
    passed: bool

    def failed_checks(self):
        return tuple(name for name, ok in self.checks if not ok)


@dataclass(frozen=True)
class RationalCurve:
    field: Field

    kind = "rational"


@dataclass(frozen=True)
class KummerCurve:
    field: Field
    m: int
    num_roots: tuple
    den_roots: tuple

    kind = "kummer"


@dataclass(frozen=True)
class TraceCurve:
    field: Field
    u: int
    num_roots: tuple
    den_roots: tuple

    kind = "trace"


def extension_degree(curve):
    """Degree of the covering over the x-line (1 for the rational curve)."""
    if isinstance(curve, RationalCurve):
        return 1
    if isinstance(curve, KummerCurve):
        return curve.m
    return curve.field.p ** (curve.u - 1)


def validate_curve(curve):
    """Check all structural invariants; returns the curve unchanged."""
    if isinstance(curve, RationalCurve):
        return curve
    f = curve.field
    roots = tuple(curve.num_roots) + tuple(curve.den_roots)
    for root in roots:
        if not 0 <= int(root) < f.q:
            raise ValueError(f"root code {root} outside [0, {f.q})")
    if len(set(roots)) != len(roots):
        raise DuplicateRoots(f"num_roots {curve.num_roots} / den_roots {curve.den_roots}")
    gap = len(curve.num_roots) - len(curve.den_roots)
    if gap not in (1, -1):
        raise UnsupportedDegreeGap(f"degree gap {gap}, only +1/-1 supported")
    if isinstance(curve, KummerCurve):
        if curve.m < 1:
            raise ValueError(f"extension degree must be >= 1, got {curve.m}")
        if math.gcd(curve.m, f.q) != 1:
            raise GcdViolation(f"gcd(m={curve.m}, q={f.q}) != 1")
    else:
        if curve.u < 1:
            raise ValueError(f"tower height must be >= 1, got {curve.u}")
        if f.p ** curve.u != f.q:
            raise FieldNotMatchingU(f"field has q = {f.q}, not {f.p}^{curve.u}")
    return curve


def genus(curve):
    validate_curve(curve)
    if isinstance(curve, RationalCurve):
        return 0
    ln, ld = len(curve.num_roots), len(curve.den_roots)
    if isinstance(curve, KummerCurve):
        # tame covering, all branch points simple: Riemann-Hurwitz collapses to this
        return (curve.m - 1) * (ln + ld - 1) // 2
    m = extension_degree(curve)
    poles = ld + (1 if ln > ld else 0)
    return (poles - 1) * (m - 1)


def pole_data(curve):
    validate_curve(curve)
    if isinstance(curve, RationalCurve):
        return PoleData((), False, None, 1)
    ln, ld = len(curve.num_roots), len(curve.den_roots)
    at_inf = ln > ld
    return PoleData(tuple(sorted(int(b) for b in curve.den_roots)),
                    at_inf, ld + (1 if at_inf else 0), extension_degree(curve))


def _ratio_at(curve, x0):
    """num(x0) * den(x0)^-1; caller guarantees den(x0) != 0."""
    f = curve.field
    num = 1
    for a in curve.num_roots:
        num = f.mul(num, f.sub(x0, a))
    den = 1
    for b in curve.den_roots:
        den = f.mul(den, f.sub(x0, b))
    return f.mul(num, f.inv(den))


@lru_cache(maxsize=None)
def enumerate_places(curve):
    """All rational places, deterministically ordered by (class, x code, y code).

    Place ids are the positions in this ordering and are stable across runs
    for equal curve specifications.
    """
    validate_curve(curve)
    f = curve.field
    places = []
    if isinstance(curve, RationalCurve):
        places = [(AFFINE, int(x), None) for x in range(f.q)]
        places.append((INFINITE, None, None))
    else:
        den_set = set(int(b) for b in curve.den_roots)
        if isinstance(curve, KummerCurve):
            fiber_of = _group_by_value(f.pow(f.elements(), curve.m))
        else:
            fiber_of = _group_by_value(f.trace_values(curve.u))
        for x0 in range(f.q):
            if x0 in den_set:
                continue
            for y0 in fiber_of.get(_ratio_at(curve, x0), ()):
                places.append((AFFINE, x0, y0))
        for b in sorted(den_set):
            places.append((DENOM_POLE, b, None))
        ln, ld = len(curve.num_roots), len(curve.den_roots)
        if isinstance(curve, TraceCurve) and ln < ld:
            # unramified over infinity: the fiber splits along Tr(y) = 0
            for y0 in fiber_of.get(0, ()):
                places.append((INFINITE, None, y0))
        else:
            places.append((INFINITE, None, None))
    key = lambda t: (_KIND_RANK[t[0]], -1 if t[1] is None else t[1], -1 if t[2] is None else t[2])
    places.sort(key=key)
    return tuple(Place(i, kind, x, y) for i, (kind, x, y) in enumerate(places))


def _group_by_value(vals):
    groups = {}
    for y, v in enumerate(np.asarray(vals)):
        groups.setdefault(int(v), []).append(y)
    return {v: tuple(ys) for v, ys in groups.items()}


@lru_cache(maxsize=None)
def places_by_id(curve):
    return {pl.id: pl for pl in enumerate_places(curve)}


def place_census(curve):
    """Counts per place class, plus the total N(F)."""
    counts = {AFFINE: 0, DENOM_POLE: 0, INFINITE: 0}
    for pl in enumerate_places(curve):
        counts[pl.kind] += 1
    counts["total"] = sum(counts.values())
    return counts


def usable_places(curve, scheme):
    """Places where every encoding function is finite: the affine ones.

    Denominator-pole places (y blows up) and places over infinity (x blows up)
    are excluded for every scheme.
    """
    if scheme not in ("rational_poly", "poly_ag", "rational_matdot", "matdot_ag"):
        raise ConfigInvalid(f"unknown scheme {scheme!r}")
    return tuple(pl for pl in enumerate_places(curve) if pl.kind == AFFINE)


def evaluate_monomial(curve, place, x_exp, y_exp):
    """x^x_exp * y^y_exp at an affine place."""
    if place.kind != AFFINE:
        raise PlaceNotEvaluable(f"place {place.id} is {place.kind}")
    f = curve.field
    out = f.pow(place.x, x_exp)
    if y_exp:
        if place.y is None:
            raise PlaceNotEvaluable("rational curve places have no y coordinate")
        out = f.mul(out, f.pow(place.y, y_exp))
    return out


def hasse_weil_check(curve):
    """|q + 1 - N| <= 2 g sqrt(q), compared in exact integers."""
    n = len(enumerate_places(curve))
    g = genus(curve)
    q = curve.field.q
    return (q + 1 - n) ** 2 <= 4 * g * g * q


def verify_friendly(curve, mode, m):
    """Closed-form check of the conditions a scheme needs from its curve.

    mode "poly":   (m-1) | genus, y pole degree == genus/(m-1) + 1,
                   x pole degree == m.
    mode "matdot": genus == m - 1 and y pole degree == 2.
    """
    if mode not in ("poly", "matdot"):
        raise ValueError(f"unknown mode {mode!r}")
    g = genus(curve)
    pd = pole_data(curve)
    ypd = pd.y_pole_degree
    if mode == "poly":
        divisible = m >= 2 and g % (m - 1) == 0
        checks = (
            ("genus_divisible_by_m_minus_1", divisible),
            ("y_pole_degree", divisible and ypd == g // (m - 1) + 1),
            ("x_pole_degree", pd.x_pole_degree == m),
        )
    else:
        checks = (
            ("genus_equals_m_minus_1", g == m - 1),
            ("y_pole_degree_is_2", ypd == 2),
        )
    return FriendlyReport(mode, m, g, ypd, pd.x_pole_degree,
                          checks, all(ok for _, ok in checks))


# -- serialization ----------------------------------------------------------

_CURVE_KEYS = {"kind", "field", "m_or_u", "num_roots", "den_roots"}


def curve_to_json(curve):
    if isinstance(curve, RationalCurve):
        m_or_u, num, den = 1, (), ()
    elif isinstance(curve, KummerCurve):
        m_or_u, num, den = curve.m, curve.num_roots, curve.den_roots
    else:
        m_or_u, num, den = curve.u, curve.num_roots, curve.den_roots
    return {"kind": curve.kind, "field": curve.field.to_json(), "m_or_u": m_or_u,
            "num_roots": [int(v) for v in num], "den_roots": [int(v) for v in den]}


def curve_from_json(obj):
    if not isinstance(obj, dict):
        raise ConfigInvalid("curve spec must be a JSON object")
    if set(obj) != _CURVE_KEYS:
        missing = _CURVE_KEYS - set(obj)
        extra = set(obj) - _CURVE_KEYS
        raise ConfigInvalid(f"curve spec keys: missing {sorted(missing)}, unknown {sorted(extra)}")
    field = Field.from_json(obj["field"])
    kind = obj["kind"]
    num = tuple(int(v) for v in obj["num_roots"])
    den = tuple(int(v) for v in obj["den_roots"])
    if kind == "rational":
        curve = RationalCurve(field)
    elif kind == "kummer":
        curve = KummerCurve(field, int(obj["m_or_u"]), num, den)
    elif kind == "trace":
        curve = TraceCurve(field, int(obj["m_or_u"]), num, den)
    else:
        raise ConfigInvalid(f"unknown curve kind {kind!r}")
    return validate_curve(curve)


def places_to_csv(curve, fileobj):
    """Write the place table as CSV with columns id, class, x_code, y_code."""
    writer = csv.writer(fileobj)
    writer.writerow(["id", "class", "x_code", "y_code"])
    for pl in enumerate_places(curve):
        writer.writerow([pl.id, pl.kind,
                         "" if pl.x is None else pl.x,
                         "" if pl.y is None else pl.y])
