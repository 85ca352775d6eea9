"""Built-in reference curves used by the selftest, demos and test suite.

All constructions are deterministic: fields use the canonical modulus, and
where a primitive element is needed the field's generator (the smallest code
that generates the multiplicative group) is taken. With those choices the
three curves below have genus 7/8/2 and 52/56/46 rational places.
"""

from __future__ import annotations

from .curves import KummerCurve, RationalCurve, TraceCurve, validate_curve
from .field import make_field


def gf25():
    return make_field(5, 2)


def gf27():
    return make_field(3, 3)


def kummer_gf25_degree8():
    """y^8 = (x^2 - 3) / (x - 1) over GF(25): genus 7, 52 rational places."""
    f = gf25()
    num = tuple(f.nth_roots(3, 2))  # the two square roots of 3
    return validate_curve(KummerCurve(f, 8, num, (1,)))


def trace_gf27_degree9():
    """Tr(y) = (x - t)(x + t) / (x - 1) over GF(27), t the canonical primitive
    element: genus 8, 56 rational places. The count does depend on which
    primitive element is chosen; the field generator is one that works."""
    f = gf27()
    t = f.generator
    return validate_curve(TraceCurve(f, 3, (t, f.neg(t)), (1,)))


def kummer_gf25_matdot3():
    """y^3 = x / (x^2 - 3) over GF(25): genus 2, 46 rational places."""
    f = gf25()
    den = tuple(f.nth_roots(3, 2))
    return validate_curve(KummerCurve(f, 3, (0,), den))


def rational_gf25():
    return RationalCurve(gf25())
