"""Walkthrough: curve families and their rational places.

The whole point of moving from the rational function field to these curve
families is worker capacity: evaluation points are rational places, and a
curve can have many more of them than the base field has elements. This
script builds the three reference curves and prints the numbers that matter.
"""

from agdmm import (catalog, enumerate_places, extension_degree, genus,
                   hasse_weil_check, place_census, pole_data, usable_places,
                   verify_friendly)

for name, builder in [
    ("y^8 = (x^2 - 3)/(x - 1) over GF(25)", catalog.kummer_gf25_degree8),
    ("Tr(y) = (x - t)(x + t)/(x - 1) over GF(27)", catalog.trace_gf27_degree9),
    ("y^3 = x/(x^2 - 3) over GF(25)", catalog.kummer_gf25_matdot3),
]:
    curve = builder()
    q = curve.field.q
    g = genus(curve)
    census = place_census(curve)
    deg = extension_degree(curve)
    print(name)
    print(f"  genus {g}, extension degree {deg}")
    print(f"  rational places: {census['total']} vs q + 1 = {q + 1} on the line")
    print(f"  census: {census}")
    print(f"  usable evaluation points: {len(usable_places(curve, 'poly_ag'))}")
    print(f"  pole data: {pole_data(curve)}")
    print(f"  Hasse-Weil bound respected: {hasse_weil_check(curve)}")
    poly = verify_friendly(curve, "poly", deg)
    matdot = verify_friendly(curve, "matdot", deg)
    print(f"  block-grid conditions (m={deg}): {'pass' if poly.passed else 'fail'}")
    print(f"  inner-product conditions (m={deg}): {'pass' if matdot.passed else 'fail'}")
    print()

# The first place classes in detail: affine places carry (x, y) coordinates
# that satisfy the defining equation exactly.
curve = catalog.kummer_gf25_degree8()
places = enumerate_places(curve)
print("first five places of the degree-8 curve:")
for pl in places[:5]:
    print(f"  id={pl.id:>2} {pl.kind:<22} x={pl.x} y={pl.y}")
print(f"...and the last one: id={places[-1].id} {places[-1].kind}")
