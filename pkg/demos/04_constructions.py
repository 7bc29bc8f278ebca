"""The construction toolbox: roots, dilations, inflations, stars, products.

Run:  python3 demos/04_constructions.py
"""

from kmfan import (
    Cone,
    FgaGroup,
    GroupHom,
    atoroidal_split,
    canonical_resolution,
    dilate,
    from_classical,
    inflate,
    contract,
    is_smooth,
    is_tame,
    product,
    roots,
    star,
    torsor_group,
    zero_fan,
)
from kmfan.intlinalg import IntMatrix

Z = FgaGroup(1)
Z2 = FgaGroup(2)
line = from_classical(Z, [Cone.from_generators([(1,)], 1)])
plane = from_classical(Z2, [Cone.from_generators([(1, 0), (0, 1)], 2)])
ray = Cone.from_generators([(1,)], 1)

print("== roots and dilation ==")
rooted, down = roots(line, [2])
print(f"second root of the line: marking {rooted.data[ray].generators()}, smooth: {is_smooth(rooted)}")
print(f"dilation by 2 gives the same fan: {dilate(line, 2)[0] == rooted}")

print("\n== inflation: quotient by a finite subgroup of the torus ==")
inc = GroupHom(Z, Z, IntMatrix([[2]]))
inflated, hom = inflate(line, inc)
print(f"inflating along an index-2 inclusion is tame: {is_tame(hom)}")
print(f"torsor group E(N'/N) = {torsor_group(hom)}")

print("\n== contraction ==")
contracted, _ = contract(line, inc)
print(f"the contraction along the same inclusion has marking {contracted.data[ray].generators()}")

print("\n== canonical resolution of a singular cone ==")
singular = from_classical(Z2, [Cone.from_generators([(1, 0), (1, 2)], 2)])
print(f"smooth before: {is_smooth(singular)}")
resolved, _ = canonical_resolution(singular)
print(f"smooth after replacing data by the primitive ray markings: {is_smooth(resolved)}")

print("\n== star fans (closed strata) ==")
st = star(plane, Cone.from_generators([(1, 0)], 2))
print(f"star of a ray in the plane fan: the line fan over {st.group}")

print("\n== products and torus factors ==")
prod, _, _ = product(line, line)
print(f"line x line = plane fan: {prod == plane}")
half = from_classical(Z2, [Cone.from_generators([(1, 0)], 2)])
g, b, iso = atoroidal_split(half)
print(f"a single ray in the plane splits off a torus: factor B = {b}, atoroidal part over {g.group}")
print(f"zero fan over Z^2 is all torus: B = {atoroidal_split(zero_fan(Z2))[1]}")
