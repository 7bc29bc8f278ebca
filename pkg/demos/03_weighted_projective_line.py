"""A complete KM fan over Z + Z/2 presenting the weighted projective line P(2,2).

The fan has two rays with lattice data generated by (1,1) and (-1,0); its
realization is the quotient of the punctured plane by t.(x,y) = (t^2 x, t^2 y).
Run:  python3 demos/03_weighted_projective_line.py
"""

from kmfan import (
    Cone,
    FgaGroup,
    GroupHom,
    KmFan,
    KmFanHom,
    LatticeDatum,
    coarse_fan,
    from_classical,
    fundamental_group,
    hom_kernel_cokernel,
    is_classical,
    is_proper,
    is_representable,
    is_tame,
    isotropy,
    local_presentation,
    strata,
    support_contains,
    torsor_group,
    validate_hom,
    zero_fan,
)
from kmfan.intlinalg import IntMatrix

N = FgaGroup(1, (2,))
zero = Cone.zero(1)
plus = Cone.from_generators([(1,)], 1)
minus = Cone.from_generators([(-1,)], 1)
fan = KmFan(N, [zero, plus, minus], {
    zero: LatticeDatum.from_generators(N, []),
    plus: LatticeDatum.from_generators(N, [(1, 1)]),
    minus: LatticeDatum.from_generators(N, [(-1, 0)]),
})
print(f"group N = {fan.group}, cones: {[c.rays for c in fan.cones]}")
print(f"valid: {fan.validate() == []},  classical: {is_classical(fan)}")

print("\n== coarse space ==")
coarse, pi = coarse_fan(fan)
print(f"coarse fan = the projective line over {coarse.group}")

print("\n== isotropy and strata ==")
for s in strata(fan):
    print(f"  cone {s.cone.rays or '0'}: torus rank {s.torus_rank}, isotropy {s.isotropy}")
print(f"every point carries a Z/2: the generic gerbe comes from N_tor = {isotropy(fan, zero)}")

print("\n== the local chart at the positive ray ==")
chart = local_presentation(fan, plus)
print(f"  monoid generators (in the dual of the lifting): {chart.monoid_generators}")
print(f"  stabilizer: {chart.stabilizer}, action matrix: {chart.action.matrix.entries}")
print("  a zero action: the chart is a product, a line times a Z/2 gerbe")

print("\n== the covering map from the classical plane fan ==")
source = from_classical(FgaGroup(2), [
    Cone.from_generators([(1, 0)], 2),
    Cone.from_generators([(0, 1)], 2),
])
f = GroupHom(FgaGroup(2), N, IntMatrix([[1, -1], [1, 0]]))
hom = validate_hom(f, source, fan)
assert isinstance(hom, KmFanHom)
ker, cok, _ = hom_kernel_cokernel(f)
print(f"tame: {is_tame(hom)}, representable: {is_representable(hom)}")
print(f"kernel of f is generated by {ker.lattice_basis().columns()[0]}")
print(f"torsor group D(f) = {torsor_group(hom)}: the punctured plane is a line-bundle-minus-zero over the fan")

print("\n== global invariants ==")
print(f"pi_1 = {fundamental_group(fan)} (trivial, as for any weighted projective space)")
to_point = validate_hom(GroupHom(N, FgaGroup(0), IntMatrix.zero(0, 2)), fan, zero_fan(FgaGroup(0)))
print(f"proper over the point: {is_proper(to_point)}")

print("\n== fine support ==")
for n in [(1, 1), (1, 0), (0, 1), (0, 0), (-2, 0)]:
    print(f"  {n} in support: {support_contains(fan, n)}")
print("(1,0) lies in the cone but not in the marking lattice, so it is excluded")
