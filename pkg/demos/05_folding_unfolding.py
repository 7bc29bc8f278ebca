"""Folding GS fans into KM fans, and the universal unfolding back.

A GS fan is a classical fan in a lattice L with a finite-cokernel map
beta: L -> N.  When beta is injective on each cone and image interiors stay
disjoint, the image data assemble into a lattice KM fan (folding).  In the
other direction, the colimit of all lattice data produces the universal
semi-tame cover (unfolding).  Run:  python3 demos/05_folding_unfolding.py
"""

from kmfan import (
    Cone,
    FgaGroup,
    GroupHom,
    GsFan,
    KmFan,
    LatticeDatum,
    fold,
    fold_unfold_roundtrip,
    from_classical,
    hom_kernel_cokernel,
    is_foldable,
    is_gs_representable,
    is_tame,
    lattice_data_colimit,
    torsor_group,
    unfold,
)
from kmfan.intlinalg import IntMatrix

Z = FgaGroup(1)
Z2 = FgaGroup(2)
line = from_classical(Z, [Cone.from_generators([(1,)], 1)])

print("== folding ==")
gs = GsFan(line, GroupHom(Z, Z, IntMatrix([[2]])))
ok, _ = is_foldable(gs)
folded, beta = fold(gs)
ray = Cone.from_generators([(1,)], 1)
print(f"foldable: {ok}; folded marking {folded.data[ray].generators()} (the orbifold line)")
print(f"beta is tame with torsor group {torsor_group(beta)}")

bad = GsFan(
    from_classical(Z2, [Cone.from_generators([(1, 0)], 2), Cone.from_generators([(1, 1)], 2)]),
    GroupHom(Z2, Z, IntMatrix([[1, 0]])),
)
ok, problems = is_foldable(bad)
print(f"overlapping images are refused: foldable={ok} ({problems[0]['kind']})")

print("\n== a complete classical fan whose data colimit has torsion ==")
tricky = from_classical(Z2, [
    Cone.from_generators([(1, 2), (1, -2)], 2),
    Cone.from_generators([(1, -2), (-1, 0)], 2),
    Cone.from_generators([(1, 2), (-1, 0)], 2),
])
colim = lattice_data_colimit(tricky).colimit
print(f"colimit of the lattice data: {colim}  (not a lattice!)")
unfolded, cover, _ = unfold(tricky)
print(f"so the unfolding of this classical fan is not classical; cover tame: {is_tame(cover)}")

print("\n== a complete KM fan that is not a GS stack ==")
wide = Cone.from_generators([(1, 2), (1, -2)], 2)
data = dict(tricky.data)
data[wide] = LatticeDatum.from_generators(Z2, [(1, 2), (1, -2)])
data[Cone.from_generators([(1, 2)], 2)] = LatticeDatum.from_generators(Z2, [(1, 2)])
data[Cone.from_generators([(1, -2)], 2)] = LatticeDatum.from_generators(Z2, [(1, -2)])
nonsat = KmFan(Z2, tricky.cones, data)
unf = lattice_data_colimit(nonsat)
_, cok, _ = hom_kernel_cokernel(unf.structure_maps[wide])
print(f"now the colimit is {unf.colimit}, but one structure map has cokernel {cok}")
print(f"its torsion obstructs saturation, so gs-representable: {is_gs_representable(nonsat)}")

print("\n== the round trip on honest GS stacks ==")
for name, fan in [
    ("projective line", from_classical(Z, [Cone.from_generators([(1,)], 1),
                                           Cone.from_generators([(-1,)], 1)])),
    ("singular quadric cone", from_classical(Z2, [Cone.from_generators([(1, 0), (1, 2)], 2)])),
    ("the folded orbifold line", folded),
]:
    print(f"  fold(rigidified unfolding) == fan for the {name}: {fold_unfold_roundtrip(fan)}")
