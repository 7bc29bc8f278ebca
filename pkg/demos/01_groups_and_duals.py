"""Finitely generated abelian groups: quotients, duals, Ext, derived duals.

Every group is kept in invariant-factor normal form, so two groups are
isomorphic exactly when they are equal.  Run:  python3 demos/01_groups_and_duals.py
"""

from kmfan import (
    FgaGroup,
    GroupHom,
    Subgroup,
    dd_of_hom,
    dual_group,
    ext_group,
    finite_quotient_extension,
    hom_kernel_cokernel,
    is_tame_hom,
    quotient,
)
from kmfan.intlinalg import IntMatrix

Z = FgaGroup(1)
Z2 = FgaGroup(2)

print("== quotients ==")
q, proj = quotient(Z, Subgroup.from_generators(Z, [(2,)]))
print(f"Z / <2> = {q}")

N = FgaGroup(1, (2,))  # Z + Z/2
q, _ = quotient(N, Subgroup.from_generators(N, [(1, 1)]))
print(f"(Z + Z/2) / <(1,1)> = {q}   (a finite-index lattice datum)")

print("\n== duals and Ext ==")
G = FgaGroup(2, (3,))
print(f"Hom({G}, Z) = {dual_group(G)}")
print(f"Ext^1({G}, Z) = {ext_group(G)}")
A = FgaGroup(0, (2, 4))
print(f"Ext is an involution on finite groups:  E(E({A})) = {ext_group(ext_group(A))}")

print("\n== kernels, cokernels, tameness ==")
f = GroupHom(Z2, N, IntMatrix([[1, -1], [1, 0]]))
ker, cok, _ = hom_kernel_cokernel(f)
print(f"the map Z^2 -> Z + Z/2 with columns (1,1), (-1,0):")
print(f"  kernel basis {ker.lattice_basis().columns()},  cokernel {cok}")
print(f"  tame (finite cokernel, torsion-free kernel): {is_tame_hom(f)}")

print("\n== the derived dual D(f) ==")
# D(f) is the degree-zero cohomology of the Z-dual of [N -> N']; for a tame
# map it is the group of the torsor its realization defines.
for name, g in [
    ("projection Z^2 -> Z", GroupHom(Z2, Z, IntMatrix([[1, 0]]))),
    ("multiplication by 2 on Z", GroupHom(Z, Z, IntMatrix([[2]]))),
    ("the map above", f),
]:
    dd = dd_of_hom(g)
    print(f"  D({name}) = {dd.group}")
print("the exact sequence 0 -> E(Cok f) -> D(f) -> (Ker f)^v -> 0 comes with")
print("explicit witness maps; see dd.from_ext_cok and dd.to_ker_dual.")

print("\n== extending a lattice along a finite character ==")
g = GroupHom(dual_group(Z), FgaGroup(0, (2,)), IntMatrix([[1]]))
nprime, inc = finite_quotient_extension(Z, g)
_, cok, _ = hom_kernel_cokernel(inc)
print(f"N' = D(g) = {nprime}, with N included at index |{cok}| = {cok.order()}")
