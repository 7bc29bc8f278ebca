"""Cones and their monoids of lattice points.

Run:  python3 demos/02_cones_and_monoids.py
"""

from kmfan import AffineMonoid, Cone, dual_monoid, face_of_monoid, is_free_monoid, union_covers

print("== duality ==")
quadrant = Cone.from_generators([(1, 0), (0, 1)], 2)
print(f"first quadrant is self-dual: {quadrant.dual() == quadrant}")

skew = Cone.from_generators([(1, 0), (1, 2)], 2)
print(f"dual of cone<(1,0),(1,2)> has rays {skew.dual().rays}")
print(f"double dual returns the cone itself: {skew.dual().dual() == skew}")

print("\n== faces ==")
for f in quadrant.faces():
    print(f"  dim {f.dim()}: rays {f.rays}")

print("\n== Hilbert bases ==")
m = dual_monoid(skew, 2)
print(f"dual monoid of cone<(1,0),(1,2)>: Hilbert basis {sorted(m.hilbert_basis())}")
print(f"free (isomorphic to N^n)? {is_free_monoid(m)}")

halfplane = AffineMonoid(Cone.from_generators([(1, 0), (0, 1), (0, -1)], 2))
print(f"halfplane monoid: generators {halfplane.hilbert_basis()}")
print(f"  unit group basis: {halfplane.unit_basis}")

print("\n== faces of a monoid ==")
n2 = dual_monoid(quadrant, 2)
face = face_of_monoid(n2, Cone.ray((1, 0)))
print(f"elements of N^2 vanishing on the first ray: {sorted(face.hilbert_basis())}")

print("\n== covering tests ==")
left = Cone.from_generators([(1, 0), (1, 1)], 2)
right = Cone.from_generators([(1, 1), (0, 1)], 2)
print(f"two wedges cover the quadrant: {union_covers(quadrant, [left, right])}")
print(f"one wedge does not: {union_covers(quadrant, [left])}")
