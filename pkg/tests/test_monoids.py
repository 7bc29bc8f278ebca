"""Affine monoids: Hilbert bases, faces, kernel submonoids, freeness."""

import itertools
import random

import pytest

from kmfan.abelian import FgaGroup, GroupHom
from kmfan.cones import Cone
from kmfan.errors import NotAFace, NotSharp
from kmfan.intlinalg import IntMatrix
from kmfan.monoids import (
    AffineMonoid,
    dual_monoid,
    face_of_monoid,
    is_free_monoid,
    kernel_submonoid,
)

QUAD = Cone.from_generators([(1, 0), (0, 1)], 2)


def brute_cone_points(cone, radius):
    return [
        p
        for p in itertools.product(range(-radius, radius + 1), repeat=cone.ambient_rank)
        if cone.contains_point(p)
    ]


def brute_irreducibles(cone, radius):
    pts = [p for p in brute_cone_points(cone, radius) if any(p)]
    ptset = set(pts)
    out = []
    for p in pts:
        if not any(
            tuple(a - b for a, b in zip(p, q)) in ptset and any(a - b for a, b in zip(p, q))
            for q in pts
        ):
            out.append(p)
    return sorted(out)


class TestDualMonoid:
    def test_quadrant(self):
        m = dual_monoid(QUAD, 2)
        assert sorted(m.hilbert_basis()) == [(0, 1), (1, 0)]

    def test_skew_cone(self):
        m = dual_monoid(Cone.from_generators([(1, 0), (1, 2)], 2), 2)
        assert sorted(m.hilbert_basis()) == [(0, 1), (1, 0), (2, -1)]

    def test_zero_cone_gives_units(self):
        m = dual_monoid(Cone.zero(1), 1)
        assert m.unit_basis == ((1,),)
        assert sorted(m.hilbert_basis()) == [(-1,), (1,)]


class TestHilbertBasis:
    def test_a1_singularity(self):
        m = AffineMonoid(Cone.from_generators([(2, -1), (0, 1)], 2))
        assert sorted(m.hilbert_basis()) == [(0, 1), (1, 0), (2, -1)]

    def test_halfplane_units_split(self):
        m = AffineMonoid(Cone.from_generators([(1, 0), (0, 1), (0, -1)], 2))
        hb = m.hilbert_basis()
        assert (1, 0) in hb and (0, 1) in hb and (0, -1) in hb
        assert len(hb) == 3

    def test_matches_brute_force(self):
        rng = random.Random(12)
        checked = 0
        while checked < 25:
            n = rng.randint(1, 3)
            gens = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(rng.randint(1, 4))]
            cone = Cone.from_generators(gens, n)
            if not cone.is_sharp():
                continue
            checked += 1
            hb = AffineMonoid(cone).hilbert_basis()
            oracle = brute_irreducibles(cone, 6)
            in4 = lambda p: all(abs(x) <= 4 for x in p)
            assert {p for p in hb if in4(p)} == {p for p in oracle if in4(p)}
            # completeness: every sampled point decomposes over the basis
            for p in brute_cone_points(cone, 4):
                cur = p
                steps = 0
                while any(cur) and steps < 500:
                    for h in hb:
                        d = tuple(a - b for a, b in zip(cur, h))
                        if cone.contains_point(d):
                            cur = d
                            break
                    else:
                        break
                    steps += 1
                assert not any(cur), (gens, p, hb)

    def test_sharp_group_recovery(self):
        # for sharp sigma the dual monoid generates the full dual lattice
        from kmfan.intlinalg import hermite_column_basis, IntMatrix as IM

        rng = random.Random(13)
        checked = 0
        while checked < 20:
            n = rng.randint(1, 3)
            gens = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(rng.randint(1, n))]
            cone = Cone.from_generators(gens, n)
            if not cone.is_sharp():
                continue
            checked += 1
            hb = dual_monoid(cone, n).hilbert_basis()
            lattice = hermite_column_basis(IM.from_columns(hb, rows=n))
            assert lattice == IM.identity(n)


class TestFaceOfMonoid:
    def test_face_at_ray(self):
        m = dual_monoid(QUAD, 2)
        f = face_of_monoid(m, Cone.ray((1, 0)))
        assert sorted(f.hilbert_basis()) == [(0, 1)]

    def test_face_at_zero_is_whole(self):
        m = dual_monoid(QUAD, 2)
        assert face_of_monoid(m, Cone.zero(2)) == m

    def test_face_at_top_is_units(self):
        m = dual_monoid(QUAD, 2)
        f = face_of_monoid(m, QUAD)
        assert f.cone.is_zero()

    def test_not_a_face_rejected(self):
        m = dual_monoid(QUAD, 2)
        with pytest.raises(NotAFace):
            face_of_monoid(m, Cone.ray((1, 1)))


class TestKernelSubmonoid:
    def test_doubling(self):
        m = AffineMonoid(Cone.from_generators([(1,)], 1))
        a = GroupHom(FgaGroup(1), FgaGroup(0, (2,)), IntMatrix([[1]]))
        assert kernel_submonoid(m, a) == [(2,)]

    def test_zero_character(self):
        m = AffineMonoid(Cone.from_generators([(1,)], 1))
        a = GroupHom.zero(FgaGroup(1), FgaGroup(0, (2,)))
        assert kernel_submonoid(m, a) == [(1,)]

    def test_parity_on_quadrant(self):
        m = AffineMonoid(QUAD)
        a = GroupHom(FgaGroup(2), FgaGroup(0, (2,)), IntMatrix([[1, 1]]))
        assert sorted(kernel_submonoid(m, a)) == [(0, 2), (1, 1), (2, 0)]

    def test_generators_satisfy_contract(self):
        rng = random.Random(14)
        for _ in range(15):
            n = rng.randint(1, 2)
            gens = [tuple(rng.randint(0, 3) for _ in range(n)) for _ in range(2)]
            cone = Cone.from_generators(gens, n)
            if not cone.is_sharp() or cone.is_zero():
                continue
            m = AffineMonoid(cone)
            t = m.gp_rank()
            e = FgaGroup(0, (rng.choice([2, 3, 4]),))
            a = GroupHom(
                FgaGroup(t), e,
                IntMatrix([[rng.randrange(e.torsion[0]) for _ in range(t)]]),
            )
            gens_q = kernel_submonoid(m, a)
            gp = m.gp_basis()
            order = e.order()
            from kmfan.intlinalg import solve_integer

            for g in gens_q:
                coords = solve_integer(gp, g)
                assert coords is not None
                assert a.apply(coords) == e.zero()
            # |E| . h lies in the generated submonoid for each basis element h
            qset = gens_q
            for h in m.hilbert_basis():
                target = tuple(order * x for x in h)
                assert _in_submonoid(target, qset, cone)


def _in_submonoid(target, gens, cone):
    seen = set()

    def search(t):
        if not any(t):
            return True
        if t in seen:
            return False
        seen.add(t)
        for g in gens:
            d = tuple(a - b for a, b in zip(t, g))
            if cone.contains_point(d) and search(d):
                return True
        return False

    return search(target)


class TestFreeness:
    def test_free_cases(self):
        assert is_free_monoid(AffineMonoid(QUAD))
        assert is_free_monoid(AffineMonoid(Cone.from_generators([(1,)], 1)))
        assert is_free_monoid(AffineMonoid(Cone.zero(2)))

    def test_singularity_not_free(self):
        assert not is_free_monoid(AffineMonoid(Cone.from_generators([(2, -1), (0, 1)], 2)))

    def test_not_sharp_rejected(self):
        with pytest.raises(NotSharp):
            is_free_monoid(AffineMonoid(Cone.full(1)))
