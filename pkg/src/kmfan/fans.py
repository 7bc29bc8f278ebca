"""KM fans: validation, constructions, morphism classification, invariants.

A KM fan is a triple (N, F, {F_sigma}): a finitely generated abelian group N,
a fan F of sharp cones in the free quotient of N, and a compatible lattice
datum F_sigma (a finite-index lattice inside Span(sigma) cap N) for every
cone.  Cones live in coordinates of Z^r = N / N_tor; lattice data are
subgroups of N given in full coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .abelian import (
    FgaGroup,
    GroupHom,
    Subgroup,
    dd_of_hom,
    direct_sum,
    dual_group,
    ext_group,
    hom_kernel_cokernel,
    is_isomorphism,
    is_tame_hom,
    kernel_subgroup,
    present_quotient,
    preimage_subgroup,
    quotient,
)
from .cones import Cone, union_covers
from .errors import (
    ConeNotInFan,
    InfiniteCokernel,
    InvalidFan,
    KmFanError,
    NotFiniteIndex,
    NotSimplicial,
    NotSmooth,
    PreconditionsFail,
    TorsionAmbient,
)
from .intlinalg import (
    IntMatrix,
    Vec,
    fraction_vector_to_primitive,
    rank as matrix_rank,
    solve_integer,
    solve_rational,
)
from .monoids import AffineMonoid, is_free_monoid


class LatticeDatum:
    """A finite-index lattice inside Span(sigma) cap N, attached to a cone."""

    __slots__ = ("ambient", "subgroup", "_basis")

    def __init__(self, ambient: FgaGroup, subgroup: Subgroup):
        if subgroup.ambient != ambient:
            raise KmFanError("datum subgroup lives in the wrong group")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "subgroup", subgroup)
        object.__setattr__(self, "_basis", None)

    def __setattr__(self, *args):
        raise AttributeError("LatticeDatum is immutable")

    @staticmethod
    def from_generators(ambient: FgaGroup, generators: Iterable[Sequence[int]]) -> "LatticeDatum":
        return LatticeDatum(ambient, Subgroup.from_generators(ambient, generators))

    def basis(self) -> IntMatrix:
        if self._basis is None:
            object.__setattr__(self, "_basis", self.subgroup.lattice_basis())
        return self._basis

    def generators(self) -> List[Vec]:
        return list(self.basis().columns())

    def free_basis(self) -> IntMatrix:
        b = self.basis()
        return IntMatrix([b.entries[i] for i in range(self.ambient.free_rank)], cols=b.cols)

    def rank(self) -> int:
        return self.basis().cols

    def contains(self, vector: Sequence[int]) -> bool:
        return self.subgroup.contains(vector)

    def violations(self, cone: Cone) -> List[str]:
        """Why this is not a valid lattice datum for the cone, if it is not."""
        out = []
        if not self.subgroup.is_lattice():
            out.append("generated subgroup is not torsion-free")
            return out
        basis = self.basis()
        fb = self.free_basis()
        if matrix_rank(fb) != basis.cols:
            out.append("free projections of the generators are linearly dependent")
            return out
        span = cone.span_lattice_basis()
        if basis.cols != span.cols:
            out.append("datum rank differs from the cone dimension")
            return out
        for col in fb.columns():
            if solve_rational(span, [Fraction(x) for x in col]) is None:
                out.append("datum does not lie in the span of the cone")
                return out
        return out

    def __eq__(self, other):
        return (
            isinstance(other, LatticeDatum)
            and self.ambient == other.ambient
            and self.subgroup == other.subgroup
        )

    def __hash__(self):
        return hash((self.ambient, self.subgroup))

    def __repr__(self):
        return f"LatticeDatum({self.generators()})"


class KmFan:
    """A KM fan (N, F, {F_sigma}) in canonical form."""

    __slots__ = ("group", "cones", "data")

    def __init__(
        self,
        group: FgaGroup,
        cones: Iterable[Cone],
        data: Dict[Cone, LatticeDatum],
        check: bool = True,
    ):
        cones = sorted(set(cones), key=lambda c: (c.dim(), c.rays))
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "cones", tuple(cones))
        object.__setattr__(self, "data", dict(data))
        if check:
            problems = self.validate()
            if problems:
                raise InvalidFan(problems)

    def __setattr__(self, *args):
        raise AttributeError("KmFan is immutable")

    # -- validation ------------------------------------------------------

    def validate(self) -> List[dict]:
        """Structured list of violations; empty when the fan is valid."""
        out: List[dict] = []
        r = self.group.free_rank
        cone_set = set(self.cones)
        if not self.cones:
            out.append({"kind": "empty-fan", "detail": "a fan must contain at least one cone"})
            return out
        for c in self.cones:
            if c.ambient_rank != r:
                out.append({"kind": "wrong-ambient", "detail": f"cone {c!r} has ambient rank {c.ambient_rank}, expected {r}"})
                return out
            if not c.is_sharp():
                out.append({"kind": "non-sharp-cone", "detail": f"cone {c!r} contains a line"})
        for c in self.cones:
            for f in c.faces():
                if f not in cone_set:
                    out.append({"kind": "missing-face", "detail": f"face {f!r} of {c!r} is not in the fan"})
        for i, a in enumerate(self.cones):
            for b in self.cones[i + 1:]:
                # cones are sorted by dimension, so b never sits inside a
                meet = a if b.contains_cone(a) else a.intersect(b)
                if meet not in cone_set or not meet.is_face_of(a) or not meet.is_face_of(b):
                    out.append({
                        "kind": "bad-intersection",
                        "detail": f"{a!r} and {b!r} do not intersect in a common face",
                    })
        if out:
            return out
        for c in self.cones:
            datum = self.data.get(c)
            if datum is None:
                out.append({"kind": "missing-datum", "detail": f"no lattice datum for {c!r}"})
                continue
            if datum.ambient != self.group:
                out.append({"kind": "wrong-datum-group", "detail": f"datum for {c!r} lives in the wrong group"})
                continue
            for v in datum.violations(c):
                out.append({"kind": "invalid-datum", "detail": f"{c!r}: {v}"})
        if out:
            return out
        for sigma in self.cones:
            for tau in sigma.faces():
                expected = _span_intersection(self.group, self.data[sigma], tau)
                if expected != self.data[tau].subgroup:
                    out.append({
                        "kind": "incompatible-data",
                        "detail": f"datum of face {tau!r} is not Span(face) cap datum of {sigma!r}",
                    })
        return out

    # -- accessors ---------------------------------------------------------

    def datum(self, cone: Cone) -> LatticeDatum:
        if cone not in self.data:
            raise ConeNotInFan(f"{cone!r} is not a cone of this fan")
        return self.data[cone]

    def zero_cone(self) -> Cone:
        return Cone.zero(self.group.free_rank)

    def ray_cones(self) -> List[Cone]:
        return [c for c in self.cones if c.dim() == 1]

    def maximal_cones(self) -> List[Cone]:
        out = []
        for c in self.cones:
            if not any(o != c and o.contains_cone(c) for o in self.cones):
                out.append(c)
        return out

    def cone_index(self, cone: Cone) -> int:
        return self.cones.index(cone)

    def __eq__(self, other):
        return (
            isinstance(other, KmFan)
            and self.group == other.group
            and self.cones == other.cones
            and all(self.data[c] == other.data[c] for c in self.cones)
        )

    def __hash__(self):
        return hash((self.group, self.cones, tuple(self.data[c] for c in self.cones)))

    def __repr__(self):
        return f"KmFan(group={self.group!r}, ncones={len(self.cones)})"


def _span_intersection(group: FgaGroup, datum: LatticeDatum, tau: Cone) -> Subgroup:
    """The subgroup Span(tau) cap F_sigma, computed in datum coordinates."""
    basis = datum.basis()
    fb = datum.free_basis()
    span = tau.span_lattice_basis()
    r = group.free_rank
    pres = present_quotient(r, span) if r else None
    if pres is None:
        return datum.subgroup
    proj = pres.proj @ fb  # coords of Z^d -> free quotient of Span tau
    from .intlinalg import kernel_basis

    ker = kernel_basis(proj)
    gens = [basis.apply(col) for col in ker.columns()]
    return Subgroup.from_generators(group, gens)


class KmFanHom:
    """A morphism of KM fans with its derived minimal-cone assignment."""

    __slots__ = ("source", "target", "hom", "cone_images")

    def __init__(self, source: KmFan, target: KmFan, hom: GroupHom, cone_images: Dict[Cone, Cone]):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "hom", hom)
        object.__setattr__(self, "cone_images", dict(cone_images))

    def __setattr__(self, *args):
        raise AttributeError("KmFanHom is immutable")

    def then(self, other: "KmFanHom") -> "KmFanHom":
        if other.source != self.target:
            raise KmFanError("fan morphisms do not compose")
        result = validate_hom(self.hom.then(other.hom), self.source, other.target)
        if not isinstance(result, KmFanHom):
            raise KmFanError("composition failed to validate")
        return result

    def __repr__(self):
        return f"KmFanHom({self.source!r} -> {self.target!r})"


class HomRefusal:
    """A structured reason why a group map fails to be a fan morphism."""

    __slots__ = ("cone", "reason")

    def __init__(self, cone: Cone, reason: str):
        self.cone = cone
        self.reason = reason

    def __repr__(self):
        return f"HomRefusal({self.cone!r}: {self.reason})"


def validate_hom(f: GroupHom, source: KmFan, target: KmFan):
    """Check that a group homomorphism defines a morphism of KM fans.

    Returns a KmFanHom on success, otherwise a HomRefusal naming the first
    cone where the morphism conditions fail.  Only the minimal containing
    cone needs its datum checked; compatibility transfers the condition to
    every other containing cone.
    """
    if f.source != source.group or f.target != target.group:
        raise KmFanError("homomorphism endpoints do not match the fans")
    fbar = f.free_matrix()
    images: Dict[Cone, Cone] = {}
    for sigma in source.cones:
        img_gens = [fbar.apply(rr) for rr in sigma.rays]
        containing = [
            tau for tau in target.cones if all(tau.contains_point(g) for g in img_gens)
        ]
        if not containing:
            return HomRefusal(sigma, "image of the cone is not contained in any target cone")
        minimal = containing[0]
        for tau in containing[1:]:
            minimal = minimal.intersect(tau)
        datum = target.datum(minimal)
        for gen in source.datum(sigma).generators():
            if not datum.contains(f.apply(gen)):
                return HomRefusal(
                    sigma, "lattice datum does not map into the datum of the minimal cone"
                )
        images[sigma] = minimal
    return KmFanHom(source, target, f, images)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def zero_fan(group: FgaGroup) -> KmFan:
    """The fan whose only cone is the zero cone, with the zero datum."""
    c = Cone.zero(group.free_rank)
    return KmFan(group, [c], {c: LatticeDatum.from_generators(group, [])})


def zero_fan_unit(fan: KmFan) -> KmFanHom:
    """The canonical map zero_fan(N) -> F over the identity of N."""
    result = validate_hom(GroupHom.identity(fan.group), zero_fan(fan.group), fan)
    assert isinstance(result, KmFanHom)
    return result


def from_classical(group: FgaGroup, cones: Iterable[Cone]) -> KmFan:
    """A classical fan as a KM fan: lattice data N_sigma = Span(sigma) cap N."""
    if not group.is_lattice():
        raise TorsionAmbient("a classical fan needs a torsion-free group")
    closure = set()
    for c in cones:
        for face in c.faces():
            closure.add(face)
    if not closure:
        closure.add(Cone.zero(group.free_rank))
    data = {}
    for c in closure:
        data[c] = LatticeDatum.from_generators(group, c.span_lattice_basis().columns())
    return KmFan(group, closure, data)


def is_classical(fan: KmFan) -> bool:
    """Lattice group and every datum saturated (F_sigma = N_sigma)."""
    if not fan.group.is_lattice():
        return False
    for c in fan.cones:
        q, _ = quotient(fan.group, fan.data[c].subgroup)
        if q.torsion:
            return False
    return True


def coarse_fan(fan: KmFan) -> Tuple[KmFan, KmFanHom]:
    """The underlying classical fan over N/N_tor, with the projection map."""
    nbar = FgaGroup(fan.group.free_rank)
    coarse = from_classical(nbar, fan.cones)
    proj = GroupHom(
        fan.group,
        nbar,
        IntMatrix(
            [[1 if i == j else 0 for j in range(fan.group.ncoords)] for i in range(nbar.ncoords)],
            cols=fan.group.ncoords,
        ),
    )
    hom = validate_hom(proj, fan, coarse)
    assert isinstance(hom, KmFanHom)
    return coarse, hom


def rigidify(fan: KmFan) -> Tuple[KmFan, KmFanHom]:
    """Push the lattice data into N/N_tor: the initial lattice KM fan under F."""
    nbar = FgaGroup(fan.group.free_rank)
    proj = GroupHom(
        fan.group,
        nbar,
        IntMatrix(
            [[1 if i == j else 0 for j in range(fan.group.ncoords)] for i in range(nbar.ncoords)],
            cols=fan.group.ncoords,
        ),
    )
    data = {}
    for c in fan.cones:
        gens = [proj.apply(g) for g in fan.data[c].generators()]
        data[c] = LatticeDatum.from_generators(nbar, gens)
    rig = KmFan(nbar, fan.cones, data)
    hom = validate_hom(proj, fan, rig)
    assert isinstance(hom, KmFanHom)
    return rig, hom


def ray_marking(fan: KmFan, ray: Cone) -> Vec:
    """The generator of F_rho on the positive side of the ray rho."""
    datum = fan.datum(ray)
    basis = datum.basis()
    if basis.cols != 1:
        raise KmFanError("ray datum must have rank one")
    gen = basis.column(0)
    free = gen[: fan.group.free_rank]
    direction = ray.rays[0]
    scale = next((Fraction(f, d) for f, d in zip(free, direction) if d), None)
    if scale is None or scale == 0:
        raise KmFanError("ray datum does not span the ray")
    if scale < 0:
        gen = fan.group.reduce(tuple(-x for x in gen))
    return gen


def roots(fan: KmFan, orders: Sequence[int]) -> Tuple[KmFan, KmFanHom]:
    """Scale the ray markings of a smooth fan: the root construction.

    ``orders`` is indexed by the rays of the fan in canonical order.
    """
    if not is_smooth(fan):
        raise NotSmooth("roots require a smooth fan")
    rays = fan.ray_cones()
    if len(orders) != len(rays):
        raise KmFanError("need one positive order per ray")
    if any(a < 1 for a in orders):
        raise KmFanError("orders must be positive")
    marking = {ray: ray_marking(fan, ray) for ray in rays}
    data = {}
    for c in fan.cones:
        gens = []
        for ray, a in zip(rays, orders):
            if c.contains_cone(ray):
                gens.append(tuple(a * x for x in marking[ray]))
        data[c] = LatticeDatum.from_generators(fan.group, gens)
    rooted = KmFan(fan.group, fan.cones, data)
    hom = validate_hom(GroupHom.identity(fan.group), rooted, fan)
    assert isinstance(hom, KmFanHom)
    return rooted, hom


def dilate(fan: KmFan, factor: int) -> Tuple[KmFan, KmFanHom]:
    """Scale every lattice datum by a positive integer."""
    if factor < 1:
        raise KmFanError("dilation factor must be positive")
    data = {}
    for c in fan.cones:
        gens = [tuple(factor * x for x in g) for g in fan.data[c].generators()]
        data[c] = LatticeDatum.from_generators(fan.group, gens)
    dilated = KmFan(fan.group, fan.cones, data)
    hom = validate_hom(GroupHom.identity(fan.group), dilated, fan)
    assert isinstance(hom, KmFanHom)
    return dilated, hom


def inflate(fan: KmFan, inclusion: GroupHom) -> Tuple[KmFan, KmFanHom]:
    """Regard the fan over a finite-index overgroup N <= N'.

    ``inclusion`` is an injective map N -> N' with finite cokernel; the
    resulting morphism F -> F' is tame.
    """
    if inclusion.source != fan.group:
        raise KmFanError("inclusion must start at the fan's group")
    ker = kernel_subgroup(inclusion)
    _, cok, _ = hom_kernel_cokernel(inclusion)
    if ker.generators() or not cok.is_finite():
        raise NotFiniteIndex("inclusion must be injective with finite cokernel")
    fbar = inclusion.free_matrix()
    cone_map = {}
    data = {}
    for c in fan.cones:
        newc = Cone.from_generators([fbar.apply(r) for r in c.rays], inclusion.target.free_rank)
        cone_map[c] = newc
        gens = [inclusion.apply(g) for g in fan.data[c].generators()]
        data[newc] = LatticeDatum.from_generators(inclusion.target, gens)
    inflated = KmFan(inclusion.target, list(cone_map.values()), data)
    hom = validate_hom(inclusion, fan, inflated)
    assert isinstance(hom, KmFanHom)
    return inflated, hom


def contract(fan: KmFan, inclusion: GroupHom) -> Tuple[KmFan, KmFanHom]:
    """Restrict the fan to a finite-index subgroup N' <= N.

    ``inclusion`` is an injective map N' -> N with finite cokernel; data are
    intersected with N'.
    """
    if inclusion.target != fan.group:
        raise KmFanError("inclusion must land in the fan's group")
    ker = kernel_subgroup(inclusion)
    _, cok, _ = hom_kernel_cokernel(inclusion)
    if ker.generators() or not cok.is_finite():
        raise NotFiniteIndex("inclusion must be injective with finite cokernel")
    fbar = inclusion.free_matrix()
    cone_map = {}
    data = {}
    for c in fan.cones:
        new_rays = []
        for r in c.rays:
            sol = solve_rational(fbar, [Fraction(x) for x in r])
            if sol is None:
                raise KmFanError("internal: ray not in the rational image")
            new_rays.append(fraction_vector_to_primitive(sol))
        newc = Cone.from_generators(new_rays, inclusion.source.free_rank)
        cone_map[c] = newc
        data[newc] = LatticeDatum(
            inclusion.source,
            preimage_subgroup(inclusion, fan.data[c].subgroup),
        )
    contracted = KmFan(inclusion.source, list(cone_map.values()), data)
    hom = validate_hom(inclusion, contracted, fan)
    assert isinstance(hom, KmFanHom)
    return contracted, hom


def is_simplicial(fan: KmFan) -> bool:
    return all(c.is_simplicial() for c in fan.cones)


def canonical_resolution(fan: KmFan) -> Tuple[KmFan, KmFanHom]:
    """Replace each datum by the sublattice spanned by its primitive ray points."""
    if not is_simplicial(fan):
        raise NotSimplicial("canonical resolution requires a simplicial fan")
    marking = {ray: ray_marking(fan, ray) for ray in fan.ray_cones()}
    data = {}
    for c in fan.cones:
        gens = [marking[ray] for ray in fan.ray_cones() if c.contains_cone(ray)]
        data[c] = LatticeDatum.from_generators(fan.group, gens)
    resolved = KmFan(fan.group, fan.cones, data)
    hom = validate_hom(GroupHom.identity(fan.group), resolved, fan)
    assert isinstance(hom, KmFanHom)
    return resolved, hom


def star(fan: KmFan, tau: Cone) -> KmFan:
    """The star fan of tau: the KM fan over N/F_tau on the cones containing tau."""
    if tau not in fan.data:
        raise ConeNotInFan(f"{tau!r} is not a cone of this fan")
    q, proj = quotient(fan.group, fan.data[tau].subgroup)
    pbar = proj.free_matrix()
    cones = []
    data = {}
    for sigma in fan.cones:
        if not sigma.contains_cone(tau):
            continue
        image = Cone.from_generators([pbar.apply(r) for r in sigma.rays], q.free_rank)
        cones.append(image)
        gens = [proj.apply(g) for g in fan.data[sigma].generators()]
        data[image] = LatticeDatum.from_generators(q, gens)
    return KmFan(q, cones, data)


class StratumInfo:
    """Invariants of the locally closed stratum attached to a cone."""

    __slots__ = ("cone", "torus_rank", "isotropy", "band")

    def __init__(self, cone: Cone, torus_rank: int, isotropy: FgaGroup, band: FgaGroup):
        self.cone = cone
        self.torus_rank = torus_rank
        self.isotropy = isotropy
        self.band = band

    def __repr__(self):
        return f"StratumInfo(cone={self.cone!r}, torus_rank={self.torus_rank}, isotropy={self.isotropy!r})"


def isotropy(fan: KmFan, sigma: Cone) -> FgaGroup:
    """The torsion subgroup of N/F_sigma."""
    if sigma not in fan.data:
        raise ConeNotInFan(f"{sigma!r} is not a cone of this fan")
    q, _ = quotient(fan.group, fan.data[sigma].subgroup)
    return FgaGroup(0, q.torsion)


def strata(fan: KmFan) -> List[StratumInfo]:
    out = []
    for c in fan.cones:
        q, _ = quotient(fan.group, fan.data[c].subgroup)
        iso = FgaGroup(0, q.torsion)
        out.append(StratumInfo(c, q.free_rank, iso, ext_group(iso)))
    return out


def fundamental_group(fan: KmFan) -> FgaGroup:
    """N modulo the subgroup generated by all lattice data."""
    total = Subgroup.trivial(fan.group)
    for c in fan.cones:
        total = total.sum(fan.data[c].subgroup)
    q, _ = quotient(fan.group, total)
    return q


def product(a: KmFan, b: KmFan) -> Tuple[KmFan, KmFanHom, KmFanHom]:
    """The product fan over N x N', with the two projections."""
    grp, inc1, inc2, proj1, proj2 = direct_sum(a.group, b.group)
    ra, rb = a.group.free_rank, b.group.free_rank
    cones = []
    data = {}
    for ca in a.cones:
        for cb in b.cones:
            rays = [r + (0,) * rb for r in ca.rays] + [(0,) * ra + r for r in cb.rays]
            c = Cone.from_generators(rays, ra + rb)
            cones.append(c)
            gens = [inc1.apply(g) for g in a.data[ca].generators()] + [
                inc2.apply(g) for g in b.data[cb].generators()
            ]
            data[c] = LatticeDatum.from_generators(grp, gens)
    prod = KmFan(grp, cones, data)
    p1 = validate_hom(proj1, prod, a)
    p2 = validate_hom(proj2, prod, b)
    assert isinstance(p1, KmFanHom) and isinstance(p2, KmFanHom)
    return prod, p1, p2


def atoroidal_split(fan: KmFan) -> Tuple[KmFan, FgaGroup, KmFanHom]:
    """Split off the torus factor: F isomorphic to G x zero_fan(B).

    G is atoroidal over the saturated subgroup generated by all lattice data,
    B = N/A is free, and the returned morphism is an isomorphism from
    product(G, zero_fan(B)) onto F determined by a chosen splitting.
    """
    n = fan.group
    total = Subgroup.trivial(n)
    for c in fan.cones:
        total = total.sum(fan.data[c].subgroup)
    q, proj = quotient(n, total)
    bgrp = FgaGroup(q.free_rank)
    free_proj = GroupHom(
        q,
        bgrp,
        IntMatrix(
            [[1 if i == j else 0 for j in range(q.ncoords)] for i in range(bgrp.ncoords)],
            cols=q.ncoords,
        ),
    )
    to_b = proj.then(free_proj)
    a_sub = kernel_subgroup(to_b)
    a_grp, incl = a_sub.as_group()
    inc_free = incl.free_matrix()
    cones = []
    data = {}
    for c in fan.cones:
        rays = []
        for r in c.rays:
            sol = solve_rational(inc_free, [Fraction(x) for x in r])
            if sol is None:
                raise KmFanError("internal: cone does not lie in the atoroidal part")
            rays.append(fraction_vector_to_primitive(sol))
        newc = Cone.from_generators(rays, a_grp.free_rank)
        cones.append(newc)
        gens = []
        for g in fan.data[c].generators():
            sol = solve_integer(incl.matrix.hstack(n.relation_matrix()), g)
            if sol is None:
                raise KmFanError("internal: datum generator outside the atoroidal subgroup")
            gens.append(a_grp.reduce(sol[: a_grp.ncoords]))
        data[newc] = LatticeDatum.from_generators(a_grp, gens)
    g_fan = KmFan(a_grp, cones, data)

    # a splitting N = A + s(B): lift each basis vector of B through N -> B
    section_cols = []
    for j in range(bgrp.ncoords):
        e = tuple(1 if i == j else 0 for i in range(bgrp.ncoords))
        sol = solve_integer(to_b.matrix, e)
        if sol is None:
            raise KmFanError("internal: projection to the torus factor is not split")
        section_cols.append(sol)
    section = IntMatrix.from_columns(section_cols, rows=n.ncoords)

    prod, p1, p2 = product(g_fan, zero_fan(bgrp))
    iso_matrix = _matrix_add(incl.matrix @ p1.hom.matrix, section @ p2.hom.matrix)
    iso = validate_hom(GroupHom(prod.group, n, iso_matrix), prod, fan)
    if not isinstance(iso, KmFanHom) or not is_isomorphism(iso.hom):
        raise KmFanError("internal: atoroidal splitting failed to produce an isomorphism")
    return g_fan, bgrp, iso


def _matrix_add(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.rows != b.rows or a.cols != b.cols:
        raise KmFanError("matrix shapes differ")
    return IntMatrix(
        [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)],
        cols=a.cols,
    )


# ---------------------------------------------------------------------------
# Support, liftings, local presentation
# ---------------------------------------------------------------------------


def support_contains(fan: KmFan, element: Sequence[int]) -> bool:
    """Membership in the fine support: union of F_sigma cap sigma."""
    n = fan.group.reduce(element)
    free = n[: fan.group.free_rank]
    for c in fan.cones:
        if c.contains_point(free) and fan.data[c].contains(n):
            return True
    return False


def coarse_support_contains(fan: KmFan, vector: Sequence[int]) -> bool:
    """Membership of a free-quotient vector in the union of the cones."""
    return any(c.contains_point(vector) for c in fan.cones)


def construct_lifting(fan: KmFan, sigma: Cone) -> Subgroup:
    """A lifting of F_sigma: L = F_sigma + (complement of N_sigma in N).

    L is a finite-index lattice in N with L cap Span(sigma) = F_sigma, and
    N/F_sigma -> N/L is an isomorphism on torsion subgroups.  The choice of
    complement is deterministic but otherwise arbitrary.
    """
    datum = fan.datum(sigma)
    n = fan.group
    span = sigma.span_lattice_basis()
    nsigma_gens = [
        tuple(col) + (0,) * len(n.torsion) for col in span.columns()
    ] + [
        (0,) * n.free_rank + tuple(1 if i == j else 0 for i in range(len(n.torsion)))
        for j in range(len(n.torsion))
    ]
    nsigma = Subgroup.from_generators(n, nsigma_gens)
    pres = present_quotient(n.ncoords, n.relation_matrix().hstack(nsigma.generator_matrix()))
    complement_cols = list(pres.section.columns()) if pres.group.ncoords else []
    gens = datum.generators() + [n.reduce(c) for c in complement_cols]
    lifting = Subgroup.from_generators(n, gens)
    if not lifting.is_lattice():
        raise KmFanError("internal: lifting is not a lattice")
    return lifting


def lifting_violations(fan: KmFan, sigma: Cone, lifting: Subgroup) -> List[str]:
    """Why a subgroup fails to be a lifting of F_sigma, if it does."""
    out = []
    n = fan.group
    if not lifting.is_lattice():
        out.append("lifting is not torsion-free")
        return out
    if lifting.rank() != n.free_rank:
        out.append("lifting does not have finite index")
        return out
    meet = _span_intersection(n, LatticeDatum(n, lifting), sigma)
    if meet != fan.datum(sigma).subgroup:
        out.append("lifting does not meet Span(sigma) in the lattice datum")
    return out


def compatible_lifting(f: KmFanHom, sigma: Cone, target_lifting: Subgroup) -> Subgroup:
    """A lifting L of F_sigma with f(L) inside the given lifting of F'_tau.

    When the induced map (N/F_sigma)_tor -> (N'/F'_tau)_tor is injective this
    is the full preimage f^{-1}(L'); otherwise the preimage is cut down by an
    independently constructed lifting.
    """
    tau = f.cone_images[sigma]
    problems = lifting_violations(f.target, tau, target_lifting)
    if problems:
        raise KmFanError("target lifting invalid: " + "; ".join(problems))
    ind = induced_quotient_hom(f, sigma)
    pre = preimage_subgroup(f.hom, target_lifting)
    if kernel_subgroup(ind).is_lattice():
        lifting = pre
    else:
        lifting = construct_lifting(f.source, sigma).intersection(pre)
    if lifting_violations(f.source, sigma, lifting):
        raise KmFanError("internal: constructed lifting is invalid")
    return lifting


def induced_quotient_hom(f: KmFanHom, sigma: Cone) -> GroupHom:
    """The induced map N/F_sigma -> N'/F'_tau for the minimal cone tau."""
    tau = f.cone_images[sigma]
    qs, ps = quotient(f.source.group, f.source.datum(sigma).subgroup)
    qt, pt = quotient(f.target.group, f.target.datum(tau).subgroup)
    cols = []
    aug = ps.matrix.hstack(qs.relation_matrix())
    for j in range(qs.ncoords):
        e = tuple(1 if i == j else 0 for i in range(qs.ncoords))
        sol = solve_integer(aug, e)
        if sol is None:
            raise KmFanError("internal: quotient projection is not surjective")
        x = sol[: f.source.group.ncoords]
        cols.append(pt.apply(f.hom.apply(f.source.group.reduce(x))))
    ind = GroupHom(qs, qt, IntMatrix.from_columns(cols, rows=qt.ncoords))
    if ps.then(ind) != f.hom.then(pt):
        raise KmFanError("internal: induced quotient map is inconsistent")
    return ind


class LocalPresentation:
    """Chart data at a cone: monoid, stabilizer, and the twisting character."""

    __slots__ = ("cone", "lifting", "monoid_generators", "stabilizer", "action")

    def __init__(self, cone, lifting, monoid_generators, stabilizer, action):
        self.cone = cone
        self.lifting = lifting
        self.monoid_generators = monoid_generators
        self.stabilizer = stabilizer
        self.action = action

    def __repr__(self):
        return (
            f"LocalPresentation(cone={self.cone!r}, stabilizer={self.stabilizer!r}, "
            f"monoid_generators={self.monoid_generators})"
        )


def local_presentation(fan: KmFan, sigma: Cone) -> LocalPresentation:
    """The quotient chart at sigma: Hilbert basis of S_sigma(L), the finite
    stabilizer E(N/L), and the character L^v -> E(N/L) defining the action.

    The character is the connecting map of the dualized sequence
    0 -> L -> N -> N/L -> 0.
    """
    lifting = construct_lifting(fan, sigma)
    n = fan.group
    basis = lifting.lattice_basis()              # n.ncoords x r
    fb = IntMatrix([basis.entries[i] for i in range(n.free_rank)], cols=basis.cols)
    # the cone in L-coordinates
    rays_l = [
        fraction_vector_to_primitive(solve_rational(fb, [Fraction(x) for x in r]))
        for r in sigma.rays
    ]
    sigma_l = Cone.from_generators(rays_l, basis.cols)
    monoid = AffineMonoid(sigma_l.dual())
    hb = monoid.hilbert_basis()

    # stabilizer and action: E(N/L) = Lambda^v / im(J^T) with Lambda the
    # preimage lattice of L and J its basis; the action sends phi in L^v to
    # the class of phi composed with (projection | Lambda) -> L
    j = lifting.preimage                          # n.ncoords x n.ncoords
    pres = present_quotient(j.cols, j.transpose())
    stabilizer = pres.group
    aug = basis.hstack(n.relation_matrix())
    pr_cols = []
    for col in j.columns():
        sol = solve_integer(aug, n.reduce(col))
        if sol is None:
            raise KmFanError("internal: preimage column is not in the lifting")
        pr_cols.append(sol[: basis.cols])
    pr = IntMatrix.from_columns(pr_cols, rows=basis.cols)   # Lambda -> L in bases
    action = GroupHom(dual_group(FgaGroup(basis.cols)), stabilizer, pres.proj @ pr.transpose())
    return LocalPresentation(sigma, lifting, hb, stabilizer, action)


# ---------------------------------------------------------------------------
# Predicates on fans and morphisms
# ---------------------------------------------------------------------------


def is_smooth(fan: KmFan) -> bool:
    """Every monoid P_sigma = sigma cap F_sigma is free."""
    for c in fan.cones:
        if not is_free_monoid(cone_monoid(fan, c)):
            return False
    return True


def cone_monoid(fan: KmFan, sigma: Cone) -> AffineMonoid:
    """P_sigma = sigma cap F_sigma as an affine monoid in datum coordinates."""
    datum = fan.datum(sigma)
    fb = datum.free_basis()
    rays_c = [
        fraction_vector_to_primitive(solve_rational(fb, [Fraction(x) for x in r]))
        for r in sigma.rays
    ]
    return AffineMonoid(Cone.from_generators(rays_c, datum.rank()))


def monoid_presentation(fan: KmFan) -> List[Tuple[Cone, List[Vec]]]:
    """Generators of each P_sigma = sigma cap F_sigma as elements of N."""
    out = []
    for c in fan.cones:
        datum = fan.data[c]
        basis = datum.basis()
        monoid = cone_monoid(fan, c)
        gens = [fan.group.reduce(basis.apply(h)) for h in monoid.hilbert_basis()]
        out.append((c, sorted(gens)))
    return out


def fan_from_monoids(group: FgaGroup, monoid_generators: Sequence[Sequence[Sequence[int]]]) -> KmFan:
    """Rebuild a KM fan from generators of its monoids P_sigma.

    Each generator list must generate a sharp saturated submonoid of N; the
    collection must be face-closed with pairwise intersections being faces.
    Violations raise InvalidFan.
    """
    r = group.free_rank
    cones = []
    data = {}
    for gens in monoid_generators:
        gens = [group.reduce(g) for g in gens]
        cone = Cone.from_generators([g[:r] for g in gens], r)
        datum = LatticeDatum.from_generators(group, gens)
        if cone in data:
            if data[cone] != datum:
                raise InvalidFan([{ "kind": "duplicate-cone", "detail": f"{cone!r} presented twice"}])
            continue
        problems = datum.violations(cone)
        if problems:
            raise InvalidFan([{"kind": "invalid-datum", "detail": p} for p in problems])
        _check_monoid_saturated(group, cone, datum, gens)
        cones.append(cone)
        data[cone] = datum
    fan = KmFan(group, cones, data)
    return fan


def _check_monoid_saturated(group, cone, datum, gens):
    """The supplied generators must generate all of sigma cap F_sigma."""
    basis = datum.basis()
    fb = datum.free_basis()
    coords = []
    aug = basis.hstack(group.relation_matrix())
    for g in gens:
        sol = solve_integer(aug, g)
        if sol is None:
            raise InvalidFan([{ "kind": "non-saturated-monoid",
                                "detail": "generator outside its own group"}])
        coords.append(sol[: basis.cols])
    rays_c = [
        fraction_vector_to_primitive(solve_rational(fb, [Fraction(x) for x in r]))
        for r in cone.rays
    ]
    full = AffineMonoid(Cone.from_generators(rays_c, datum.rank()))
    for h in full.hilbert_basis():
        if not _is_nonneg_combination(h, coords, full.cone):
            raise InvalidFan([{ "kind": "non-saturated-monoid",
                                "detail": f"monoid misses the lattice point {h}"}])


def _is_nonneg_combination(target: Vec, gens: List[Vec], cone: Cone) -> bool:
    """Greedy-with-backtracking membership in the generated submonoid."""
    seen = set()

    def search(t: Vec) -> bool:
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


def is_atoroidal(fan: KmFan) -> bool:
    all_rays = [r for c in fan.cones for r in c.rays]
    if fan.group.free_rank == 0:
        return True
    if not all_rays:
        return False
    return matrix_rank(IntMatrix(all_rays, cols=fan.group.free_rank)) == fan.group.free_rank


def is_nondegenerate(fan: KmFan) -> bool:
    return all(c.dim() == fan.group.free_rank for c in fan.maximal_cones())


def is_equidimensional(f: KmFanHom) -> bool:
    """Every cone's image f_R(sigma) is itself a cone of the target fan."""
    _require_finite_cokernel(f)
    fbar = f.hom.free_matrix()
    target_cones = set(f.target.cones)
    for sigma in f.source.cones:
        image = Cone.from_generators(
            [fbar.apply(r) for r in sigma.rays], f.target.group.free_rank
        )
        if image not in target_cones:
            return False
    return True


def has_reduced_fibers(f: KmFanHom) -> bool:
    """Every restriction F_sigma -> F'_{f(sigma)} is surjective.

    Only defined when the map is equidimensional.
    """
    _require_finite_cokernel(f)
    if not is_equidimensional(f):
        raise PreconditionsFail("reduced-fiber criterion requires an equidimensional map")
    fbar = f.hom.free_matrix()
    for sigma in f.source.cones:
        image = Cone.from_generators(
            [fbar.apply(r) for r in sigma.rays], f.target.group.free_rank
        )
        mapped = Subgroup.from_generators(
            f.target.group, [f.hom.apply(g) for g in f.source.datum(sigma).generators()]
        )
        if not mapped.contains_subgroup(f.target.datum(image).subgroup):
            return False
    return True


def _require_finite_cokernel(f: KmFanHom) -> None:
    _, cok, _ = hom_kernel_cokernel(f.hom)
    if not cok.is_finite():
        raise InfiniteCokernel("criterion requires a finite cokernel on groups")


def is_semi_tame(f: KmFanHom) -> bool:
    """Cone-set bijection with bijective restrictions on cones and data."""
    fbar = f.hom.free_matrix()
    images = []
    for sigma in f.source.cones:
        image = Cone.from_generators(
            [fbar.apply(r) for r in sigma.rays], f.target.group.free_rank
        )
        if image not in f.target.data:
            return False
        if image.dim() != sigma.dim():
            return False
        images.append(image)
        mapped = Subgroup.from_generators(
            f.target.group, [f.hom.apply(g) for g in f.source.datum(sigma).generators()]
        )
        if mapped != f.target.datum(image).subgroup:
            return False
    if len(set(images)) != len(f.source.cones):
        return False
    if set(images) != set(f.target.cones):
        return False
    return True


def is_tame(f: KmFanHom) -> bool:
    return is_semi_tame(f) and is_tame_hom(f.hom)


def torsor_group(f: KmFanHom) -> FgaGroup:
    """The group D(f) under which a tame map's realization is a torsor."""
    from .errors import NotTame

    if not is_tame(f):
        raise NotTame("torsor group is defined for tame maps only")
    return dd_of_hom(f.hom).group


def is_representable(f: KmFanHom) -> bool:
    """Torsion-injectivity of every induced map N/F_sigma -> N'/F'_tau."""
    for sigma in f.source.cones:
        ind = induced_quotient_hom(f, sigma)
        if not kernel_subgroup(ind).is_lattice():
            return False
    return True


def is_proper(f: KmFanHom) -> bool:
    """Support criterion: the preimage of the coarse support equals the
    coarse support, checked cone by cone on maximal target cones."""
    fbar = f.hom.free_matrix()
    for tau in f.target.maximal_cones():
        target_cone = tau.preimage(fbar)
        pieces = [
            sigma
            for sigma in f.source.cones
            if all(tau.contains_point(fbar.apply(r)) for r in sigma.rays)
        ]
        if not union_covers(target_cone, pieces):
            return False
    return True
