"""GS fans, foldability, folding, and the unfolding universal constructions.

A GS fan is a classical fan in a lattice L plus a finite-cokernel lattice map
beta : L -> N.  Folding turns a foldable GS fan into a lattice KM fan;
unfolding builds, over the colimit of all lattice data, the universal
semi-tame cover of a KM fan.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .abelian import (
    FgaGroup,
    GroupHom,
    hom_kernel_cokernel,
    present_quotient,
)
from .cones import Cone
from .errors import KmFanError, NonLattice, NotFoldable, PreconditionsFail
from .fans import (
    KmFan,
    KmFanHom,
    LatticeDatum,
    atoroidal_split,
    is_atoroidal,
    is_classical,
    rigidify,
    validate_hom,
)
from .intlinalg import (
    IntMatrix,
    Vec,
    fraction_vector_to_primitive,
    solve_integer,
    solve_rational,
)


class GsFan:
    """A classical fan in a lattice L with a finite-cokernel map beta: L -> N."""

    __slots__ = ("fan", "beta")

    def __init__(self, fan: KmFan, beta: GroupHom):
        if not is_classical(fan):
            raise KmFanError("the fan of a GS fan must be classical")
        if beta.source != fan.group:
            raise KmFanError("beta must start at the fan's lattice")
        if not beta.target.is_lattice():
            raise NonLattice("beta must land in a lattice")
        _, cok, _ = hom_kernel_cokernel(beta)
        if not cok.is_finite():
            raise KmFanError("beta must have finite cokernel")
        object.__setattr__(self, "fan", fan)
        object.__setattr__(self, "beta", beta)

    def __setattr__(self, *args):
        raise AttributeError("GsFan is immutable")

    def __repr__(self):
        return f"GsFan(L={self.fan.group!r}, N={self.beta.target!r})"


def is_foldable(gs: GsFan) -> Tuple[bool, List[dict]]:
    """Foldability: beta injective on every cone span, image interiors disjoint."""
    problems: List[dict] = []
    bbar = gs.beta.free_matrix()
    images: Dict[Cone, Cone] = {}
    for sigma in gs.fan.cones:
        image = Cone.from_generators([bbar.apply(r) for r in sigma.rays], gs.beta.target.free_rank)
        images[sigma] = image
        if image.dim() != sigma.dim():
            problems.append({
                "kind": "collapsed-cone",
                "detail": f"beta is not injective on the span of {sigma!r}",
            })
    cones = list(gs.fan.cones)
    for i, a in enumerate(cones):
        for b in cones[i + 1:]:
            ia, ib = images[a], images[b]
            meet = ia.intersect(ib)
            point = meet.relative_interior_point()
            if (
                ia.classify_point(point)[0] == "interior"
                and ib.classify_point(point)[0] == "interior"
            ):
                problems.append({
                    "kind": "overlapping-images",
                    "detail": f"images of {a!r} and {b!r} have intersecting interiors",
                })
    return (not problems, problems)


def fold(gs: GsFan) -> Tuple[KmFan, KmFanHom]:
    """The folding: the lattice KM fan (N, {beta(sigma)}, {beta(L_sigma)}).

    The returned morphism beta : F -> fold(F, beta) is tame.
    """
    ok, problems = is_foldable(gs)
    if not ok:
        raise NotFoldable("; ".join(p["detail"] for p in problems))
    n = gs.beta.target
    bbar = gs.beta.free_matrix()
    cones = []
    data: Dict[Cone, LatticeDatum] = {}
    for sigma in gs.fan.cones:
        image = Cone.from_generators([bbar.apply(r) for r in sigma.rays], n.free_rank)
        gens = [gs.beta.apply(g) for g in gs.fan.data[sigma].generators()]
        datum = LatticeDatum.from_generators(n, gens)
        if image in data and data[image] != datum:
            raise NotFoldable("inconsistent lattice data on a folded cone")
        cones.append(image)
        data[image] = datum
    folded = KmFan(n, cones, data)
    hom = validate_hom(gs.beta, gs.fan, folded)
    assert isinstance(hom, KmFanHom)
    return folded, hom


class Unfolding:
    """The colimit of the lattice data with its structure maps.

    colimit: the group Ltilde in normal form.
    structure_maps: for each cone sigma, the map F_sigma -> Ltilde on the
    canonical basis of the lattice datum (source Z^{rank F_sigma}).
    beta: the induced map Ltilde -> N with beta o i_sigma the inclusion.
    fan: the KM fan over Ltilde, filled in by unfold().
    block_offsets/presentation: the block layout of the defining quotient of
    the direct sum of all lattice data, for callers composing colimits.
    """

    __slots__ = ("colimit", "structure_maps", "beta", "fan", "block_offsets", "presentation")

    def __init__(self, colimit: FgaGroup, structure_maps: Dict[Cone, GroupHom], beta: GroupHom,
                 block_offsets=None, presentation=None):
        self.colimit = colimit
        self.structure_maps = dict(structure_maps)
        self.beta = beta
        self.fan = None
        self.block_offsets = dict(block_offsets or {})
        self.presentation = presentation


def lattice_data_colimit(fan: KmFan) -> Unfolding:
    """Colimit of {F_sigma} over the face relations, with structure maps.

    Presented as the cokernel of the map sending a generator g of F_tau, for
    each comparable pair tau < sigma, to (g in sigma-block) - (g in
    tau-block).  Using all comparable pairs (not only facet pairs) adds only
    redundant relations.
    """
    blocks: List[Tuple[Cone, IntMatrix]] = []
    offsets: Dict[Cone, int] = {}
    total = 0
    for c in fan.cones:
        basis = fan.data[c].basis()
        offsets[c] = total
        blocks.append((c, basis))
        total += basis.cols

    def coords_in(sigma: Cone, element: Vec) -> Vec:
        basis = fan.data[sigma].basis()
        aug = basis.hstack(fan.group.relation_matrix())
        sol = solve_integer(aug, element)
        if sol is None:
            raise KmFanError("internal: datum element outside a larger datum")
        return sol[: basis.cols]

    rel_cols: List[Vec] = []
    for tau in fan.cones:
        tau_basis = fan.data[tau].basis()
        for sigma in fan.cones:
            if sigma == tau or not sigma.contains_cone(tau):
                continue
            if not tau.is_face_of(sigma):
                continue
            for j in range(tau_basis.cols):
                g = fan.group.reduce(tau_basis.column(j))
                col = [0] * total
                for i, x in enumerate(coords_in(sigma, g)):
                    col[offsets[sigma] + i] += x
                col[offsets[tau] + j] -= 1
                rel_cols.append(tuple(col))

    pres = present_quotient(total, IntMatrix.from_columns(rel_cols, rows=total))
    colimit = pres.group
    structure: Dict[Cone, GroupHom] = {}
    for c, basis in blocks:
        cols = []
        for j in range(basis.cols):
            e = [0] * total
            e[offsets[c] + j] = 1
            cols.append(pres.to_normal(e))
        structure[c] = GroupHom(
            FgaGroup(basis.cols), colimit, IntMatrix.from_columns(cols, rows=colimit.ncoords)
        )
    # beta: send each block generator to the corresponding element of N
    beta_cols = []
    for c, basis in blocks:
        for j in range(basis.cols):
            beta_cols.append(fan.group.reduce(basis.column(j)))
    beta_on_blocks = IntMatrix.from_columns(beta_cols, rows=fan.group.ncoords)
    beta = GroupHom(colimit, fan.group, beta_on_blocks @ pres.section)
    # sanity: beta o i_sigma is the inclusion F_sigma -> N, generator by generator
    for c, basis in blocks:
        comp = structure[c].then(beta)
        for j in range(basis.cols):
            e = tuple(1 if i == j else 0 for i in range(basis.cols))
            if comp.apply(e) != fan.group.reduce(basis.column(j)):
                raise KmFanError("internal: colimit structure map is inconsistent")
    return Unfolding(colimit, structure, beta, block_offsets=offsets, presentation=pres)


def induced_colimit_map(sub: Unfolding, sup: Unfolding) -> GroupHom:
    """The map of colimits induced by an inclusion of sub-KM-fans.

    Every cone of the sub-unfolding must appear, with the same lattice datum,
    in the super-unfolding.
    """
    total_sup = sup.presentation.proj.cols
    cols = []
    for j in range(sub.colimit.ncoords):
        e = tuple(1 if i == j else 0 for i in range(sub.colimit.ncoords))
        lifted = sub.presentation.lift(e)
        big = [0] * total_sup
        for cone, off in sub.block_offsets.items():
            if cone not in sup.block_offsets:
                raise KmFanError("sub-fan cone missing from the larger fan")
            width = sub.structure_maps[cone].source.ncoords
            sup_off = sup.block_offsets[cone]
            for i in range(width):
                big[sup_off + i] += lifted[off + i]
        cols.append(sup.presentation.to_normal(big))
    return GroupHom(
        sub.colimit, sup.colimit, IntMatrix.from_columns(cols, rows=sup.colimit.ncoords)
    )


def unfold(fan: KmFan) -> Tuple[KmFan, KmFanHom, Unfolding]:
    """The unfolding: the KM fan over the lattice-data colimit.

    Cones are the images i(sigma), with lattice data i_sigma(F_sigma); the
    induced map back to the fan is semi-tame, and tame when the fan is
    atoroidal and the colimit map has torsion-free kernel.
    """
    unf = lattice_data_colimit(fan)
    lt = unf.colimit
    cones = []
    data: Dict[Cone, LatticeDatum] = {}
    for sigma in fan.cones:
        datum = fan.data[sigma]
        basis = datum.basis()
        imap = unf.structure_maps[sigma]
        # sigma in datum coordinates -> rays in the colimit's free quotient
        fb = datum.free_basis()
        rays_c = [
            fraction_vector_to_primitive(solve_rational(fb, [Fraction(x) for x in r]))
            for r in sigma.rays
        ]
        ibar = imap.free_matrix()
        image = Cone.from_generators([ibar.apply(r) for r in rays_c], lt.free_rank)
        gens = [imap.apply(tuple(1 if i == j else 0 for i in range(basis.cols)))
                for j in range(basis.cols)]
        if image in data:
            raise KmFanError("internal: unfolding produced a duplicate cone")
        cones.append(image)
        data[image] = LatticeDatum.from_generators(lt, gens)
    unfolded = KmFan(lt, cones, data)
    unf.fan = unfolded
    hom = validate_hom(unf.beta, unfolded, fan)
    assert isinstance(hom, KmFanHom)
    return unfolded, hom, unf


def rigidified_unfold(fan: KmFan) -> Tuple[KmFan, Optional[KmFanHom]]:
    """The rigidification of the unfolding.

    When the fan's group is a lattice the induced map back to the fan exists
    and is returned; otherwise the map does not factor and None is returned.
    """
    unfolded, hom, unf = unfold(fan)
    rig, q = rigidify(unfolded)
    if not fan.group.is_lattice():
        return rig, None
    # beta kills the colimit torsion (it lands in a lattice), so it factors
    lt = unf.colimit
    r = lt.free_rank
    bbar_cols = [unf.beta.apply(tuple(1 if i == j else 0 for i in range(lt.ncoords)))
                 for j in range(r)]
    betabar = GroupHom(rig.group, fan.group, IntMatrix.from_columns(bbar_cols, rows=fan.group.ncoords))
    result = validate_hom(betabar, rig, fan)
    if not isinstance(result, KmFanHom):
        raise KmFanError("internal: rigidified unfolding map failed to validate")
    return rig, result


def is_gs_representable(fan: KmFan) -> bool:
    """Whether a lattice KM fan is the folding of a GS fan.

    Split off the torus factor, then test on the atoroidal part whether every
    structure map into the rigidified colimit has torsion-free cokernel
    (equivalently, is saturated).
    """
    if not fan.group.is_lattice():
        raise NonLattice("the test is defined for lattice KM fans")
    g_fan, _, _ = atoroidal_split(fan)
    unf = lattice_data_colimit(g_fan)
    lt = unf.colimit
    lt_bar = FgaGroup(lt.free_rank)
    to_free = GroupHom(
        lt,
        lt_bar,
        IntMatrix(
            [[1 if i == j else 0 for j in range(lt.ncoords)] for i in range(lt_bar.ncoords)],
            cols=lt.ncoords,
        ),
    )
    for c in g_fan.cones:
        ibar = unf.structure_maps[c].then(to_free)
        _, cok, _ = hom_kernel_cokernel(ibar)
        if cok.torsion:
            return False
    return True


def fold_unfold_roundtrip(fan: KmFan) -> bool:
    """Fold the rigidified unfolding back and compare with the fan itself.

    Requires a lattice, atoroidal, GS-representable KM fan.
    """
    if not fan.group.is_lattice():
        raise PreconditionsFail("round trip requires a lattice KM fan")
    if not is_atoroidal(fan):
        raise PreconditionsFail("round trip requires an atoroidal fan")
    if not is_gs_representable(fan):
        raise PreconditionsFail("round trip requires a GS-representable fan")
    rig, betabar = rigidified_unfold(fan)
    assert betabar is not None
    gs = GsFan(rig, betabar.hom)
    folded, _ = fold(gs)
    return folded == fan
