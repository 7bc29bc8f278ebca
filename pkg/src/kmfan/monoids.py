"""Affine monoids of lattice points: Hilbert bases, faces, kernel submonoids.

An AffineMonoid is the set of integer points of a rational polyhedral cone.
Such monoids are automatically fine and saturated.  The Hilbert basis
computation splits off the unit group, triangulates the sharp part, and
enumerates the fundamental parallelepiped of each simplicial piece.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import floor
from typing import List, Sequence, Tuple

from .abelian import FgaGroup, GroupHom
from .cones import Cone
from .errors import KmFanError, NotAFace, NotSharp
from .intlinalg import (
    IntMatrix,
    Vec,
    fraction_vector_to_primitive,
    kernel_basis,
    smith_decomposition,
    solve_integer,
    solve_rational,
)


class AffineMonoid:
    """The monoid cone cap Z^r for a rational polyhedral cone."""

    __slots__ = ("cone", "ambient_lattice_rank", "_hilbert", "_lock")

    def __init__(self, cone: Cone):
        object.__setattr__(self, "cone", cone)
        object.__setattr__(self, "ambient_lattice_rank", cone.ambient_rank)
        object.__setattr__(self, "_hilbert", None)
        object.__setattr__(self, "_lock", threading.Lock())

    def __setattr__(self, *args):
        raise AttributeError("AffineMonoid is immutable")

    @property
    def unit_basis(self) -> Tuple[Vec, ...]:
        """Basis of the unit group: the lineality lattice of the cone."""
        return self.cone.lineality

    def contains(self, vector: Sequence[int]) -> bool:
        return self.cone.contains_point(vector)

    def is_sharp(self) -> bool:
        return self.cone.is_sharp()

    def gp_basis(self) -> IntMatrix:
        """Canonical basis of the group generated by the monoid.

        For a saturated monoid this is Span(cone) cap Z^r.
        """
        return self.cone.span_lattice_basis()

    def gp_rank(self) -> int:
        return self.gp_basis().cols

    def hilbert_basis(self) -> List[Vec]:
        """Minimal generating set of the sharp quotient plus +-units.

        Returns the irreducible elements of the sharp part (sorted), followed
        by u, -u for each unit basis vector u.
        """
        with self._lock:
            if self._hilbert is None:
                object.__setattr__(self, "_hilbert", self._compute_hilbert())
        return list(self._hilbert)

    def generators(self) -> List[Vec]:
        return self.hilbert_basis()

    def _compute_hilbert(self) -> Tuple[Vec, ...]:
        cone = self.cone
        units = list(cone.lineality)
        if not cone.rays:
            sharp_part: List[Vec] = []
        elif units:
            proj, embed = _split_off_units(units, cone.ambient_rank)
            image = Cone.from_generators([proj(r) for r in cone.rays], len(proj((0,) * cone.ambient_rank)))
            sharp = _sharp_hilbert_basis(image)
            sharp_part = [embed(v) for v in sharp]
        else:
            sharp_part = _sharp_hilbert_basis(cone)
        out = sorted(sharp_part)
        for u in units:
            out.append(u)
            out.append(tuple(-x for x in u))
        return tuple(out)

    def __eq__(self, other):
        return isinstance(other, AffineMonoid) and self.cone == other.cone

    def __hash__(self):
        return hash(self.cone)

    def __repr__(self):
        return f"AffineMonoid({self.cone!r})"


def _split_off_units(units: Sequence[Vec], ambient: int):
    """Coordinates on a canonical complement of the (saturated) unit lattice."""
    lin = IntMatrix.from_columns(units, rows=ambient)
    s = smith_decomposition(lin)
    comp_cols = [s.u_inv.column(i) for i in range(s.rank(), ambient)]
    comp = IntMatrix.from_columns(comp_cols, rows=ambient)
    full = lin.hstack(comp)

    def proj(v: Sequence[int]) -> Vec:
        sol = solve_integer(full, v)
        if sol is None:
            raise KmFanError("internal: vector outside the ambient lattice split")
        return tuple(sol[lin.cols:])

    def embed(v: Sequence[int]) -> Vec:
        return comp.apply(v)

    return proj, embed


def _sharp_hilbert_basis(cone: Cone) -> List[Vec]:
    """Hilbert basis of a sharp cone's monoid of lattice points."""
    if not cone.rays:
        return []
    candidates = set(cone.rays)
    for simplex in _pulling_triangulation(cone):
        candidates.update(_parallelepiped_points(simplex, cone.ambient_rank))
    candidates.discard((0,) * cone.ambient_rank)
    # strictly positive grading: sum of the dual cone's extremal rays
    dual = cone.dual()
    weight = tuple(sum(r[i] for r in dual.rays) for i in range(cone.ambient_rank))

    def grade(v: Vec) -> int:
        return sum(w * x for w, x in zip(weight, v))

    ordered = sorted(candidates, key=lambda v: (grade(v), v))
    kept: List[Vec] = []
    for v in ordered:
        reducible = False
        for h in kept:
            diff = tuple(a - b for a, b in zip(v, h))
            if any(diff) and cone.contains_point(diff):
                reducible = True
                break
        if not reducible:
            kept.append(v)
    return kept


def _pulling_triangulation(cone: Cone) -> List[Tuple[Vec, ...]]:
    """Triangulate a sharp cone into simplicial subcones on its extremal rays."""
    rays = cone.rays
    if len(rays) == cone.dim():
        return [rays]
    v = rays[0]
    out = []
    for facet in cone.facet_cones():
        if v in facet.rays:
            continue
        for simplex in _pulling_triangulation(facet):
            out.append((v,) + simplex)
    return out


def _parallelepiped_points(simplex: Sequence[Vec], ambient: int) -> List[Vec]:
    """Lattice points in the half-open parallelepiped of independent vectors."""
    from .intlinalg import saturate

    vmat = IntMatrix.from_columns(simplex, rows=ambient)
    span = saturate(vmat)
    d = span.cols
    # simplex vectors in span coordinates: a d x d nonsingular matrix
    vcols = []
    for j in range(vmat.cols):
        sol = solve_integer(span, vmat.column(j))
        if sol is None:
            raise KmFanError("internal: ray not in its own span lattice")
        vcols.append(sol)
    vs = IntMatrix.from_columns(vcols, rows=d)
    s = smith_decomposition(vs)
    diag = s.diagonal()
    reps = [()]
    for di in diag:
        reps = [r + (t,) for r in reps for t in range(abs(di))]
    points = []
    for rep in reps:
        z = s.u_inv.apply(rep)
        t = solve_rational(vs, [Fraction(x) for x in z])
        frac = [x - floor(x) for x in t]
        inside = _exact_int_product(vs, frac)
        points.append(tuple(span.apply(inside)))
    return points


def _exact_int_product(m: IntMatrix, frac: Sequence[Fraction]) -> Vec:
    """Evaluate m @ frac exactly; the result must be integral."""
    out = []
    for i in range(m.rows):
        val = sum(Fraction(m.entries[i][j]) * frac[j] for j in range(m.cols))
        if val.denominator != 1:
            raise KmFanError("internal: parallelepiped point is not integral")
        out.append(int(val))
    return tuple(out)


# ---------------------------------------------------------------------------
# Operation spellings
# ---------------------------------------------------------------------------


def dual_monoid(sigma: Cone, lattice_rank: int) -> AffineMonoid:
    """The monoid of integer points of the dual cone of sigma."""
    if sigma.ambient_rank != lattice_rank:
        raise KmFanError("cone rank does not match the lattice rank")
    return AffineMonoid(sigma.dual())


def hilbert_basis(monoid: AffineMonoid) -> List[Vec]:
    return monoid.hilbert_basis()


def face_of_monoid(monoid: AffineMonoid, tau: Cone) -> AffineMonoid:
    """The face of the monoid consisting of elements vanishing on tau.

    tau must be a face of the primal cone (the dual of the monoid's cone).
    """
    primal = monoid.cone.dual()
    if not tau.is_face_of(primal):
        raise NotAFace("tau is not a face of the primal cone")
    ortho = Cone.from_halfspaces(
        [], list(tau.rays) + list(tau.lineality), monoid.ambient_lattice_rank
    )
    return AffineMonoid(monoid.cone.intersect(ortho))


def kernel_submonoid(monoid: AffineMonoid, a: GroupHom) -> List[Vec]:
    """Generators of {p in monoid : a(p) = 0} for a character into a finite group.

    The character is given on the canonical gp basis of the monoid (see
    AffineMonoid.gp_basis); generators are returned in ambient coordinates.
    """
    if not a.target.is_finite():
        raise KmFanError("character target must be finite")
    gp = monoid.gp_basis()
    t = gp.cols
    if a.source != FgaGroup(t):
        raise KmFanError("character must be defined on the monoid's group")
    if t == 0:
        return []
    # kernel lattice of a inside Z^t (finite index)
    lifted = kernel_basis(a.matrix.hstack(a.target.relation_matrix()))
    kmat = IntMatrix([lifted.entries[i] for i in range(t)], cols=lifted.cols)
    from .intlinalg import hermite_column_basis

    kmat = hermite_column_basis(kmat)
    # rewrite the cone in kernel-lattice coordinates
    def to_k_coords(v: Sequence[int]) -> Vec:
        g = solve_rational(gp, [Fraction(x) for x in v])
        if g is None:
            raise KmFanError("internal: cone generator outside the monoid span")
        y = solve_rational(kmat, list(g))
        if y is None:
            raise KmFanError("internal: kernel lattice does not span")
        return fraction_vector_to_primitive(y)

    gens = [to_k_coords(g) for g in monoid.cone.generators()]
    kcone = Cone.from_generators(gens, kmat.cols)
    khb = AffineMonoid(kcone).hilbert_basis()
    return [tuple(gp.apply(kmat.apply(v))) for v in khb]


def is_free_monoid(monoid: AffineMonoid) -> bool:
    """Whether a sharp monoid is free (isomorphic to N^n)."""
    if not monoid.is_sharp():
        raise NotSharp("freeness is defined for sharp monoids")
    hb = monoid.hilbert_basis()
    t = monoid.gp_rank()
    if len(hb) != t:
        return False
    if t == 0:
        return True
    gp = monoid.gp_basis()
    cols = []
    for v in hb:
        sol = solve_integer(gp, v)
        if sol is None:
            return False
        cols.append(sol)
    m = IntMatrix.from_columns(cols, rows=t)
    diag = smith_decomposition(m).diagonal()
    return all(abs(x) == 1 for x in diag)
