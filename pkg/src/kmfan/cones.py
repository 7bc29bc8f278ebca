"""Rational polyhedral cones in Z^r with exact double-description conversion.

Cones are stored in a canonical form: primitive extremal ray representatives
(reduced against a canonical complement of the lineality lattice and sorted),
a canonical lineality basis, and derived facet inequalities and span
equations.  Two cones are equal as point sets iff their fields are equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import DimensionMismatch, PieceOutsideTarget
from .intlinalg import (
    IntMatrix,
    Vec,
    fraction_vector_to_primitive,
    hermite_column_basis,
    kernel_basis,
    primitive_vector,
    rank as matrix_rank,
    solve_rational,
)


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _rank_of_vectors(vectors: Sequence[Sequence[int]], ambient: int) -> int:
    if not vectors:
        return 0
    return matrix_rank(IntMatrix(vectors, cols=ambient))


def _halfspace_intersection(ambient: int, inequalities: Sequence[Vec]):
    """V-description (rays, lineality) of {x : <g, x> >= 0 for all g}.

    Incremental double description with exact extremality filtering: a
    candidate ray is extremal iff its active constraints have rank
    ambient - dim(lineality) - 1.
    """
    rays: List[Vec] = []
    lin: List[Vec] = [tuple(1 if j == i else 0 for j in range(ambient)) for i in range(ambient)]
    processed: List[Vec] = []

    for g in inequalities:
        g = primitive_vector(g)
        if not any(g):
            continue
        pivot_idx = next((i for i, l in enumerate(lin) if _dot(l, g) != 0), None)
        if pivot_idx is not None:
            l0 = lin[pivot_idx]
            p0 = _dot(l0, g)
            if p0 < 0:
                l0 = tuple(-x for x in l0)
                p0 = -p0
            new_lin = []
            for i, l in enumerate(lin):
                if i == pivot_idx:
                    continue
                p = _dot(l, g)
                if p == 0:
                    new_lin.append(l)
                else:
                    new_lin.append(primitive_vector(tuple(p0 * a - p * b for a, b in zip(l, l0))))
            lin = _canonical_lattice_basis([l for l in new_lin if any(l)], ambient)
            rays = [
                primitive_vector(tuple(p0 * a - _dot(r, g) * b for a, b in zip(r, l0)))
                for r in rays
            ]
            rays = _dedupe(rays + [l0])
        else:
            plus = [r for r in rays if _dot(r, g) > 0]
            zero = [r for r in rays if _dot(r, g) == 0]
            minus = [r for r in rays if _dot(r, g) < 0]
            if minus:
                combos = []
                for p in plus:
                    wp = _dot(p, g)
                    for m in minus:
                        wm = _dot(m, g)
                        combos.append(primitive_vector(tuple(wp * a - wm * b for a, b in zip(m, p))))
                candidates = _dedupe(combos)
                active_consts = processed + [g]
                lin_dim = len(lin)
                kept = []
                for w in candidates:
                    if not any(w):
                        continue
                    active = [h for h in active_consts if _dot(h, w) == 0]
                    if _rank_of_vectors(active, ambient) == ambient - lin_dim - 1:
                        kept.append(w)
                rays = _dedupe(plus + zero + kept)
        processed.append(g)

    return rays, lin, processed


def _canonical_lattice_basis(vectors: Sequence[Vec], ambient: int) -> List[Vec]:
    if not vectors:
        return []
    h = hermite_column_basis(IntMatrix.from_columns(vectors, rows=ambient))
    return list(h.columns())


def _dedupe(vectors: Iterable[Vec]) -> List[Vec]:
    seen = set()
    out = []
    for v in vectors:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


class Cone:
    """A rational polyhedral cone in canonical form."""

    __slots__ = ("ambient_rank", "rays", "lineality", "facets", "equations", "_faces")

    def __init__(self, ambient_rank, rays, lineality, facets, equations):
        object.__setattr__(self, "ambient_rank", ambient_rank)
        object.__setattr__(self, "rays", tuple(rays))
        object.__setattr__(self, "lineality", tuple(lineality))
        object.__setattr__(self, "facets", tuple(facets))
        object.__setattr__(self, "equations", tuple(equations))
        object.__setattr__(self, "_faces", None)

    def __setattr__(self, *args):
        raise AttributeError("Cone is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_generators(generators: Iterable[Sequence[int]], ambient_rank: int) -> "Cone":
        gens = [tuple(int(x) for x in g) for g in generators]
        for g in gens:
            if len(g) != ambient_rank:
                raise DimensionMismatch("generator has wrong length")
        gens = [g for g in gens if any(g)]
        # dual description: the dual cone, as inequalities/equations of self
        dual_rays, dual_lin, _ = _halfspace_intersection(ambient_rank, gens)
        equations = _canonical_lattice_basis(dual_lin, ambient_rank)
        facets = _reduce_mod_lattice(dual_rays, equations, ambient_rank)
        # lineality of the primal: common kernel of facets and equations
        constraints = facets + equations
        if constraints:
            lin_mat = kernel_basis(IntMatrix(constraints, cols=ambient_rank))
            lineality = _canonical_lattice_basis(list(lin_mat.columns()), ambient_rank)
        else:
            lineality = _canonical_lattice_basis(
                [tuple(1 if j == i else 0 for j in range(ambient_rank)) for i in range(ambient_rank)],
                ambient_rank,
            )
        rays = _canonical_rays(gens, facets, equations, lineality, ambient_rank)
        return Cone(ambient_rank, rays, lineality, facets, equations)

    @staticmethod
    def from_halfspaces(
        inequalities: Iterable[Sequence[int]],
        equations: Iterable[Sequence[int]],
        ambient_rank: int,
    ) -> "Cone":
        ineqs = [tuple(int(x) for x in v) for v in inequalities]
        eqs = [tuple(int(x) for x in v) for v in equations]
        constraints = list(ineqs)
        for e in eqs:
            constraints.append(e)
            constraints.append(tuple(-x for x in e))
        rays, lin, _ = _halfspace_intersection(ambient_rank, constraints)
        gens = rays + lin + [tuple(-x for x in l) for l in lin]
        return Cone.from_generators(gens, ambient_rank)

    @staticmethod
    def zero(ambient_rank: int) -> "Cone":
        return Cone.from_generators([], ambient_rank)

    @staticmethod
    def full(ambient_rank: int) -> "Cone":
        basis = [tuple(1 if j == i else 0 for j in range(ambient_rank)) for i in range(ambient_rank)]
        return Cone.from_generators(basis + [tuple(-x for x in b) for b in basis], ambient_rank)

    @staticmethod
    def ray(vector: Sequence[int]) -> "Cone":
        return Cone.from_generators([vector], len(vector))

    # -- basic predicates -------------------------------------------------

    def dim(self) -> int:
        return _rank_of_vectors(list(self.rays) + list(self.lineality), self.ambient_rank)

    def is_sharp(self) -> bool:
        return not self.lineality

    def is_zero(self) -> bool:
        return not self.rays and not self.lineality

    def is_simplicial(self) -> bool:
        return self.is_sharp() and len(self.rays) == self.dim()

    def generators(self) -> List[Vec]:
        return list(self.rays) + list(self.lineality) + [
            tuple(-x for x in l) for l in self.lineality
        ]

    def __eq__(self, other):
        return (
            isinstance(other, Cone)
            and self.ambient_rank == other.ambient_rank
            and self.rays == other.rays
            and self.lineality == other.lineality
        )

    def __hash__(self):
        return hash((self.ambient_rank, self.rays, self.lineality))

    def __repr__(self):
        if self.lineality:
            return f"Cone(rays={list(self.rays)}, lineality={list(self.lineality)})"
        return f"Cone(rays={list(self.rays)})"

    # -- membership ------------------------------------------------------

    def contains_point(self, vector: Sequence) -> bool:
        if len(vector) != self.ambient_rank:
            raise DimensionMismatch("point has wrong length")
        return all(_dot(e, vector) == 0 for e in self.equations) and all(
            _dot(h, vector) >= 0 for h in self.facets
        )

    def classify_point(self, vector: Sequence):
        """Classify a rational point: ('outside', None), ('interior', None),
        or ('boundary', face) with the unique face holding it in its relative
        interior."""
        if len(vector) != self.ambient_rank:
            raise DimensionMismatch("point has wrong length")
        if not self.contains_point(vector):
            return ("outside", None)
        active = [h for h in self.facets if _dot(h, vector) == 0]
        if not active:
            return ("interior", None)
        keep = [r for r in self.rays if all(_dot(h, r) == 0 for h in active)]
        face = Cone.from_generators(
            keep + list(self.lineality) + [tuple(-x for x in l) for l in self.lineality],
            self.ambient_rank,
        )
        return ("boundary", face)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains_point(g) for g in other.generators())

    def relative_interior_point(self) -> Vec:
        """An integer point in the relative interior (the sum of the rays)."""
        if not self.rays:
            return (0,) * self.ambient_rank
        return tuple(sum(r[i] for r in self.rays) for i in range(self.ambient_rank))

    # -- structure ---------------------------------------------------------

    def dual(self) -> "Cone":
        gens = list(self.facets) + list(self.equations) + [
            tuple(-x for x in e) for e in self.equations
        ]
        return Cone.from_generators(gens, self.ambient_rank)

    def faces(self) -> List["Cone"]:
        """All faces, including {0}-or-lineality and the cone itself, ordered
        by dimension then lexicographically by rays."""
        if self._faces is not None:
            return list(self._faces)
        ray_sets = {frozenset(range(len(self.rays)))}
        frontier = [frozenset(range(len(self.rays)))]
        while frontier:
            new = []
            for rs in frontier:
                for h in self.facets:
                    child = frozenset(
                        i for i in rs if _dot(h, self.rays[i]) == 0
                    )
                    if child not in ray_sets:
                        ray_sets.add(child)
                        new.append(child)
            frontier = new
        lin_gens = list(self.lineality) + [tuple(-x for x in l) for l in self.lineality]
        out = []
        for rs in ray_sets:
            gens = [self.rays[i] for i in sorted(rs)] + lin_gens
            out.append(Cone.from_generators(gens, self.ambient_rank))
        out.sort(key=lambda c: (c.dim(), c.rays))
        object.__setattr__(self, "_faces", tuple(out))
        return out

    def facet_cones(self) -> List["Cone"]:
        d = self.dim()
        return [f for f in self.faces() if f.dim() == d - 1]

    def intersect(self, other: "Cone") -> "Cone":
        if self.ambient_rank != other.ambient_rank:
            raise DimensionMismatch("ambient ranks differ")
        return Cone.from_halfspaces(
            list(self.facets) + list(other.facets),
            list(self.equations) + list(other.equations),
            self.ambient_rank,
        )

    def is_face_of(self, other: "Cone") -> bool:
        """Supporting-hyperplane face test: self is the smallest face of
        other containing it, cut out by the facets of other vanishing on it."""
        if self == other:
            return True
        if not other.contains_cone(self):
            return False
        active = [
            h for h in other.facets if all(_dot(h, g) == 0 for g in self.generators())
        ]
        keep = [r for r in other.rays if all(_dot(h, r) == 0 for h in active)]
        face = Cone.from_generators(
            keep + list(other.lineality) + [tuple(-x for x in l) for l in other.lineality],
            other.ambient_rank,
        )
        return face == self

    def span_lattice_basis(self) -> IntMatrix:
        """Saturated basis of Span(cone) cap Z^r (Hermite-canonical columns)."""
        gens = list(self.rays) + list(self.lineality)
        if not gens:
            return IntMatrix.from_columns([], rows=self.ambient_rank)
        from .intlinalg import saturate

        return saturate(IntMatrix.from_columns(gens, rows=self.ambient_rank))

    def linear_image(self, matrix: IntMatrix) -> "Cone":
        """Image cone under an integer linear map (matrix acts on columns)."""
        if matrix.cols != self.ambient_rank:
            raise DimensionMismatch("matrix does not act on this ambient space")
        return Cone.from_generators(
            [matrix.apply(g) for g in self.generators()], matrix.rows
        )

    def preimage(self, matrix: IntMatrix) -> "Cone":
        """Preimage cone under an integer linear map into this ambient space.

        Composing a functional h with the map: h(Mx) = (M^T h)(x).
        """
        if matrix.rows != self.ambient_rank:
            raise DimensionMismatch("matrix does not map into this ambient space")
        mt = matrix.transpose()
        ineqs = [mt.apply(h) for h in self.facets]
        eqs = [mt.apply(e) for e in self.equations]
        return Cone.from_halfspaces(ineqs, eqs, matrix.cols)


def _canonical_rays(
    gens: Sequence[Vec],
    facets: Sequence[Vec],
    equations: Sequence[Vec],
    lineality: Sequence[Vec],
    ambient: int,
) -> List[Vec]:
    """Canonical primitive extremal-ray representatives of cone(gens)+lin."""
    lin_dim = len(lineality)
    comp = _complement_projector(lineality, ambient) if lin_dim else None
    out = []
    target_rank = ambient - lin_dim - 1
    constraints = list(facets) + list(equations)
    for g in gens:
        active = [h for h in constraints if _dot(h, g) == 0]
        if _rank_of_vectors(active, ambient) != target_rank:
            continue
        if comp is not None:
            rep = comp(g)
            if rep is None or not any(rep):
                continue
        else:
            rep = primitive_vector(g)
        out.append(rep)
    return sorted(_dedupe(out))


def _reduce_mod_lattice(vectors: Sequence[Vec], lattice: Sequence[Vec], ambient: int) -> List[Vec]:
    """Canonical sorted representatives of rays modulo a saturated lattice."""
    if not lattice:
        return sorted(_dedupe([primitive_vector(v) for v in vectors]))
    comp = _complement_projector(lattice, ambient)
    out = []
    for v in vectors:
        rep = comp(v)
        if rep is not None and any(rep):
            out.append(rep)
    return sorted(_dedupe(out))


def _complement_projector(lineality: Sequence[Vec], ambient: int):
    """Project onto a canonical complement of the (saturated) lineality lattice.

    Returns a function mapping an integer vector to the primitive generator of
    its class modulo the lineality, embedded back via the complement basis.
    """
    lin_mat = IntMatrix.from_columns(lineality, rows=ambient)
    from .intlinalg import smith_decomposition

    s = smith_decomposition(lin_mat)
    # lineality is saturated: its diagonal entries are all 1; the complement
    # is spanned by the remaining columns of U^{-1}
    nonzero = s.rank()
    comp_cols = [s.u_inv.column(i) for i in range(nonzero, ambient)]
    comp = IntMatrix.from_columns(comp_cols, rows=ambient)
    full = lin_mat.hstack(comp)

    def project(v: Vec) -> Optional[Vec]:
        sol = solve_rational(full, [Fraction(x) for x in v])
        if sol is None:
            return None
        tail = sol[lin_mat.cols:]
        prim = fraction_vector_to_primitive(tail)
        return tuple(comp.apply(prim))

    return project


# ---------------------------------------------------------------------------
# Operation spellings
# ---------------------------------------------------------------------------


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def faces(c: Cone) -> List[Cone]:
    return c.faces()


def span_sublattice(c: Cone) -> IntMatrix:
    return c.span_lattice_basis()


def contains(c: Cone, vector: Sequence) -> Tuple[str, Optional[Cone]]:
    return c.classify_point(vector)


def intersect(a: Cone, b: Cone) -> Cone:
    return a.intersect(b)


def union_covers(target: Cone, pieces: Sequence[Cone]) -> bool:
    """Whether the pieces cover the target exactly, as point sets.

    The pieces must be contained in the target.  The target is cut along
    every facet hyperplane of the target and the pieces; each resulting cell
    of full dimension (relative to the target) is decided by one relative
    interior point, which no piece boundary can separate from the rest of
    the cell.
    """
    for p in pieces:
        if p.ambient_rank != target.ambient_rank:
            raise DimensionMismatch("ambient ranks differ")
        if not target.contains_cone(p):
            raise PieceOutsideTarget(f"piece {p!r} is not contained in the target")
    target_dim = target.dim()
    if target_dim == 0:
        # the zero cone is covered iff there is at least one piece (each
        # piece is then the zero cone itself)
        return bool(pieces)

    hyperplanes = []
    seen = set()
    for cone in [target, *pieces]:
        for h in cone.facets:
            hn = primitive_vector(h)
            if hn and hn[_first_nonzero(hn)] < 0:
                hn = tuple(-x for x in hn)
            if hn in seen:
                continue
            seen.add(hn)
            # skip hyperplanes containing the whole target
            if all(_dot(hn, g) == 0 for g in target.generators()):
                continue
            hyperplanes.append(hn)

    cells = [target]
    for h in hyperplanes:
        nxt = []
        minus_h = tuple(-x for x in h)
        for cell in cells:
            vals = [_dot(h, g) for g in cell.generators()]
            if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
                nxt.append(cell)
                continue
            for side in (h, minus_h):
                piece = Cone.from_halfspaces(
                    list(cell.facets) + [side], list(cell.equations), cell.ambient_rank
                )
                if piece.dim() == target_dim:
                    nxt.append(piece)
        cells = nxt

    for cell in cells:
        point = cell.relative_interior_point()
        if not any(p.contains_point(point) for p in pieces):
            return False
    return True


def _first_nonzero(v: Vec) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    return -1
