"""Finitely generated abelian groups, homomorphisms, duals, Ext, derived duals.

A group is stored in invariant-factor normal form: free rank r plus torsion
invariants (d_1, ..., d_k) with 2 <= d_1 | d_2 | ... | d_k.  An element is a
coordinate tuple (a_1, ..., a_r, t_1, ..., t_k) with 0 <= t_i < d_i.  Two
groups are isomorphic iff they are equal.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import DimensionMismatch, KmFanError, NonLattice, NotTame
from .intlinalg import (
    IntMatrix,
    Vec,
    hermite_column_basis,
    kernel_basis,
    smith_decomposition,
    solve_integer,
)


class FgaGroup:
    """A finitely generated abelian group in invariant-factor normal form."""

    __slots__ = ("free_rank", "torsion")

    def __init__(self, free_rank: int, torsion: Iterable[int] = ()):
        torsion = tuple(int(d) for d in torsion)
        if free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for i, d in enumerate(torsion):
            if d < 2:
                raise ValueError("torsion invariants must be >= 2")
            if i and torsion[i] % torsion[i - 1]:
                raise ValueError("torsion invariants must divide in sequence")
        object.__setattr__(self, "free_rank", free_rank)
        object.__setattr__(self, "torsion", torsion)

    def __setattr__(self, *args):
        raise AttributeError("FgaGroup is immutable")

    @property
    def ncoords(self) -> int:
        return self.free_rank + len(self.torsion)

    def is_lattice(self) -> bool:
        return not self.torsion

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.ncoords == 0

    def order(self) -> Optional[int]:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def torsion_order(self) -> int:
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def zero(self) -> Vec:
        return (0,) * self.ncoords

    def reduce(self, vector: Sequence[int]) -> Vec:
        """Normalize a coordinate vector (torsion coordinates mod d_i)."""
        if len(vector) != self.ncoords:
            raise DimensionMismatch("wrong number of coordinates")
        r = self.free_rank
        return tuple(int(v) for v in vector[:r]) + tuple(
            int(v) % d for v, d in zip(vector[r:], self.torsion)
        )

    def free_part(self, vector: Sequence[int]) -> Vec:
        return tuple(vector[: self.free_rank])

    def relation_matrix(self) -> IntMatrix:
        """Columns d_i * e_{r+i}: the relations of the standard presentation."""
        m, r = self.ncoords, self.free_rank
        cols = []
        for i, d in enumerate(self.torsion):
            col = [0] * m
            col[r + i] = d
            cols.append(col)
        return IntMatrix.from_columns(cols, rows=m)

    def elements(self) -> List[Vec]:
        """All elements; only allowed for finite groups."""
        if not self.is_finite():
            raise KmFanError("cannot enumerate an infinite group")
        out = [()]
        for d in self.torsion:
            out = [e + (t,) for e in out for t in range(d)]
        return out

    def torsion_elements(self) -> List[Vec]:
        """All torsion elements (free coordinates zero)."""
        out = [(0,) * self.free_rank]
        for d in self.torsion:
            out = [e + (t,) for e in out for t in range(d)]
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FgaGroup)
            and self.free_rank == other.free_rank
            and self.torsion == other.torsion
        )

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def __repr__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


class GroupHom:
    """A homomorphism of FgaGroups, given by an integer matrix on coordinates.

    Column j is the image of the j-th standard generator of the source; the
    constructor rejects matrices that do not kill the source relations.
    """

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FgaGroup, target: FgaGroup, matrix: IntMatrix):
        if matrix.rows != target.ncoords or matrix.cols != source.ncoords:
            raise DimensionMismatch("matrix shape does not match groups")
        matrix = IntMatrix([target.reduce(c) for c in matrix.transpose().entries]).transpose() \
            if matrix.cols else IntMatrix.zero(target.ncoords, 0)
        r = source.free_rank
        for i, d in enumerate(source.torsion):
            img = target.reduce(tuple(d * x for x in matrix.column(r + i)))
            if any(img):
                raise KmFanError(
                    f"matrix does not define a homomorphism: generator {r + i} "
                    f"of order {d} has image of larger order"
                )
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, *args):
        raise AttributeError("GroupHom is immutable")

    @staticmethod
    def identity(group: FgaGroup) -> "GroupHom":
        return GroupHom(group, group, IntMatrix.identity(group.ncoords))

    @staticmethod
    def zero(source: FgaGroup, target: FgaGroup) -> "GroupHom":
        return GroupHom(source, target, IntMatrix.zero(target.ncoords, source.ncoords))

    def apply(self, vector: Sequence[int]) -> Vec:
        if len(vector) != self.source.ncoords:
            raise DimensionMismatch("element has wrong length")
        return self.target.reduce(self.matrix.apply(vector))

    def then(self, other: "GroupHom") -> "GroupHom":
        """other o self."""
        if other.source != self.target:
            raise DimensionMismatch("homomorphisms do not compose")
        return GroupHom(self.source, other.target, other.matrix @ self.matrix)

    def free_matrix(self) -> IntMatrix:
        """The induced map on free quotients N/N_tor -> N'/N'_tor."""
        rows = range(self.target.free_rank)
        cols = range(self.source.free_rank)
        return IntMatrix(
            [[self.matrix.entries[i][j] for j in cols] for i in rows],
            cols=self.source.free_rank,
        )

    def __eq__(self, other):
        return (
            isinstance(other, GroupHom)
            and self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def __repr__(self):
        return f"GroupHom({self.source!r} -> {self.target!r}, {self.matrix.entries})"


class Subgroup:
    """A subgroup of an FgaGroup, in canonical form.

    Internally the subgroup H <= N is stored as the Hermite column basis of
    its preimage lattice in Z^m (m = number of coordinates of N).  The
    preimage always contains the relation lattice of N, and determines H, so
    two Subgroups are equal iff they are the same subgroup.
    """

    __slots__ = ("ambient", "preimage", "_as_group")

    def __init__(self, ambient: FgaGroup, preimage: IntMatrix):
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "preimage", preimage)
        object.__setattr__(self, "_as_group", None)

    def __setattr__(self, *args):
        raise AttributeError("Subgroup is immutable")

    @staticmethod
    def from_generators(ambient: FgaGroup, generators: Iterable[Sequence[int]]) -> "Subgroup":
        gens = [ambient.reduce(g) for g in generators]
        pre = IntMatrix.from_columns(gens, rows=ambient.ncoords).hstack(ambient.relation_matrix())
        return Subgroup(ambient, hermite_column_basis(pre))

    @staticmethod
    def trivial(ambient: FgaGroup) -> "Subgroup":
        return Subgroup.from_generators(ambient, [])

    @staticmethod
    def full(ambient: FgaGroup) -> "Subgroup":
        return Subgroup(ambient, IntMatrix.identity(ambient.ncoords))

    def contains(self, vector: Sequence[int]) -> bool:
        v = self.ambient.reduce(vector)
        return solve_integer(self.preimage, v) is not None

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return all(self.contains(g) for g in other.generators())

    def generators(self) -> List[Vec]:
        """Canonical generators (images of the preimage basis, zeros dropped)."""
        out = []
        for c in self.preimage.columns():
            v = self.ambient.reduce(c)
            if any(v):
                out.append(v)
        return out

    def generator_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.generators(), rows=self.ambient.ncoords)

    def sum(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.ambient, hermite_column_basis(self.preimage.hstack(other.preimage)))

    def intersection(self, other: "Subgroup") -> "Subgroup":
        from .intlinalg import lattice_intersection

        return Subgroup(self.ambient, lattice_intersection(self.preimage, other.preimage))

    def as_group(self) -> Tuple[FgaGroup, GroupHom]:
        """The abstract isomorphism type plus an inclusion into the ambient."""
        if self._as_group is None:
            object.__setattr__(
                self, "_as_group", _presentation_of_image(self.ambient, self.preimage)
            )
        return self._as_group

    def group(self) -> FgaGroup:
        return self.as_group()[0]

    def is_lattice(self) -> bool:
        return self.group().is_lattice()

    def rank(self) -> int:
        return self.group().free_rank

    def lattice_basis(self) -> IntMatrix:
        """Columns form a free basis of the subgroup; requires torsion-freeness.

        The basis is canonical: Hermite-reduced representatives with torsion
        coordinates normalized.
        """
        grp, incl = self.as_group()
        if not grp.is_lattice():
            raise NonLattice("subgroup has torsion")
        if grp.free_rank == 0:
            return IntMatrix.from_columns([], rows=self.ambient.ncoords)
        h = hermite_column_basis(incl.matrix)
        return IntMatrix.from_columns(
            [self.ambient.reduce(c) for c in h.columns()], rows=self.ambient.ncoords
        )

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.ambient == other.ambient
            and self.preimage == other.preimage
        )

    def __hash__(self):
        return hash((self.ambient, self.preimage))

    def __repr__(self):
        return f"Subgroup({self.ambient!r}, gens={self.generators()})"


class QuotientPresentation:
    """Normal form of Z^m / (column span), with projection and a section."""

    __slots__ = ("group", "proj", "section")

    def __init__(self, group: FgaGroup, proj: IntMatrix, section: IntMatrix):
        self.group = group
        self.proj = proj          # group.ncoords x m
        self.section = section    # m x group.ncoords

    def to_normal(self, vector: Sequence[int]) -> Vec:
        return self.group.reduce(self.proj.apply(vector))

    def lift(self, coords: Sequence[int]) -> Vec:
        return self.section.apply(coords)


def present_quotient(m: int, relation_columns: IntMatrix) -> QuotientPresentation:
    """Normal form of the quotient of Z^m by the given column span."""
    if relation_columns.rows != m:
        raise DimensionMismatch("relation columns live in the wrong space")
    s = smith_decomposition(relation_columns)
    diag = s.diagonal()

    def modulus(i: int) -> int:
        return diag[i] if i < len(diag) else 0

    free_idx = [i for i in range(m) if modulus(i) == 0]
    tor_idx = [i for i in range(m) if modulus(i) >= 2]
    group = FgaGroup(len(free_idx), tuple(modulus(i) for i in tor_idx))
    order = free_idx + tor_idx
    proj = s.u.select_rows(order)
    section = s.u_inv.select_columns(order)
    return QuotientPresentation(group, proj, section)


def _presentation_of_image(ambient: FgaGroup, preimage: IntMatrix) -> Tuple[FgaGroup, GroupHom]:
    """Normal form of H = image of a preimage lattice, with inclusion into N."""
    t = preimage.cols
    if t == 0:
        grp = FgaGroup(0)
        return grp, GroupHom(grp, ambient, IntMatrix.zero(ambient.ncoords, 0))
    rel = ambient.relation_matrix()
    ker = kernel_basis(preimage.hstack(rel))
    coeff = ker.select_rows(range(t))
    pres = present_quotient(t, coeff)
    incl_matrix = preimage @ pres.section
    incl = GroupHom(pres.group, ambient, incl_matrix)
    return pres.group, incl


# ---------------------------------------------------------------------------
# Operation spellings
# ---------------------------------------------------------------------------


def quotient(ambient: FgaGroup, sub: Subgroup) -> Tuple[FgaGroup, GroupHom]:
    """The cokernel of a subgroup inclusion, with the projection map.

    Quotienting by the trivial subgroup returns the ambient group itself with
    the identity projection.
    """
    if sub.ambient != ambient:
        raise KmFanError("subgroup lives in a different group")
    gens = sub.generator_matrix()
    if gens.cols == 0:
        return ambient, GroupHom.identity(ambient)
    rel = ambient.relation_matrix().hstack(gens)
    pres = present_quotient(ambient.ncoords, rel)
    proj = GroupHom(ambient, pres.group, pres.proj)
    return pres.group, proj


def dual_group(group: FgaGroup) -> FgaGroup:
    """Hom(N, Z): the free part's dual; torsion dies."""
    return FgaGroup(group.free_rank)


def dual_hom(f: GroupHom) -> GroupHom:
    """Hom(-, Z) applied to f: the transpose on free parts."""
    return GroupHom(dual_group(f.target), dual_group(f.source), f.free_matrix().transpose())


def ext_group(group: FgaGroup) -> FgaGroup:
    """Ext^1(N, Z), isomorphic to the torsion subgroup of N."""
    return FgaGroup(0, group.torsion)


def hom_kernel_cokernel(f: GroupHom) -> Tuple[Subgroup, FgaGroup, GroupHom]:
    """Kernel subgroup, cokernel in normal form, and the cokernel projection."""
    ker = kernel_subgroup(f)
    rel = f.target.relation_matrix().hstack(f.matrix)
    pres = present_quotient(f.target.ncoords, rel)
    cok_proj = GroupHom(f.target, pres.group, pres.proj)
    return ker, pres.group, cok_proj


def kernel_subgroup(f: GroupHom) -> Subgroup:
    """The subgroup {x : f(x) = 0} of the source."""
    lifted = kernel_basis(f.matrix.hstack(f.target.relation_matrix()))
    xpart = lifted.select_rows(range(f.source.ncoords))
    pre = xpart.hstack(f.source.relation_matrix())
    return Subgroup(f.source, hermite_column_basis(pre))


def image_subgroup(f: GroupHom) -> Subgroup:
    return Subgroup.from_generators(f.target, f.matrix.columns())


def preimage_subgroup(f: GroupHom, sub: Subgroup) -> Subgroup:
    """The subgroup f^{-1}(H) of the source."""
    if sub.ambient != f.target:
        raise KmFanError("subgroup lives in the wrong group")
    qgrp, proj = quotient(f.target, sub)
    comp = GroupHom(f.source, qgrp, proj.matrix @ f.matrix)
    return kernel_subgroup(comp)


def is_injective(f: GroupHom) -> bool:
    return not kernel_subgroup(f).generators()


def is_surjective(f: GroupHom) -> bool:
    _, cok, _ = hom_kernel_cokernel(f)
    return cok.is_trivial()


def is_isomorphism(f: GroupHom) -> bool:
    return is_injective(f) and is_surjective(f)


def inverse_hom(f: GroupHom) -> GroupHom:
    """The inverse of an isomorphism."""
    if not is_isomorphism(f):
        raise KmFanError("homomorphism is not invertible")
    cols = []
    aug = f.matrix.hstack(f.target.relation_matrix())
    for j in range(f.target.ncoords):
        e = tuple(1 if i == j else 0 for i in range(f.target.ncoords))
        sol = solve_integer(aug, e)
        cols.append(sol[: f.source.ncoords])
    return GroupHom(f.target, f.source, IntMatrix.from_columns(cols, rows=f.source.ncoords))


def is_tame_hom(f: GroupHom) -> bool:
    """Finite cokernel and torsion-injective (equivalently torsion-free kernel)."""
    _, cok, _ = hom_kernel_cokernel(f)
    if not cok.is_finite():
        return False
    return kernel_subgroup(f).is_lattice()


class DerivedDual:
    """D(f) = H^0 of the Z-dual of the two-term complex [N -> N'], for tame f.

    Carries explicit witnesses of the exact sequences it sits in:

      0 -> E(Cok f) -> D(f) -> (Ker f)^v -> 0        (from_ext_cok, to_ker_dual)
      N^v -> D(f) -> E(N')                            (from_source_dual, to_ext_target)

    The Ext groups appearing as sources/targets are in normal form, equal to
    ext_group(...) of the corresponding group.
    """

    __slots__ = (
        "hom",
        "group",
        "kernel",
        "cokernel",
        "from_ext_cok",
        "to_ker_dual",
        "from_source_dual",
        "to_ext_target",
    )

    def __init__(self, hom, group, kernel, cokernel, from_ext_cok, to_ker_dual,
                 from_source_dual, to_ext_target):
        self.hom = hom
        self.group = group
        self.kernel = kernel
        self.cokernel = cokernel
        self.from_ext_cok = from_ext_cok
        self.to_ker_dual = to_ker_dual
        self.from_source_dual = from_source_dual
        self.to_ext_target = to_ext_target


def dd_of_hom(f: GroupHom) -> DerivedDual:
    """The derived dual of a tame homomorphism, with exact-sequence witnesses.

    Present the source as Z^a / im R and the target as Z^b / im R'; lift f to
    F : Z^a -> Z^b and pick G with F R = R' G.  The complex

        Z^k --(R, -G)--> Z^a + Z^{k'} --(F | R')--> Z^b

    of free groups is quasi-isomorphic to [N -> N'], so D(f) is the middle
    cohomology of its Z-dual: ker((R,-G)^T) / im((F | R')^T).
    """
    if not is_tame_hom(f):
        raise NotTame("derived dual requires a tame homomorphism")
    src, tgt = f.source, f.target
    a, b = src.ncoords, tgt.ncoords
    k, kp = len(src.torsion), len(tgt.torsion)
    r_src = src.relation_matrix()          # a x k
    r_tgt = tgt.relation_matrix()          # b x kp
    big_f = f.matrix                       # b x a

    # G : Z^k -> Z^{kp} with F R = R' G (exists because f is well defined)
    gcols = []
    for j in range(k):
        rhs = big_f.apply(r_src.column(j))
        sol = solve_integer(r_tgt, rhs)
        if sol is None:
            raise KmFanError("internal: relation compatibility failed")
        gcols.append(sol)
    gmat = IntMatrix.from_columns(gcols, rows=kp)

    # A = [[R], [-G]]  ((a+kp) x k);  B = [F | R']  (b x (a+kp))
    amat = IntMatrix(
        [r_src.entries[i] for i in range(a)] + [tuple(-x for x in gmat.entries[i]) for i in range(kp)],
        cols=k,
    )
    bmat = IntMatrix([big_f.entries[i] + r_tgt.entries[i] for i in range(b)], cols=a + kp)

    kb = kernel_basis(amat.transpose())     # columns: basis of ker(A^T) in Z^{a+kp}
    s = kb.cols

    def in_kernel_coords(vector: Sequence[int]) -> Vec:
        sol = solve_integer(kb, vector)
        if sol is None:
            raise KmFanError("internal: vector not in kernel lattice")
        return sol

    # relations of D(f): the columns of B^T expressed in the kernel basis
    rel_cols = [in_kernel_coords(row) for row in bmat.entries]
    pres = present_quotient(s, IntMatrix.from_columns(rel_cols, rows=s))
    dgroup = pres.group

    ker_sub = kernel_subgroup(f)
    ker_basis = ker_sub.lattice_basis()     # a x s_k, columns a basis of Ker f
    s_k = ker_basis.cols
    _, cok, _ = hom_kernel_cokernel(f)

    # --- witness: D(f) -> (Ker f)^v --------------------------------------
    # mu2 solves R' mu2 = -F X columnwise; the dual of the chain inclusion
    mu2_cols = []
    for j in range(s_k):
        rhs = tuple(-x for x in big_f.apply(ker_basis.column(j)))
        sol = solve_integer(r_tgt, rhs)
        if sol is None:
            raise KmFanError("internal: kernel column does not map into relations")
        mu2_cols.append(sol)
    mu2 = IntMatrix.from_columns(mu2_cols, rows=kp)
    ker_dual = FgaGroup(s_k)
    pairing = ker_basis.transpose().hstack(mu2.transpose())   # s_k x (a+kp)
    to_ker_dual = GroupHom(dgroup, ker_dual, pairing @ kb @ pres.section)

    # --- witness: E(Cok f) -> D(f) ----------------------------------------
    cmat = hermite_column_basis(big_f.hstack(r_tgt))          # b x b (cok finite)
    ecok_pres = present_quotient(cmat.cols, cmat.transpose())
    ecok = ecok_pres.group                                    # = ext_group(cok)
    nu_cols = []
    for j in range(a + kp):
        sol = solve_integer(cmat, bmat.column(j))
        if sol is None:
            raise KmFanError("internal: image column outside image lattice")
        nu_cols.append(sol)
    nu = IntMatrix.from_columns(nu_cols, rows=cmat.cols)      # t x (a+kp)
    cols = []
    for j in range(ecok.ncoords):
        xi = ecok_pres.lift(tuple(1 if i == j else 0 for i in range(ecok.ncoords)))
        vec = nu.transpose().apply(xi)
        cols.append(pres.to_normal(in_kernel_coords(vec)))
    from_ext_cok = GroupHom(ecok, dgroup, IntMatrix.from_columns(cols, rows=dgroup.ncoords))

    # --- witness: N^v -> D(f) ----------------------------------------------
    src_dual = dual_group(src)
    cols = []
    for i in range(src.free_rank):
        vec = tuple(1 if j == i else 0 for j in range(a)) + (0,) * kp
        cols.append(pres.to_normal(in_kernel_coords(vec)))
    from_source_dual = GroupHom(src_dual, dgroup, IntMatrix.from_columns(cols, rows=dgroup.ncoords))

    # --- witness: D(f) -> E(N') ---------------------------------------------
    etgt_pres = present_quotient(kp, r_tgt.transpose())
    etgt = etgt_pres.group                                    # = ext_group(tgt)
    cols = []
    for j in range(dgroup.ncoords):
        vec = kb.apply(pres.lift(tuple(1 if i == j else 0 for i in range(dgroup.ncoords))))
        psi = vec[a:]
        cols.append(etgt_pres.to_normal(psi))
    to_ext_target = GroupHom(dgroup, etgt, IntMatrix.from_columns(cols, rows=etgt.ncoords))

    return DerivedDual(
        hom=f,
        group=dgroup,
        kernel=ker_sub,
        cokernel=cok,
        from_ext_cok=from_ext_cok,
        to_ker_dual=to_ker_dual,
        from_source_dual=from_source_dual,
        to_ext_target=to_ext_target,
    )


def finite_quotient_extension(lattice: FgaGroup, g: GroupHom) -> Tuple[FgaGroup, GroupHom]:
    """Extend a lattice N along a character g : N^v -> A into a finite group.

    Returns (N', inc) with N' the derived dual of g, inc : N -> N' injective,
    Cok(inc) = E(A), so that E(N'/N) recovers A.
    """
    if not lattice.is_lattice():
        raise NonLattice("ambient group must be torsion-free")
    if g.source != dual_group(lattice):
        raise KmFanError("character must be defined on the dual lattice")
    if not g.target.is_finite():
        raise KmFanError("character target must be finite")
    dd = dd_of_hom(g)
    # D(g) sits in 0 -> (N^v)^v -> D(g) -> E(A) -> 0; (N^v)^v = N in coordinates
    inc = dd.from_source_dual
    return dd.group, GroupHom(lattice, dd.group, inc.matrix)


def direct_sum(a: FgaGroup, b: FgaGroup):
    """Normal form of a x b along with the two inclusions and projections.

    Free coordinates are the concatenation (a's, then b's); only the torsion
    coordinates are renormalized, so free data are unaffected.
    """
    ra, rb = a.free_rank, b.free_rank
    ka, kb_ = len(a.torsion), len(b.torsion)
    tor = list(a.torsion) + list(b.torsion)
    pres = present_quotient(
        ka + kb_,
        IntMatrix.from_columns(
            [[tor[i] if j == i else 0 for j in range(ka + kb_)] for i in range(ka + kb_)],
            rows=ka + kb_,
        ),
    )
    grp = FgaGroup(ra + rb, pres.group.torsion)

    def assemble(freem: IntMatrix, torm: IntMatrix, cols: int) -> IntMatrix:
        return IntMatrix(
            [freem.entries[i] for i in range(freem.rows)]
            + [torm.entries[i] for i in range(torm.rows)],
            cols=cols,
        )

    # inclusion of a: free coords -> first ra coords; torsion via pres.proj
    def make_inc(which: int) -> GroupHom:
        src = a if which == 0 else b
        rs, ks = (ra, ka) if which == 0 else (rb, kb_)
        free = IntMatrix.zero(ra + rb, src.ncoords)
        fentries = [list(r) for r in free.entries]
        off = 0 if which == 0 else ra
        for i in range(rs):
            fentries[off + i][i] = 1
        toroff = 0 if which == 0 else ka
        tcols = []
        for j in range(src.ncoords):
            if j < rs:
                tcols.append((0,) * (ka + kb_))
            else:
                e = [0] * (ka + kb_)
                e[toroff + (j - rs)] = 1
                tcols.append(tuple(e))
        torm = pres.proj @ IntMatrix.from_columns(tcols, rows=ka + kb_)
        return GroupHom(src, grp, assemble(IntMatrix(fentries, cols=src.ncoords), torm, src.ncoords))

    def make_proj(which: int) -> GroupHom:
        tgtg = a if which == 0 else b
        rs, ks = (ra, ka) if which == 0 else (rb, kb_)
        off = 0 if which == 0 else ra
        toroff = 0 if which == 0 else ka
        cols = []
        for j in range(grp.ncoords):
            if j < ra + rb:
                col = [0] * tgtg.ncoords
                if off <= j < off + rs:
                    col[j - off] = 1
                cols.append(tuple(col))
            else:
                lifted = pres.lift(
                    tuple(1 if i == j - (ra + rb) else 0 for i in range(len(pres.group.torsion)))
                )
                col = [0] * tgtg.ncoords
                for i in range(ks):
                    col[rs + i] = lifted[toroff + i]
                cols.append(tuple(col))
        return GroupHom(grp, tgtg, IntMatrix.from_columns(cols, rows=tgtg.ncoords))

    return grp, make_inc(0), make_inc(1), make_proj(0), make_proj(1)
