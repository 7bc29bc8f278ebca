"""Exact integer matrix algebra: Smith/Hermite normal forms, kernels, saturation.

Everything here works with arbitrary-precision Python integers; there is no
floating point anywhere.  Matrices are immutable values.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence, Tuple

from .errors import DimensionMismatch

Vec = Tuple[int, ...]


class IntMatrix:
    """An immutable integer matrix stored as a tuple of row tuples."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Sequence[int]], cols: Optional[int] = None):
        rows = tuple(
            row if type(row) is tuple and all(type(x) is int for x in row)
            else tuple(int(x) for x in row)
            for row in entries
        )
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise DimensionMismatch("ragged rows")
            if cols is not None and cols != ncols:
                raise DimensionMismatch("cols does not match row length")
        else:
            if cols is None:
                raise DimensionMismatch("empty matrix needs an explicit column count")
            ncols = cols
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, *args):
        raise AttributeError("IntMatrix is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix([[0] * cols for _ in range(rows)], cols=cols)

    @staticmethod
    def from_columns(columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        columns = [tuple(int(x) for x in c) for c in columns]
        if columns:
            nrows = len(columns[0])
            if any(len(c) != nrows for c in columns):
                raise DimensionMismatch("ragged columns")
        else:
            if rows is None:
                raise DimensionMismatch("empty matrix needs an explicit row count")
            nrows = rows
        return IntMatrix([[c[i] for c in columns] for i in range(nrows)], cols=len(columns))

    # -- basic access --------------------------------------------------

    def row(self, i: int) -> Vec:
        return self.entries[i]

    def column(self, j: int) -> Vec:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> Tuple[Vec, ...]:
        return tuple(self.column(j) for j in range(self.cols))

    def transpose(self) -> "IntMatrix":
        return IntMatrix([self.column(j) for j in range(self.cols)], cols=self.rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        return f"IntMatrix({list(map(list, self.entries))!r}, cols={self.cols})"

    # -- arithmetic ----------------------------------------------------

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ocols = [other.column(j) for j in range(other.cols)]
        return IntMatrix(
            [[_dot(r, c) for c in ocols] for r in self.entries],
            cols=other.cols,
        )

    def apply(self, vector: Sequence[int]) -> Vec:
        if len(vector) != self.cols:
            raise DimensionMismatch("vector length does not match column count")
        return tuple(_dot(r, vector) for r in self.entries)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise DimensionMismatch("row counts differ")
        return IntMatrix(
            [self.entries[i] + other.entries[i] for i in range(self.rows)],
            cols=self.cols + other.cols,
        )

    def select_columns(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[r[j] for j in indices] for r in self.entries], cols=len(indices))

    def select_rows(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix([self.entries[i] for i in indices], cols=self.cols)

    def scale(self, a: int) -> "IntMatrix":
        return IntMatrix([[a * x for x in r] for r in self.entries], cols=self.cols)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


class SmithDecomposition:
    """U @ M @ V = D with U, V unimodular and D in Smith normal form."""

    __slots__ = ("u", "d", "v", "u_inv", "v_inv")

    def __init__(self, u, d, v, u_inv, v_inv):
        self.u = u
        self.d = d
        self.v = v
        self.u_inv = u_inv
        self.v_inv = v_inv

    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.d.entries[i][i] for i in range(min(self.d.rows, self.d.cols)))

    def rank(self) -> int:
        return sum(1 for x in self.diagonal() if x != 0)


def smith_decomposition(m: IntMatrix) -> SmithDecomposition:
    """Full Smith decomposition, with the inverse transforms tracked as well.

    Pivots are chosen as the smallest nonzero absolute value, scanning in
    row-major order, so the output is deterministic.
    """
    nr, nc = m.rows, m.cols
    d = [list(r) for r in m.entries]
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    ui = [list(r) for r in u]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]
    vi = [list(r) for r in v]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for r in ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vi[i], vi[j] = vi[j], vi[i]

    def add_row(src, dst, c):
        # row[dst] += c * row[src]
        d[dst] = [a + c * b for a, b in zip(d[dst], d[src])]
        u[dst] = [a + c * b for a, b in zip(u[dst], u[src])]
        for r in ui:
            r[src] -= c * r[dst]

    def add_col(src, dst, c):
        for r in d:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]
        vi[src] = [a - c * b for a, b in zip(vi[src], vi[dst])]

    def negate_row(i):
        d[i] = [-a for a in d[i]]
        u[i] = [-a for a in u[i]]
        for r in ui:
            r[i] = -r[i]

    n = min(nr, nc)
    for t in range(n):
        while True:
            # locate the smallest nonzero |entry| in the working block
            pivot = None
            for i in range(t, nr):
                for j in range(t, nc):
                    x = d[i][j]
                    if x != 0 and (pivot is None or abs(x) < abs(d[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            pi, pj = pivot
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            if d[t][t] < 0:
                negate_row(t)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, nr):
                q = d[i][t] // p
                if q:
                    add_row(t, i, -q)
                if d[i][t]:
                    dirty = True
            for j in range(t + 1, nc):
                q = d[t][j] // p
                if q:
                    add_col(t, j, -q)
                if d[t][j]:
                    dirty = True
            if dirty:
                continue
            # pivot must divide the rest of the block
            offender = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if d[i][j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)

    um = IntMatrix(u, cols=nr)
    dm = IntMatrix(d, cols=nc)
    vm = IntMatrix(v, cols=nc)
    uim = IntMatrix(ui, cols=nr)
    vim = IntMatrix(vi, cols=nc)
    return SmithDecomposition(um, dm, vm, uim, vim)


def smith_normal_form(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U @ M @ V = D diagonal, d_1 | d_2 | ... , d_i >= 0."""
    s = smith_decomposition(m)
    return s.u, s.d, s.v


def invariant_factors(m: IntMatrix) -> Tuple[int, ...]:
    """The nonzero diagonal of the Smith form."""
    return tuple(x for x in smith_decomposition(m).diagonal() if x != 0)


def rank(m: IntMatrix) -> int:
    """Rank over Q, by fraction-free Gaussian elimination."""
    a = [list(r) for r in m.entries]
    nr, nc = m.rows, m.cols
    r = 0
    for j in range(nc):
        piv = next((i for i in range(r, nr) if a[i][j] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nr):
            if a[i][j]:
                p, q = a[r][j], a[i][j]
                a[i] = [p * x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nr:
            break
    return r


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a basis of the integer kernel lattice {x : Mx = 0}.

    The kernel of an integer matrix is saturated, so this basis is a basis of
    a saturated sublattice.  Deterministic column order.
    """
    s = smith_decomposition(m)
    diag = s.diagonal()
    free = [j for j in range(m.cols) if j >= len(diag) or diag[j] == 0]
    return s.v.select_columns(free)


def solve_integer(m: IntMatrix, b: Sequence[int]) -> Optional[Vec]:
    """Some integer solution x of Mx = b, or None when no solution exists.

    The witness is deterministic: free coordinates of the Smith-transformed
    system are set to zero.
    """
    if len(b) != m.rows:
        raise DimensionMismatch("right-hand side length does not match row count")
    s = smith_decomposition(m)
    c = s.u.apply(b)
    diag = s.diagonal()
    y = [0] * m.cols
    for i in range(m.rows):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di:
                return None
            if i < m.cols:
                y[i] = c[i] // di
    return s.v.apply(y)


def solve_rational(m: IntMatrix, b: Sequence[Fraction]) -> Optional[Tuple[Fraction, ...]]:
    """Some rational solution of Mx = b, or None.  Free variables set to zero."""
    if len(b) != m.rows:
        raise DimensionMismatch("right-hand side length does not match row count")
    a = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(m.entries, b)]
    nr, nc = m.rows, m.cols
    pivots = []
    r = 0
    for j in range(nc):
        piv = next((i for i in range(r, nr) if a[i][j] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        a[r] = [x / a[r][j] for x in a[r]]
        for i in range(nr):
            if i != r and a[i][j]:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
        if r == nr:
            break
    for i in range(r, nr):
        if a[i][nc] != 0:
            return None
    x = [Fraction(0)] * nc
    for i, j in enumerate(pivots):
        x[j] = a[i][nc]
    return tuple(x)


def saturate(m: IntMatrix) -> IntMatrix:
    """Basis of the saturation {x : kx in colspan(M) for some k > 0}.

    Idempotent; the result is returned in Hermite column form.
    """
    s = smith_decomposition(m)
    diag = s.diagonal()
    nonzero = [i for i in range(len(diag)) if diag[i] != 0]
    return hermite_column_basis(s.u_inv.select_columns(nonzero))


def hermite_column_basis(m: IntMatrix) -> IntMatrix:
    """Canonical basis (column-style Hermite normal form) of the column lattice.

    Zero columns are dropped; two matrices span the same lattice iff their
    Hermite column bases are equal.
    """
    # Work on columns: bring to column echelon with positive pivots and
    # reduced off-pivot entries.
    work = [list(c) for c in m.columns()]
    nr = m.rows
    basis: list = []
    pivot_rows = []
    for row in range(nr):
        nz = [c for c in work if c[row] != 0]
        rest = [c for c in work if c[row] == 0]
        if not nz:
            work = rest
            continue
        # gcd-reduce the columns hitting this row down to a single pivot
        while len(nz) > 1:
            nz.sort(key=lambda c: (abs(c[row]), c))
            a, b = nz[0], nz[1]
            q = b[row] // a[row]
            nb = [x - q * y for x, y in zip(b, a)]
            nz = [a] + nz[2:]
            if nb[row] != 0:
                nz.append(nb)
            elif any(nb):
                rest.append(nb)
        piv = nz[0]
        if piv[row] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        pivot_rows.append(row)
        work = rest
    # reduce entries left of each pivot into [0, pivot); ascending pivot rows so
    # a reduction never disturbs rows already normalized
    for i in range(len(basis)):
        r = pivot_rows[i]
        p = basis[i][r]
        for j in range(i):
            q = basis[j][r] // p
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], basis[i])]
    return IntMatrix.from_columns(basis, rows=nr)


def lattice_contains(basis: IntMatrix, v: Sequence[int]) -> bool:
    """Whether v lies in the column lattice spanned by ``basis``."""
    return solve_integer(basis, v) is not None


def lattice_intersection(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Canonical basis of the intersection of two column lattices in Z^n."""
    if a.rows != b.rows:
        raise DimensionMismatch("ambient ranks differ")
    if a.cols == 0 or b.cols == 0:
        return IntMatrix.from_columns([], rows=a.rows)
    k = kernel_basis(a.hstack(b.scale(-1)))
    xpart = k.select_rows(range(a.cols))
    return hermite_column_basis(a @ xpart)


def primitive_vector(v: Sequence[int]) -> Vec:
    """v divided by the gcd of its entries (zero vector stays zero)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def fraction_vector_to_primitive(v: Sequence[Fraction]) -> Vec:
    """Clear denominators of a rational vector and make it primitive."""
    denom = 1
    for x in v:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in v]
    return primitive_vector(ints)
