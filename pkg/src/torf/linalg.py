"""Exact integer linear algebra: normal forms, kernels, lattices.

Everything here works with arbitrary-precision Python integers; rank
computations use fraction-free (Bareiss) elimination so no rounding can
occur anywhere downstream.

Conventions fixed once for the whole package:

* Hermite normal form is column-style: ``A @ U = H`` with ``U`` unimodular,
  pivot rows strictly increasing with the column index, pivots positive,
  and the entries in a pivot row left of the pivot reduced into
  ``[0, pivot)``.  Zero columns are pushed to the right.
* A :class:`Sublattice` always stores its basis in this canonical column
  HNF, which makes lattice equality a plain tuple comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import DimensionMismatch, NotASublattice


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_neg(u):
    return tuple(-a for a in u)


def vec_scale(c, u):
    return tuple(c * a for a in u)


def vec_dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vec_is_zero(u):
    return all(a == 0 for a in u)


def vec_primitive(u):
    """Divide a nonzero integer vector by the gcd of its entries."""
    g = 0
    for a in u:
        g = gcd(g, a)
    if g == 0:
        return tuple(u)
    return tuple(a // g for a in u)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major entries."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch("entry count does not match shape")

    @staticmethod
    def from_rows(rows, ncols=None):
        rows = [tuple(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged rows")
        return IntMatrix(len(rows), ncols, tuple(x for r in rows for x in r))

    @staticmethod
    def from_cols(cols, nrows=None):
        cols = [tuple(c) for c in cols]
        if nrows is None:
            if not cols:
                raise DimensionMismatch("need nrows for an empty column list")
            nrows = len(cols[0])
        if any(len(c) != nrows for c in cols):
            raise DimensionMismatch("ragged columns")
        return IntMatrix(
            nrows, len(cols), tuple(cols[j][i] for i in range(nrows) for j in range(len(cols)))
        )

    @staticmethod
    def identity(n):
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def zero(rows, cols):
        return IntMatrix(rows, cols, (0,) * (rows * cols))

    def entry(self, i, j):
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def col_list(self):
        return [self.col(j) for j in range(self.cols)]

    def transpose(self):
        return IntMatrix(
            self.cols, self.rows,
            tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def mul(self, other):
        if self.cols != other.rows:
            raise DimensionMismatch("matrix product shape mismatch")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.entry(k, j) for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def mul_vec(self, v):
        if self.cols != len(v):
            raise DimensionMismatch("matrix-vector shape mismatch")
        return tuple(vec_dot(self.row(i), v) for i in range(self.rows))


def _hnf_in_place(mat, trans):
    """Column HNF by integer column operations, mirrored on `trans`."""
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0

    def colswap(a, b):
        for r in mat:
            r[a], r[b] = r[b], r[a]
        for r in trans:
            r[a], r[b] = r[b], r[a]

    def coladd(dst, src, q):
        # column dst += q * column src
        for r in mat:
            r[dst] += q * r[src]
        for r in trans:
            r[dst] += q * r[src]

    def colneg(j):
        for r in mat:
            r[j] = -r[j]
        for r in trans:
            r[j] = -r[j]

    c = 0
    for i in range(nrows):
        if c >= ncols:
            break
        # gcd-reduce row i across columns >= c
        while True:
            nz = [j for j in range(c, ncols) if mat[i][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(mat[i][j]))
            if jmin != c:
                colswap(c, jmin)
            done = True
            for j in range(c + 1, ncols):
                if mat[i][j] != 0:
                    q = mat[i][j] // mat[i][c]
                    coladd(j, c, -q)
                    if mat[i][j] != 0:
                        done = False
            if done:
                break
        if c < ncols and mat[i][c] != 0:
            if mat[i][c] < 0:
                colneg(c)
            piv = mat[i][c]
            for j in range(c):
                q = mat[i][j] // piv  # floor division: leaves residue in [0, piv)
                if q:
                    coladd(j, c, -q)
            c += 1


def hnf(a: IntMatrix):
    """Column Hermite normal form: returns (H, U) with A @ U = H, U unimodular."""
    mat = a.row_list()
    trans = IntMatrix.identity(a.cols).row_list()
    _hnf_in_place(mat, trans)
    h = IntMatrix.from_rows(mat) if mat else IntMatrix(0, a.cols, ())
    u = IntMatrix.from_rows(trans) if trans else IntMatrix(0, 0, ())
    if a.rows == 0:
        h = IntMatrix(0, a.cols, ())
    return h, u


def snf(a: IntMatrix):
    """Smith normal form: returns (D, U, V) with U @ A @ V = D diagonal,
    d_1 | d_2 | ... >= 0, U and V unimodular."""
    m = a.row_list()
    nrows, ncols = a.rows, a.cols
    u = IntMatrix.identity(nrows).row_list()
    v = IntMatrix.identity(ncols).row_list()

    def rowswap(x, y):
        m[x], m[y] = m[y], m[x]
        u[x], u[y] = u[y], u[x]

    def rowadd(dst, src, q):
        m[dst] = [d + q * s for d, s in zip(m[dst], m[src])]
        u[dst] = [d + q * s for d, s in zip(u[dst], u[src])]

    def colswap(x, y):
        for r in m:
            r[x], r[y] = r[y], r[x]
        for r in v:
            r[x], r[y] = r[y], r[x]

    def coladd(dst, src, q):
        for r in m:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    def rowneg(x):
        m[x] = [-e for e in m[x]]
        u[x] = [-e for e in u[x]]

    t = 0
    while t < min(nrows, ncols):
        # find a pivot: nonzero entry of minimal absolute value in the block
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        rowswap(t, i)
        colswap(t, j)
        # clear row t and column t
        dirty = False
        for i in range(t + 1, nrows):
            if m[i][t] != 0:
                q = m[i][t] // m[t][t]
                rowadd(i, t, -q)
                if m[i][t] != 0:
                    dirty = True
        for j in range(t + 1, ncols):
            if m[t][j] != 0:
                q = m[t][j] // m[t][t]
                coladd(j, t, -q)
                if m[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility of the remaining block by the pivot
        piv = m[t][t]
        fixed = True
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if m[i][j] % piv != 0:
                    rowadd(t, i, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        if piv < 0:
            rowneg(t)
        t += 1
    d = IntMatrix.from_rows(m) if m else IntMatrix(0, ncols, ())
    return d, IntMatrix.from_rows(u), IntMatrix.from_rows(v)


def rank(a: IntMatrix) -> int:
    """Rank over the rationals by fraction-free Gaussian elimination."""
    m = a.row_list()
    nrows, ncols = a.rows, a.cols
    r = 0
    prev = 1
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == nrows:
            break
    return r


def det(a: IntMatrix) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    if a.rows != a.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = a.row_list()
    sign = 1
    prev = 1
    for c in range(n - 1):
        piv = None
        for i in range(c, n):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[c][c] * m[i][j] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def solve_integer(b: IntMatrix, v):
    """Solve B @ y = v over the integers; returns y or None.

    Works for any B via the column HNF: B U = H, solve H z = v by forward
    substitution on the pivot rows, then y = U z.
    """
    if len(v) != b.rows:
        raise DimensionMismatch("vector length does not match row count")
    h, u = hnf(b)
    z = [0] * b.cols
    pivots = []  # (row, col)
    r = -1
    for j in range(b.cols):
        col = h.col(j)
        nz = [i for i in range(b.rows) if col[i] != 0]
        if not nz:
            break
        pr = nz[0]
        if pr <= r:
            continue
        r = pr
        pivots.append((pr, j))
    for pr, j in pivots:
        acc = v[pr] - sum(h.entry(pr, k) * z[k] for k in range(j))
        piv = h.entry(pr, j)
        if acc % piv != 0:
            return None
        z[j] = acc // piv
    if h.mul_vec(tuple(z)) != tuple(v):
        return None
    return u.mul_vec(tuple(z))


def kernel_cols(a: IntMatrix) -> IntMatrix:
    """Columns spanning {x : A x = 0}; saturated because U is unimodular."""
    if a.rows == 0:
        return IntMatrix.identity(a.cols)
    h, u = hnf(a)
    ker = [u.col(j) for j in range(a.cols) if vec_is_zero(h.col(j))]
    return IntMatrix.from_cols(ker, nrows=a.cols)


@dataclass(frozen=True)
class Sublattice:
    """Finite-rank sublattice of Z^n, stored via its canonical HNF basis."""

    ambient_rank: int
    basis: IntMatrix  # n x r, canonical column HNF, no zero columns

    @staticmethod
    def from_generators(ambient_rank, vectors):
        """Sublattice spanned by the given integer vectors (may be dependent)."""
        for v in vectors:
            if len(v) != ambient_rank:
                raise DimensionMismatch("generator length does not match ambient rank")
        if not vectors:
            return Sublattice(ambient_rank, IntMatrix(ambient_rank, 0, ()))
        h, _ = hnf(IntMatrix.from_cols(list(vectors), nrows=ambient_rank))
        cols = [h.col(j) for j in range(h.cols) if not vec_is_zero(h.col(j))]
        return Sublattice(ambient_rank, IntMatrix.from_cols(cols, nrows=ambient_rank))

    @staticmethod
    def full(ambient_rank):
        return Sublattice(ambient_rank, IntMatrix.identity(ambient_rank))

    @staticmethod
    def zero(ambient_rank):
        return Sublattice(ambient_rank, IntMatrix(ambient_rank, 0, ()))

    @property
    def rank(self):
        return self.basis.cols

    def basis_vectors(self):
        return self.basis.col_list()


def member_lattice(lat: Sublattice, v) -> bool:
    """True iff v is an integer combination of the basis columns."""
    if len(v) != lat.ambient_rank:
        raise DimensionMismatch("vector length does not match ambient rank")
    return solve_integer(lat.basis, tuple(v)) is not None


def lattice_index(sub: Sublattice, sup: Sublattice):
    """Index [sup : sub] as a positive integer, or None for infinite index.

    Raises NotASublattice when some basis vector of `sub` is not in `sup`.
    """
    if sub.ambient_rank != sup.ambient_rank:
        raise DimensionMismatch("ambient ranks differ")
    coords = []
    for v in sub.basis_vectors():
        y = solve_integer(sup.basis, v)
        if y is None:
            raise NotASublattice(f"{v} is not in the claimed superlattice")
        coords.append(y)
    if sub.rank < sup.rank:
        return None
    # containment plus equal rank forces a square inclusion matrix
    incl = IntMatrix.from_cols(coords, nrows=sup.rank)
    d = det(incl)
    assert d != 0, "independent columns cannot have a singular inclusion matrix"
    return abs(d)


def saturate(lat: Sublattice) -> Sublattice:
    """Smallest sublattice containing `lat` with torsion-free quotient on its span."""
    n = lat.ambient_rank
    if lat.rank == 0:
        return lat
    if lat.rank == n:
        return Sublattice.full(n)
    # covectors vanishing on span(lat), then their common kernel
    perp = kernel_cols(lat.basis.transpose())  # n x k
    sat = kernel_cols(perp.transpose())  # n x rank
    return Sublattice.from_generators(n, sat.col_list())


def lattice_sum(a: Sublattice, b: Sublattice) -> Sublattice:
    if a.ambient_rank != b.ambient_rank:
        raise DimensionMismatch("ambient ranks differ")
    return Sublattice.from_generators(a.ambient_rank, a.basis_vectors() + b.basis_vectors())


def lattice_contains(big: Sublattice, small: Sublattice) -> bool:
    return all(member_lattice(big, v) for v in small.basis_vectors())
