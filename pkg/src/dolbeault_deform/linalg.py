"""Exact dense linear algebra over Q(i).

Matrices are lists of rows of GaussRational.  Shapes are carried
explicitly because a graded piece may be zero-dimensional, and a 0 x n
matrix has no rows to read the width from.
"""

from .scalars import ONE, ZERO, as_gauss


class Matrix:
    """Dense exact matrix with an explicit shape."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [[ZERO] * ncols for _ in range(nrows)]
        else:
            rows = [[as_gauss(x) for x in row] for row in rows]
            if len(rows) != nrows or any(len(r) != ncols for r in rows):
                raise ValueError("rows do not match shape %dx%d" % (nrows, ncols))
        self.rows = rows

    @classmethod
    def identity(cls, n):
        m = cls(n, n)
        for i in range(n):
            m.rows[i][i] = ONE
        return m

    @classmethod
    def from_columns(cls, nrows, cols):
        m = cls(nrows, len(cols))
        for j, col in enumerate(cols):
            for i in range(nrows):
                m.rows[i][j] = col[i]
        return m

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def copy(self):
        out = Matrix(self.nrows, self.ncols)
        out.rows = [list(r) for r in self.rows]
        return out

    def column(self, j):
        return [self.rows[i][j] for i in range(self.nrows)]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def is_zero(self):
        return all(not x for row in self.rows for x in row)

    def conj_transpose(self):
        out = Matrix(self.ncols, self.nrows)
        for i in range(self.nrows):
            for j in range(self.ncols):
                out.rows[j][i] = self.rows[i][j].conjugate()
        return out

    H = property(conj_transpose)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s + %s" % (self.shape, other.shape))
        out = Matrix(self.nrows, self.ncols)
        out.rows = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        return out

    def __neg__(self):
        out = Matrix(self.nrows, self.ncols)
        out.rows = [[-a for a in r] for r in self.rows]
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        out = Matrix(self.nrows, self.ncols)
        out.rows = [[c * a for a in r] for r in self.rows]
        return out

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
            out = Matrix(self.nrows, other.ncols)
            cols = other.columns()
            for i, row in enumerate(self.rows):
                nz = [(k, a) for k, a in enumerate(row) if a]
                for j, col in enumerate(cols):
                    s = ZERO
                    for k, a in nz:
                        b = col[k]
                        if b:
                            s = s + a * b
                    out.rows[i][j] = s
            return out
        return self.apply(other)

    def apply(self, vec):
        """Matrix times a column vector; entries may be Polys."""
        if len(vec) != self.ncols:
            raise ValueError("vector length %d, expected %d" % (len(vec), self.ncols))
        out = []
        for row in self.rows:
            s = ZERO
            for a, x in zip(row, vec):
                if a and x:
                    s = a * x + s
            out.append(s)
        return out

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row mismatch in hstack")
        out = Matrix(self.nrows, self.ncols + other.ncols)
        out.rows = [r1 + r2 for r1, r2 in zip(self.rows, other.rows)]
        return out

    def __repr__(self):
        return "Matrix(%dx%d)" % self.shape


def rref(m):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    a = [list(r) for r in m.rows]
    nrows, ncols = m.nrows, m.ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    out = Matrix(nrows, ncols)
    out.rows = a
    return out, pivots


def rank(m):
    return len(rref(m)[1])


def nullspace(m):
    """Basis of the right kernel, one list per basis vector (RREF-normalized)."""
    R, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * m.ncols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -R.rows[i][f]
        basis.append(v)
    return basis


def nullity(m):
    return m.ncols - rank(m)


def column_space(m):
    """Basis of the column space taken from the pivot columns of m."""
    _, pivots = rref(m)
    return [m.column(c) for c in pivots]


def inverse(m):
    if m.nrows != m.ncols:
        raise ValueError("inverse of non-square matrix")
    n = m.nrows
    R, pivots = rref(m.hstack(Matrix.identity(n)))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    out = Matrix(n, n)
    out.rows = [row[n:] for row in R.rows]
    return out


def solve(m, b):
    """One exact solution x of m x = b, or None when inconsistent."""
    aug = m.hstack(Matrix.from_columns(m.nrows, [b]))
    R, pivots = rref(aug)
    if m.ncols in pivots:
        return None
    x = [ZERO] * m.ncols
    for i, p in enumerate(pivots):
        x[p] = R.rows[i][m.ncols]
    return x
