"""Small dense matrices over :class:`~exint.scalar.Scalar`.

Used for auxiliary-space blocks (at most a few dozen rows), where dense
storage is simplest.  Physical-space operators live in :mod:`exint.spin`.
"""
from __future__ import annotations

from .errors import DimensionMismatch, NotInvertible
from .scalar import ONE, ZERO, Scalar, as_scalar, format_scalar, parse_scalar


class Matrix:
    """Exact dense matrix.  ``rows`` is a list of lists of Scalars."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        self.rows = [[as_scalar(v) for v in row] for row in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        for row in self.rows:
            if len(row) != ncols:
                raise DimensionMismatch("ragged matrix rows")

    @classmethod
    def _raw(cls, rows, nrows, ncols):
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = nrows
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows, ncols=None):
        ncols = nrows if ncols is None else ncols
        return cls._raw([[ZERO] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, n):
        m = cls.zeros(n)
        for i in range(n):
            m.rows[i][i] = ONE
        return m

    @classmethod
    def diag(cls, values):
        values = [as_scalar(v) for v in values]
        m = cls.zeros(len(values))
        for i, v in enumerate(values):
            m.rows[i][i] = v
        return m

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def copy(self):
        return Matrix._raw([list(r) for r in self.rows], self.nrows, self.ncols)

    def set(self, i, j, value):
        """In-place entry update; only for builders that own the matrix."""
        self.rows[i][j] = as_scalar(value)

    # --- algebra ----------------------------------------------------------
    def _check_same(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        return Matrix._raw(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            self.nrows, self.ncols,
        )

    def __sub__(self, other):
        self._check_same(other)
        return Matrix._raw(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            self.nrows, self.ncols,
        )

    def __neg__(self):
        return Matrix._raw([[-a for a in r] for r in self.rows], self.nrows, self.ncols)

    def scale(self, c):
        c = as_scalar(c)
        return Matrix._raw([[a * c for a in r] for r in self.rows], self.nrows, self.ncols)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, list):
            return self.apply(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.ncols
        out = []
        for r in self.rows:
            acc = [ZERO] * cols
            for a, brow in zip(r, other.rows):
                if a.re or a.im:
                    for j, b in enumerate(brow):
                        if b.re or b.im:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix._raw(out, self.nrows, cols)

    def apply(self, vec):
        """Matrix-vector product with a list of Scalars."""
        if len(vec) != self.ncols:
            raise DimensionMismatch("vector length mismatch")
        vec = [as_scalar(v) for v in vec]
        out = []
        for r in self.rows:
            acc = ZERO
            for a, b in zip(r, vec):
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return out

    def __pow__(self, k):
        if self.nrows != self.ncols:
            raise DimensionMismatch("power of a non-square matrix")
        result = Matrix.identity(self.nrows)
        for _ in range(k):
            result = result @ self
        return result

    def commutator(self, other):
        return self @ other - other @ self

    def transpose(self):
        return Matrix._raw(
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.ncols, self.nrows,
        )

    T = property(transpose)

    def trace(self):
        acc = ZERO
        for i in range(min(self.nrows, self.ncols)):
            acc = acc + self.rows[i][i]
        return acc

    def submatrix(self, r0, r1, c0, c1):
        return Matrix._raw([row[c0:c1] for row in self.rows[r0:r1]], r1 - r0, c1 - c0)

    def is_zero(self):
        return all(v.is_zero() for row in self.rows for v in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    __hash__ = None

    def first_difference(self, other):
        """(i, j, mine, theirs) for the first differing entry, or None."""
        self._check_same(other)
        for i, (r, s) in enumerate(zip(self.rows, other.rows)):
            for j, (a, b) in enumerate(zip(r, s)):
                if a != b:
                    return (i, j, a, b)
        return None

    # --- elimination ------------------------------------------------------
    def inverse(self):
        n = self.nrows
        if n != self.ncols:
            raise DimensionMismatch("inverse of a non-square matrix")
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
            if piv is None:
                raise NotInvertible(f"singular matrix (column {col})")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = aug[col][col].reciprocal()
            aug[col] = [v * inv for v in aug[col]]
            for r in range(n):
                if r != col and not aug[r][col].is_zero():
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return Matrix._raw([row[n:] for row in aug], n, n)

    def charpoly(self):
        """Coefficients of det(t*I - M), lowest degree first (Faddeev-LeVerrier)."""
        n = self.nrows
        if n != self.ncols:
            raise DimensionMismatch("charpoly of a non-square matrix")
        coeffs = [ZERO] * (n + 1)
        coeffs[n] = ONE
        m_k = Matrix.zeros(n)
        ident = Matrix.identity(n)
        c = ONE
        for k in range(1, n + 1):
            m_k = self @ m_k + ident.scale(c)
            c = -(self @ m_k).trace() / k
            coeffs[n - k] = c
        return coeffs

    # --- serialization ----------------------------------------------------
    def to_strings(self):
        return [[format_scalar(v) for v in row] for row in self.rows]

    @classmethod
    def from_strings(cls, rows):
        return cls([[parse_scalar(v) for v in row] for row in rows])

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(v) for v in r) for r in self.rows)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"


def row_reduce(columns, rhs=None):
    """Exact Gauss-Jordan on a system whose unknowns are the given columns.

    ``columns`` is a list of equal-length Scalar vectors; ``rhs`` an optional
    vector.  Returns ``(rank, solution)``, where ``solution`` is the unique
    coefficient vector when the columns are independent and the system is
    consistent, ``None`` when inconsistent, and a particular solution (free
    variables set to zero) when the columns are dependent.
    """
    ncols = len(columns)
    nrows = len(columns[0]) if columns else (len(rhs) if rhs is not None else 0)
    rows = []
    for i in range(nrows):
        row = [columns[j][i] for j in range(ncols)]
        row.append(rhs[i] if rhs is not None else ZERO)
        if any(not v.is_zero() for v in row):
            rows.append(row)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(rows)) if not rows[k][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].reciprocal()
        rows[r] = [v * inv for v in rows[r]]
        for k in range(len(rows)):
            if k != r and not rows[k][c].is_zero():
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
    rank = r
    for k in range(rank, len(rows)):
        if not rows[k][ncols].is_zero():
            return rank, None
    sol = [ZERO] * ncols
    for k, c in enumerate(pivots):
        sol[c] = rows[k][ncols]
    return rank, sol


def vec_is_zero(vec):
    return all(as_scalar(v).is_zero() for v in vec)


__all__ = ["Matrix", "row_reduce", "vec_is_zero", "Scalar"]
