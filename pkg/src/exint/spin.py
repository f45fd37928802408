"""Sparse exact operators on the spin space of n sites.

Basis states are multi-indices (nu_1, ..., nu_n) with nu = 0 the up spin
(sigma^z eigenvalue +1); the integer index puts nu_1 in the most
significant bit.  ``sigma^+ = |0><1|`` raises the magnetization by 2.
"""
from __future__ import annotations

from .errors import DimensionMismatch
from .scalar import ONE, ZERO, Scalar, as_scalar, format_scalar, parse_scalar


def _nz(v) -> bool:
    return v != 0


class SpinMatrix:
    """Sparse 2^n x 2^n matrix; ``entries`` maps (row, col) to a nonzero value.

    Values are usually :class:`Scalar`, but Python complex numbers work as
    well (the numerical Bethe routines use that).
    """

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries=None):
        self.n = n
        self.entries = {}
        if entries:
            dim = 1 << n
            for (r, c), v in entries.items():
                if not (0 <= r < dim and 0 <= c < dim):
                    raise IndexError(f"entry ({r}, {c}) outside a {dim}x{dim} matrix")
                if _nz(v):
                    self.entries[(r, c)] = v

    @classmethod
    def _raw(cls, n, entries):
        m = object.__new__(cls)
        m.n = n
        m.entries = entries
        return m

    @property
    def dim(self) -> int:
        return 1 << self.n

    @classmethod
    def identity(cls, n, value=ONE):
        return cls._raw(n, {(i, i): value for i in range(1 << n)})

    @classmethod
    def zero(cls, n):
        return cls._raw(n, {})

    @classmethod
    def diagonal(cls, n, fn):
        out = {}
        for i in range(1 << n):
            v = fn(i)
            if _nz(v):
                out[(i, i)] = v
        return cls._raw(n, out)

    @classmethod
    def product(cls, factors, coeff=ONE):
        """Tensor product of one-site 2x2 operators given as {(r, c): value} dicts."""
        terms = {(0, 0): coeff}
        for f in factors:
            nxt = {}
            for (r, c), v in terms.items():
                for (a, b), w in f.items():
                    nxt[(2 * r + a, 2 * c + b)] = v * w
            terms = nxt
        return cls._raw(len(factors), {k: v for k, v in terms.items() if _nz(v)})

    def __getitem__(self, idx):
        return self.entries.get(idx, ZERO)

    def _check(self, other):
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n} vs {other.n} sites")

    # --- linear structure ---------------------------------------------------
    def __add__(self, other):
        self._check(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            s = out.get(k)
            s = v if s is None else s + v
            if _nz(s):
                out[k] = s
            else:
                out.pop(k, None)
        return SpinMatrix._raw(self.n, out)

    def __neg__(self):
        return SpinMatrix._raw(self.n, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not _nz(c):
            return SpinMatrix.zero(self.n)
        return SpinMatrix._raw(self.n, {k: v * c for k, v in self.entries.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, dict):
            return self.apply(other)
        self._check(other)
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out = {}
        for (i, k), a in self.entries.items():
            row = by_row.get(k)
            if not row:
                continue
            for j, b in row:
                key = (i, j)
                prev = out.get(key)
                out[key] = a * b if prev is None else prev + a * b
        return SpinMatrix._raw(self.n, {k: v for k, v in out.items() if _nz(v)})

    def apply(self, vec: dict) -> dict:
        """Action on a sparse vector ``{index: value}``."""
        out = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x is not None:
                prev = out.get(r)
                out[r] = v * x if prev is None else prev + v * x
        return {k: v for k, v in out.items() if _nz(v)}

    def commutator(self, other):
        return self @ other - other @ self

    def transpose(self):
        return SpinMatrix._raw(self.n, {(c, r): v for (r, c), v in self.entries.items()})

    T = property(transpose)

    def conj(self):
        return SpinMatrix._raw(self.n, {k: v.conjugate() for k, v in self.entries.items()})

    def dagger(self):
        return self.transpose().conj()

    def trace(self):
        acc = ZERO
        for (r, c), v in self.entries.items():
            if r == c:
                acc = acc + v
        return acc

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, SpinMatrix):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    __hash__ = None

    def conjugate_by(self, perm):
        """``Q A Q`` for a permutation matrix Q given as an index map (involution)."""
        return SpinMatrix._raw(self.n, {(perm[r], perm[c]): v for (r, c), v in self.entries.items()})

    def restrict_columns(self, cols):
        cols = set(cols)
        return SpinMatrix._raw(self.n, {k: v for k, v in self.entries.items() if k[1] in cols})

    def map(self, fn):
        out = {}
        for k, v in self.entries.items():
            w = fn(v)
            if _nz(w):
                out[k] = w
        return SpinMatrix._raw(self.n, out)

    def to_dense(self):
        import numpy as np
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for (r, c), v in self.entries.items():
            m[r, c] = complex(v)
        return m

    # --- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n,
                "entries": [[r, c, format_scalar(as_scalar(v))] for (r, c), v in sorted(self.entries.items())]}

    @classmethod
    def from_json(cls, data):
        return cls(data["n"], {(r, c): parse_scalar(s) for r, c, s in data["entries"]})

    def __repr__(self):
        return f"SpinMatrix(n={self.n}, nnz={len(self.entries)})"


# --- standard operators -------------------------------------------------------

SIGMA_PLUS = {(0, 1): ONE}
SIGMA_MINUS = {(1, 0): ONE}
SIGMA_Z = {(0, 0): ONE, (1, 1): -ONE}
IDENTITY = {(0, 0): ONE, (1, 1): ONE}
PROJ_UP = {(0, 0): ONE}
PROJ_DOWN = {(1, 1): ONE}


def bits(index: int, n: int):
    """Multi-index (nu_1, ..., nu_n) of a basis state."""
    return tuple((index >> (n - 1 - j)) & 1 for j in range(n))


def from_bits(nus) -> int:
    out = 0
    for b in nus:
        out = 2 * out + b
    return out


def local_operator(n: int, site_ops: dict, coeff=ONE) -> SpinMatrix:
    """Tensor product with ``site_ops[j]`` on site j (0-based), identity elsewhere."""
    return SpinMatrix.product([site_ops.get(j, IDENTITY) for j in range(n)], coeff)


def magnetization(n: int) -> SpinMatrix:
    return SpinMatrix.diagonal(n, lambda i: Scalar(sum(1 - 2 * b for b in bits(i, n))))


def reflection_map(n: int):
    """Index map of the reflection Q |nu_1..nu_n> = |nu_n..nu_1>."""
    return [from_bits(bits(i, n)[::-1]) for i in range(1 << n)]


def xxx_hamiltonian(n: int) -> SpinMatrix:
    """Sum over bonds of 2 s+ s- + 2 s- s+ + sz sz (open chain)."""
    h = SpinMatrix.zero(n)
    two = Scalar(2)
    for j in range(n - 1):
        h = h + local_operator(n, {j: SIGMA_PLUS, j + 1: SIGMA_MINUS}, two)
        h = h + local_operator(n, {j: SIGMA_MINUS, j + 1: SIGMA_PLUS}, two)
        h = h + local_operator(n, {j: SIGMA_Z, j + 1: SIGMA_Z})
    return h


def sector_indices(n: int, ups: int):
    """Basis indices with exactly ``ups`` up spins, ascending."""
    return [i for i in range(1 << n) if n - bin(i).count("1") == ups]


__all__ = [
    "IDENTITY", "PROJ_DOWN", "PROJ_UP", "SIGMA_MINUS", "SIGMA_PLUS", "SIGMA_Z", "SpinMatrix",
    "bits", "from_bits", "local_operator", "magnetization", "reflection_map", "sector_indices",
    "xxx_hamiltonian",
]
