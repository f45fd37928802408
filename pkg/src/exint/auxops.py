"""Truncated auxiliary-space operators.

The auxiliary space carries the lowest-weight sl(2) module with basis
``|0>, |1>, ...``; the three MPA tensors are

    A0 = sum (lam - k) |k><k|
    A+ = sum (k - 2 lam) |k><k+1|
    A- = sum (k + 1) |k+1><k|

Operators on two copies of the auxiliary space that conserve the total
excitation number are stored per sector ``alpha`` in the basis
``|k, alpha-k>``, k = 0..alpha (see :class:`BlockMatrix`).
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import MismatchError, NotInvertible, TruncationTooSmall
from .linalg import Matrix
from .report import Report
from .scalar import ONE, ZERO, Scalar, as_scalar, gbinom

AuxMatrix = Matrix

SIGNS = ("0", "+", "-")


def amplitude(s: str, k: int, lam):
    """Nonzero entry of ``A_s`` in row/column k (see module docstring)."""
    if s == "0":
        return lam - k
    if s == "+":
        return k - 2 * lam
    if s == "-":
        return k + 1
    raise ValueError(f"unknown MPA label {s!r}")


def build_mpa_tensor(s: str, lam, D: int) -> Matrix:
    if D < 1:
        raise ValueError("D must be >= 1")
    lam = as_scalar(lam)
    m = Matrix.zeros(D)
    for k in range(D):
        if s == "0":
            m.rows[k][k] = lam - k
        elif s == "+" and k + 1 < D:
            m.rows[k][k + 1] = as_scalar(k - 2 * lam)
        elif s == "-" and k + 1 < D:
            m.rows[k + 1][k] = as_scalar(k + 1)
        elif s not in SIGNS:
            raise ValueError(f"unknown MPA label {s!r}")
    return m


def check_sl2(lam, D: int) -> Report:
    """Verify the sl(2) commutators on the guarded interior block."""
    if D < 3:
        raise TruncationTooSmall(f"D={D} leaves no truncation-free interior")
    lam = as_scalar(lam)
    a0, ap, am = (build_mpa_tensor(s, lam, D) for s in SIGNS)
    m = D - 2
    rep = Report("sl2", {"lambda": str(lam), "D": D})
    relations = {
        "[A+,A-]=-2A0": (ap.commutator(am), a0.scale(-2)),
        "[A0,A+]=+A+": (a0.commutator(ap), ap),
        "[A0,A-]=-A-": (a0.commutator(am), -am),
    }
    for name, (lhs, rhs) in relations.items():
        diff = lhs.submatrix(0, m, 0, m).first_difference(rhs.submatrix(0, m, 0, m))
        rep.details[name] = diff is None
        if diff is not None:
            rep.fail({"relation": name, "entry": [diff[0], diff[1]]})
    return rep


# --- Lax operator ------------------------------------------------------------

@dataclass
class LaxMatrix:
    """2x2 block matrix over the auxiliary space, keyed by Weyl indices."""

    blocks: dict
    dim: int

    def __getitem__(self, key):
        return self.blocks[key]


def build_lax(lam, D: int):
    """Return ``(L, L0, Lprime)`` with ``L(lam) = L0 + lam * Lprime``."""
    lam = as_scalar(lam)
    a0, ap, am = (build_mpa_tensor(s, lam, D) for s in SIGNS)
    L = LaxMatrix({(0, 0): a0, (1, 1): a0, (0, 1): ap, (1, 0): am}, D)
    z0, zp, zm = (build_mpa_tensor(s, 0, D) for s in SIGNS)
    L0 = LaxMatrix({(0, 0): z0, (1, 1): z0, (0, 1): zp, (1, 0): zm}, D)
    ident = Matrix.identity(D)
    Lp = LaxMatrix({(0, 0): ident, (1, 1): ident, (0, 1): -build_B(D), (1, 0): Matrix.zeros(D)}, D)
    return L, L0, Lp


def build_B(D: int) -> Matrix:
    """``B = -d/dx A+(x) = 2 sum |k><k+1|``."""
    m = Matrix.zeros(D)
    for k in range(D - 1):
        m.rows[k][k + 1] = as_scalar(2)
    return m


# --- sector-resolved operators on two auxiliary copies -----------------------

class BlockMatrix:
    """Number-sector family ``alpha -> matrix``.

    ``shift`` is the change of total excitation number: 0 for operators
    that preserve each sector (block alpha is square of size alpha+1),
    -1 for maps sector alpha+1 -> alpha (block alpha is (alpha+1) x
    (alpha+2)) and +1 for maps alpha -> alpha+1.
    """

    def __init__(self, blocks, alpha_max=None, shift=0):
        self.blocks = dict(blocks)
        self.shift = shift
        self.alpha_max = max(self.blocks) if alpha_max is None else alpha_max
        for a in range(self.alpha_max + 1):
            if a not in self.blocks:
                raise KeyError(f"sector {a} missing")
            if self.blocks[a].shape != self.block_shape(a):
                raise ValueError(f"sector {a}: shape {self.blocks[a].shape} != {self.block_shape(a)}")

    def block_shape(self, a):
        if self.shift == 0:
            return (a + 1, a + 1)
        if self.shift == -1:
            return (a + 1, a + 2)
        return (a + 2, a + 1)

    def __getitem__(self, a) -> Matrix:
        if a not in self.blocks or a > self.alpha_max:
            raise KeyError(f"sector {a} not present (alpha_max={self.alpha_max})")
        return self.blocks[a]

    def __eq__(self, other):
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        return (self.shift == other.shift and self.alpha_max == other.alpha_max
                and all(self.blocks[a] == other.blocks[a] for a in range(self.alpha_max + 1)))

    __hash__ = None

    def first_difference(self, other):
        for a in range(self.alpha_max + 1):
            d = self.blocks[a].first_difference(other.blocks[a])
            if d is not None:
                return (a,) + d
        return None

    def map(self, fn):
        return BlockMatrix({a: fn(m) for a, m in self.blocks.items()}, self.alpha_max, self.shift)

    def __add__(self, other):
        return BlockMatrix({a: self[a] + other[a] for a in range(self.alpha_max + 1)}, self.alpha_max, self.shift)

    def __sub__(self, other):
        return BlockMatrix({a: self[a] - other[a] for a in range(self.alpha_max + 1)}, self.alpha_max, self.shift)

    def to_json(self) -> dict:
        return {
            "alpha_max": self.alpha_max,
            "blocks": [self.blocks[a].to_strings() for a in range(self.alpha_max + 1)],
        }

    @classmethod
    def from_json(cls, data, shift=0):
        blocks = {a: Matrix.from_strings(rows) for a, rows in enumerate(data["blocks"])}
        return cls(blocks, data["alpha_max"], shift)


def aux_to_json(m: Matrix) -> dict:
    return {"dim": m.nrows, "entries": m.to_strings()}


def aux_from_json(data) -> Matrix:
    m = Matrix.from_strings(data["entries"])
    if m.nrows != data["dim"]:
        raise ValueError("dim does not match entries")
    return m


def pair_sector_block(a: Matrix, b: Matrix, src: int, tgt: int) -> Matrix:
    """Matrix of ``a (x) b`` from sector ``src`` to sector ``tgt``.

    Entries are read directly from ``a`` and ``b`` (no products of
    truncated operators), so the result is exact provided both have
    dimension > max(src, tgt).
    """
    rows = []
    for i in range(tgt + 1):
        ai = a.rows[i]
        bi = b.rows[tgt - i]
        row = []
        for j in range(src + 1):
            x = ai[j]
            if x.is_zero():
                row.append(ZERO)
                continue
            y = bi[src - j]
            row.append(ZERO if y.is_zero() else x * y)
        rows.append(row)
    return Matrix._raw(rows, tgt + 1, src + 1)


def weyl_shift(nu: int, nu2: int) -> int:
    """Change of auxiliary number carried by spin component ``E^{nu nu2}``."""
    return nu - nu2


def lax_pair_block(first: LaxMatrix, second: LaxMatrix, nu: int, nu2: int, src: int) -> Matrix:
    """Sector block of the spin component (nu, nu2) of ``first (x)_a second``.

    The spin factors are matrix-multiplied, the auxiliary factors
    tensored: sum over nu' of first[nu, nu'] (x) second[nu', nu2].
    """
    tgt = src + weyl_shift(nu, nu2)
    acc = None
    for mid in (0, 1):
        term = pair_sector_block(first[(nu, mid)], second[(mid, nu2)], src, tgt)
        acc = term if acc is None else acc + term
    return acc


def pair_component(first: LaxMatrix, second: LaxMatrix, nu: int, nu2: int, alpha_max: int) -> BlockMatrix:
    """All sector blocks of one spin component, indexed as in :class:`BlockMatrix`."""
    shift = weyl_shift(nu, nu2)
    blocks = {}
    for a in range(alpha_max + 1):
        src = a + 1 if shift == -1 else a
        blocks[a] = lax_pair_block(first, second, nu, nu2, src)
    return BlockMatrix(blocks, alpha_max, shift)


# --- Lambda tensors ----------------------------------------------------------

WEYL = ((0, 0), (0, 1), (1, 0), (1, 1))


def _weyl_to_pauli(comp):
    """Pauli labels: 0 = 00 + 11, z = 00 - 11, + = 01, - = 10."""
    return {
        "0": comp[(0, 0)] + comp[(1, 1)],
        "z": comp[(0, 0)] - comp[(1, 1)],
        "+": comp[(0, 1)],
        "-": comp[(1, 0)],
    }


def _explicit_lambda1(alpha_max):
    """Closed-form constant blocks of the first-order Lambda tensor."""
    l0, lz, lp, lm, l2p = {}, {}, {}, {}, {}
    for a in range(alpha_max + 1):
        m0 = Matrix.zeros(a + 1)
        mz = Matrix.zeros(a + 1)
        for k in range(a + 1):
            m0.set(k, k, 2 * (a - 2 * k))
            if k < a:
                m0.set(k, k + 1, 2 * (a - k))
                m0.set(k + 1, k, -2 * (k + 1))
                mz.set(k, k + 1, 2 * (a - k))
                mz.set(k + 1, k, 2 * (k + 1))
        mp = Matrix.zeros(a + 1, a + 2)
        m2 = Matrix.zeros(a + 1, a + 2)
        mm = Matrix.zeros(a + 2, a + 1)
        for k in range(a + 1):
            mp.set(k, k, 3 * k - a)
            mp.set(k, k + 1, 3 * k - 2 * a)
            m2.set(k, k, -2)
            m2.set(k, k + 1, -2)
            mm.set(k + 1, k, k + 1)
            mm.set(k, k, k - a - 1)
        l0[a], lz[a], lp[a], lm[a], l2p[a] = m0, mz, mp, mm, m2
    return {
        (1, "0"): BlockMatrix(l0, alpha_max, 0),
        (1, "z"): BlockMatrix(lz, alpha_max, 0),
        (1, "+"): BlockMatrix(lp, alpha_max, -1),
        (1, "-"): BlockMatrix(lm, alpha_max, +1),
        (2, "+"): BlockMatrix(l2p, alpha_max, -1),
    }


def explicit_lambda_blocks(alpha_max: int) -> dict:
    return _explicit_lambda1(alpha_max)


def build_lambda_components(x, alpha_max: int) -> dict:
    """Sector blocks of the three Lambda orders, keyed ``(order, label)``.

    Labels are Weyl pairs ``(nu, nu2)`` and the Pauli-style strings
    ``"0", "z", "+", "-"``.  The constant orders 1 and 2 are built from the
    Lax operator and cross-checked against their closed forms; a
    disagreement raises :class:`MismatchError`.
    """
    x = as_scalar(x)
    D = alpha_max + 3
    Lx, L0, Lp = build_lax(x, D)
    out = {}
    for nu, nu2 in WEYL:
        out[(0, (nu, nu2))] = pair_component(Lx, Lx, nu, nu2, alpha_max)
        lam1 = pair_component(L0, Lp, nu, nu2, alpha_max) - pair_component(Lp, L0, nu, nu2, alpha_max)
        out[(1, (nu, nu2))] = lam1
        out[(2, (nu, nu2))] = pair_component(Lp, Lp, nu, nu2, alpha_max)
    for order in (0, 1, 2):
        pauli = _weyl_to_pauli({w: out[(order, w)] for w in WEYL})
        for label, bm in pauli.items():
            out[(order, label)] = bm
    for key, bm in _explicit_lambda1(alpha_max).items():
        diff = out[key].first_difference(bm)
        if diff is not None:
            raise MismatchError(f"Lambda{key}: operator form and closed form differ at {diff}")
    return out


def build_structops(alpha_max: int):
    """Number operator N and swap P, sector by sector."""
    n_blocks, p_blocks = {}, {}
    for a in range(alpha_max + 1):
        n_blocks[a] = Matrix.identity(a + 1).scale(a)
        p = Matrix.zeros(a + 1)
        for k in range(a + 1):
            p.rows[k][a - k] = ONE
        p_blocks[a] = p
    return BlockMatrix(n_blocks, alpha_max), BlockMatrix(p_blocks, alpha_max)


def swap_matrix(a: int) -> Matrix:
    p = Matrix.zeros(a + 1)
    for k in range(a + 1):
        p.rows[k][a - k] = ONE
    return p


def parity_image(components: dict, order: int, alpha_max: int) -> dict:
    """Apply the full parity map to the Weyl components of one Lambda order.

    Spin part sends E^{nu nu2} to E^{1-nu2, 1-nu}; auxiliary part
    conjugates by the sector swap.
    """
    out = {}
    for nu, nu2 in WEYL:
        src = components[(order, (1 - nu2, 1 - nu))]
        blocks = {}
        for a in range(alpha_max + 1):
            m = src[a]
            rows, cols = m.shape
            blocks[a] = swap_matrix(rows - 1) @ m @ swap_matrix(cols - 1)
        out[(nu, nu2)] = BlockMatrix(blocks, alpha_max, src.shift)
    return out


# --- transposal symmetry -----------------------------------------------------

def build_U(lam, D: int) -> Matrix:
    """Diagonal ``U(lam)`` with entries binom(2 lam, k); must be invertible."""
    lam = as_scalar(lam)
    diag = [gbinom(2 * lam, k) for k in range(D)]
    for k, v in enumerate(diag):
        if v.is_zero():
            raise NotInvertible(f"U({lam}) has a zero diagonal entry at k={k}")
    return Matrix.diag(diag)


def check_AT_symmetry(lam, D: int) -> Report:
    """(-1)^s A_s^T = U A_{-s} U^{-1} on the interior (D-1)-block."""
    lam = as_scalar(lam)
    U = build_U(lam, D)
    Uinv = Matrix.diag([ONE / U[k, k] for k in range(D)])
    rep = Report("AT", {"lambda": str(lam), "D": D})
    m = D - 1
    for s, sign, opp in (("+", -1, "-"), ("0", 1, "0"), ("-", -1, "+")):
        lhs = build_mpa_tensor(s, lam, D).transpose().scale(sign)
        rhs = U @ build_mpa_tensor(opp, lam, D) @ Uinv
        diff = lhs.submatrix(0, m, 0, m).first_difference(rhs.submatrix(0, m, 0, m))
        rep.details[s] = diff is None
        if diff is not None:
            rep.fail({"s": s, "entry": [diff[0], diff[1]]})
    return rep


__all__ = [
    "AuxMatrix", "BlockMatrix", "LaxMatrix", "Report", "Scalar",
    "amplitude", "aux_from_json", "aux_to_json", "build_B", "build_U", "build_lambda_components",
    "build_lax", "build_mpa_tensor", "build_structops", "check_AT_symmetry", "check_sl2",
    "explicit_lambda_blocks", "lax_pair_block", "pair_component", "pair_sector_block",
    "parity_image", "swap_matrix", "weyl_shift",
]
