"""The R-matrix generator H(x) in four equivalent closed forms.

Each sector block ``H^(alpha)(x)`` is an (alpha+1)x(alpha+1) matrix with
simple poles at ``x = m/2``.  The forms are:

* first form: explicit pole sums, upper triangle filled by the parity rule
  ``H[alpha-k, alpha-l] = -H[k, l]``;
* compact form: binomial quotients, diagonal as an exact logarithmic
  derivative;
* residue form: ``H = sum_m X^m f_m(x)`` with integer-valued residue tensors;
* Jordan form: ``H = W Delta W^-1`` with constant nilpotent ``Delta``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .auxops import BlockMatrix, swap_matrix
from .errors import PoleError, SingularW
from .linalg import Matrix
from .report import Report
from .scalar import ZERO, Scalar, as_scalar, check_not_pole, f_pole, gbinom


def _poles(x, alpha):
    return [f_pole(m, x) for m in range(alpha + 1)]


def _fill_by_parity(h: Matrix, alpha: int) -> Matrix:
    for k in range(alpha + 1):
        for l in range(alpha + 1):
            if k < l or (k == l and 2 * k > alpha):
                h.rows[k][l] = -h.rows[alpha - k][alpha - l]
    return h


def h_first(alpha: int, x) -> Matrix:
    x = as_scalar(x)
    check_not_pole(x)
    f = _poles(x, alpha)
    h = Matrix.zeros(alpha + 1)
    for k in range(alpha + 1):
        for l in range(k):
            acc = ZERO
            for m in range(l, k):
                c = gbinom(k - l - 1, m - l)
                acc = acc + f[m] * (c if m % 2 == 0 else -c)
            pref = gbinom(k, l) * Fraction((-1) ** (k - 1), 2)
            h.rows[k][l] = acc * pref
        if 2 * k <= alpha:
            acc = ZERO
            for m in range(k, alpha - k):
                acc = acc + f[m]
            h.rows[k][k] = acc * Fraction(-1, 2)
    return _fill_by_parity(h, alpha)


def _log_derivative_binomial(top_const: int, top_slope: int, j: int, x) -> Scalar:
    """d/dx log binom(top_const + top_slope*x, j), summed over linear factors."""
    acc = ZERO
    for i in range(j):
        denom = top_const - i + top_slope * x
        if denom.is_zero():
            raise PoleError(2 * (top_const - i), x)
        acc = acc + Scalar(top_slope) / denom
    return acc


def h_compact(alpha: int, x) -> Matrix:
    x = as_scalar(x)
    check_not_pole(x)
    h = Matrix.zeros(alpha + 1)
    for k in range(alpha + 1):
        for l in range(k):
            b = gbinom(k - 1 - 2 * x, k - l)
            if b.is_zero():
                raise PoleError(2 * k - 2, x)
            sign = 1 if (k - l) % 2 == 0 else -1
            h.rows[k][l] = gbinom(k, l) * Fraction(sign, k - l) / b
        if 2 * k <= alpha:
            h.rows[k][k] = _log_derivative_binomial(alpha - k - 1, -2, alpha - 2 * k, x) * Fraction(-1, 2)
    return _fill_by_parity(h, alpha)


# --- residue form -------------------------------------------------------------

@dataclass
class ResidueFamily:
    alpha: int
    tensors: list      # X^(alpha) p, p = 0..alpha
    raw_Y: list        # Y^(alpha) p

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "residues": [{"p": p, "X": x.to_strings(), "Y": y.to_strings()}
                         for p, (x, y) in enumerate(zip(self.tensors, self.raw_Y))],
        }


def y_tensor(alpha: int, p: int) -> Matrix:
    y = Matrix.zeros(alpha + 1)
    for k in range(alpha + 1):
        for l in range(alpha + 1):
            if p - l < 0:
                continue
            v = gbinom(k, l) * gbinom(k - l - 1, p - l)
            if not v.is_zero():
                y.rows[k][l] = v if (k - p - 1) % 2 == 0 else -v
    return y


def h_residue(alpha: int) -> ResidueFamily:
    P = swap_matrix(alpha)
    ys = [y_tensor(alpha, p) for p in range(alpha + 1)]
    xs = [(y - P @ y @ P).scale(Fraction(1, 2)) for y in ys]
    return ResidueFamily(alpha, xs, ys)


def reconstruct(family: ResidueFamily, x) -> Matrix:
    x = as_scalar(x)
    check_not_pole(x)
    h = Matrix.zeros(family.alpha + 1)
    for m, xm in enumerate(family.tensors):
        h = h + xm.scale(f_pole(m, x))
    return h


# --- Jordan form --------------------------------------------------------------

def jordan_W(alpha: int, x) -> Matrix:
    x = as_scalar(x)
    w = Matrix.zeros(alpha + 1)
    for k in range(alpha + 1):
        for l in range(k, alpha + 1):
            v = gbinom(alpha - k, alpha - l) * gbinom(2 * x, alpha - l) / gbinom(alpha, l)
            v = v * Fraction(2) ** (l - alpha)
            w.rows[k][l] = v if (k + l) % 2 == 0 else -v
    return w


def jordan_delta(alpha: int, scale=Fraction(1, 2)) -> Matrix:
    """Strictly lower triangular ``Delta[k, l] = scale * 2^(l-k+1) / (k-l)``.

    ``scale = 1/2`` is the normalization for which ``W Delta W^-1 = H``;
    ``scale = 1`` reproduces ``2 H``.
    """
    d = Matrix.zeros(alpha + 1)
    for k in range(alpha + 1):
        for l in range(k):
            d.rows[k][l] = as_scalar(scale * Fraction(2) ** (l - k + 1) / (k - l))
    return d


def h_jordan(alpha: int, x):
    """Return ``(W, Delta)``; raises :class:`SingularW` if W is singular."""
    w = jordan_W(alpha, x)
    for k in range(alpha + 1):
        if w[k, k].is_zero():
            raise SingularW(f"W^{alpha}({x}) has zero diagonal at {k}")
    return w, jordan_delta(alpha)


def reconstruct_jordan(alpha: int, x) -> Matrix:
    w, d = h_jordan(alpha, x)
    return w @ d @ w.inverse()


# --- null vectors -------------------------------------------------------------

@dataclass
class NullPair:
    v: list
    u: list


def null_pair(alpha: int) -> NullPair:
    v = [Scalar((-1) ** k) for k in range(alpha + 1)]
    u = [Scalar((-1) ** k * k) for k in range(alpha + 1)]
    return NullPair(v, u)


def measure_u_constant(alpha: int, x):
    """c with H u = (c/x) v, or None if H u is not proportional to v."""
    x = as_scalar(x)
    h = h_first(alpha, x)
    pair = null_pair(alpha)
    hu = h.apply(pair.u)
    ratio = None
    for a, b in zip(hu, pair.v):
        r = a / b
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio * x


def check_null(alpha: int, x) -> Report:
    """H v = 0, H^2 u = 0 and H u = (c(alpha)/x) v with c measured."""
    x = as_scalar(x)
    h = h_first(alpha, x)
    pair = null_pair(alpha)
    rep = Report("nullspace", {"alpha": alpha, "x": str(x)})
    if any(not c.is_zero() for c in h.apply(pair.v)):
        rep.fail({"identity": "H v = 0"})
    if any(not c.is_zero() for c in (h @ h).apply(pair.u)):
        rep.fail({"identity": "H^2 u = 0"})
    c = measure_u_constant(alpha, x)
    if c is None:
        rep.fail({"identity": "H u proportional to v"})
    else:
        rep.details["c_alpha"] = str(c)
        rep.details["c_over_alpha"] = str(c / alpha) if alpha else None
    return rep


def h_blocks(x, alpha_max: int) -> BlockMatrix:
    return BlockMatrix({a: h_first(a, x) for a in range(alpha_max + 1)}, alpha_max)


def check_forms(alpha_max: int, xs) -> Report:
    """Entrywise agreement of all four forms for alpha <= alpha_max at each x."""
    rep = Report("forms", {"alpha_max": alpha_max, "x": [str(as_scalar(x)) for x in xs]})
    families = [h_residue(a) for a in range(alpha_max + 1)]
    for x in xs:
        x = as_scalar(x)
        for a in range(alpha_max + 1):
            ref = h_first(a, x)
            for name, other in (
                ("compact", lambda: h_compact(a, x)),
                ("residue", lambda: reconstruct(families[a], x)),
                ("jordan", lambda: reconstruct_jordan(a, x)),
            ):
                diff = ref.first_difference(other())
                if diff is not None:
                    rep.fail({"form": name, "alpha": a, "x": str(x), "entry": [diff[0], diff[1]]})
                    return rep
    return rep


def check_nilpotent(alpha_max: int, xs=()) -> Report:
    """Residue algebra X^p X^m = 0 (p >= m) and (H^(alpha))^(alpha+1) = 0."""
    rep = Report("nilpotent", {"alpha_max": alpha_max, "x": [str(as_scalar(x)) for x in xs]})
    for a in range(alpha_max + 1):
        fam = h_residue(a)
        for p in range(a + 1):
            for m in range(p + 1):
                if not (fam.tensors[p] @ fam.tensors[m]).is_zero():
                    return rep.fail({"alpha": a, "p": p, "m": m})
        for x in xs:
            if not (h_first(a, x) ** (a + 1)).is_zero():
                return rep.fail({"alpha": a, "x": str(as_scalar(x)), "identity": "H^(alpha+1)=0"})
    return rep


def check_parity(alpha_max: int, x) -> Report:
    rep = Report("parity", {"alpha_max": alpha_max, "x": str(as_scalar(x))})
    for a in range(alpha_max + 1):
        P = swap_matrix(a)
        h = h_first(a, x)
        if P @ h @ P != -h:
            return rep.fail({"alpha": a})
    return rep


def check_residue_vectors(alpha_max: int) -> Report:
    """Y^p v = -v, (P Y^p P) v = -v, and the u identities for p = 0 and p >= 1."""
    rep = Report("residue_vectors", {"alpha_max": alpha_max})
    for a in range(alpha_max + 1):
        fam = h_residue(a)
        P = swap_matrix(a)
        pair = null_pair(a)
        neg_v = [-c for c in pair.v]
        neg_u = [-c for c in pair.u]
        for p, y in enumerate(fam.raw_Y):
            pyp = P @ y @ P
            if y.apply(pair.v) != neg_v or pyp.apply(pair.v) != neg_v:
                return rep.fail({"alpha": a, "p": p, "identity": "Y v = -v"})
            if p >= 1:
                if y.apply(pair.u) != neg_u or pyp.apply(pair.u) != neg_u:
                    return rep.fail({"alpha": a, "p": p, "identity": "Y u = -u"})
            else:
                if any(not c.is_zero() for c in y.apply(pair.u)):
                    return rep.fail({"alpha": a, "p": 0, "identity": "Y^0 u = 0"})
                if pyp.apply(pair.u) != [c * (-a) for c in pair.v]:
                    return rep.fail({"alpha": a, "p": 0, "identity": "P Y^0 P u = -alpha v"})
    return rep
