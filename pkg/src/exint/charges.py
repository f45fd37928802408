"""Conserved charges from the dissipation expansion of the transfer matrix.

``W(eps) = lam^-n S(lam)`` at ``lam = 2i/eps`` is a matrix polynomial in
eps with ``W(0) = 1``.  The charges are the odd Taylor coefficients of
``log W``, scaled by factorials:
``Z_k = (2k-1)! [eps^(2k-1)] log W(eps)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .mpa import transfer, transfer_polynomial_points
from .report import Report
from .scalar import Scalar, as_scalar, interpolate
from .spin import SpinMatrix


@dataclass
class TransferPoly:
    """Matrix polynomial; ``coeffs[d]`` multiplies eps^d."""

    n: int
    coeffs: list

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, eps) -> SpinMatrix:
        eps = as_scalar(eps)
        acc = SpinMatrix.zero(self.n)
        for c in reversed(self.coeffs):
            acc = acc.scale(eps) + c
        return acc

    def reflect(self) -> "TransferPoly":
        """W(-eps)."""
        return TransferPoly(self.n, [c if d % 2 == 0 else -c for d, c in enumerate(self.coeffs)])

    def to_json(self) -> dict:
        return {"n": self.n, "coefficients": [c.to_json() for c in self.coeffs]}


def poly_mul(a, b, n: int, max_deg: int):
    """Product of matrix polynomials (coefficient lists) truncated at max_deg."""
    out = [SpinMatrix.zero(n) for _ in range(max_deg + 1)]
    for i, x in enumerate(a):
        if i > max_deg or x.is_zero():
            continue
        for j, y in enumerate(b):
            if i + j > max_deg:
                break
            if not y.is_zero():
                out[i + j] = out[i + j] + x @ y
    return out


def build_w(n: int, eps_points=None) -> TransferPoly:
    """Interpolate W through n+1 rational samples (degree is at most n)."""
    if n < 1:
        raise ValueError("need n >= 1")
    eps_points = eps_points or [Scalar(j) for j in range(1, n + 2)]
    pts = transfer_polynomial_points(n, eps_points)
    coeffs = interpolate(pts, zero=SpinMatrix.zero(n))
    return TransferPoly(n, coeffs)


def log_series(w: TransferPoly, max_deg: int):
    """Coefficients of log W up to eps^max_deg (N = W - 1 has no constant term)."""
    n = w.n
    nil = [SpinMatrix.zero(n)] + list(w.coeffs[1:max_deg + 1])
    nil += [SpinMatrix.zero(n)] * (max_deg + 1 - len(nil))
    out = [SpinMatrix.zero(n) for _ in range(max_deg + 1)]
    power = nil
    for m in range(1, max_deg + 1):
        c = Fraction((-1) ** (m + 1), m)
        out = [o + p.scale(c) for o, p in zip(out, power)]
        power = poly_mul(power, nil, n, max_deg)
    return out


def charges(n: int, k_max: int, w: TransferPoly | None = None):
    """``{k: Z_k}`` for k = 1..k_max, plus the raw log coefficients."""
    w = w or build_w(n)
    top = 2 * k_max
    logs = log_series(w, top)
    zs = {k: logs[2 * k - 1].scale(factorial(2 * k - 1)) for k in range(1, k_max + 1)}
    return zs, logs


def charge(n: int, k: int) -> SpinMatrix:
    return charges(n, k)[0][k]


def check_charge_identities(n: int, k_max: int, eps_samples=None, lam_samples=None) -> Report:
    """Inverse identity, even coefficients, and mutual/transfer commutation of the charges."""
    eps_samples = eps_samples or [Fraction(j, 3) for j in range(1, n + 3)]
    lam_samples = lam_samples or [Fraction(3, 7), Scalar(Fraction(1, 5), Fraction(-2, 3))]
    rep = Report("charges", {"n": n, "kmax": k_max, "eps": [str(as_scalar(e)) for e in eps_samples]})
    w = build_w(n)
    ident = SpinMatrix.identity(n)
    if w.coeffs[0] != ident:
        rep.fail({"identity": "W(0) = 1"})
    extra = as_scalar(n + 2)
    direct = transfer(n, Scalar(0, 2) / extra).scale((Scalar(0, 2) / extra) ** (-n))
    if w(extra) != direct:
        rep.fail({"identity": "degree bound", "eps": str(extra)})
    for e in eps_samples:
        if w(e) @ w(-as_scalar(e)) != ident:
            rep.fail({"identity": "W(eps) W(-eps) = 1", "eps": str(as_scalar(e))})
    prod = poly_mul(w.coeffs, w.reflect().coeffs, n, 2 * w.degree)
    if prod[0] != ident or any(not c.is_zero() for c in prod[1:]):
        rep.fail({"identity": "W(eps) W(-eps) = 1 as polynomials"})
    zs, logs = charges(n, k_max, w)
    even_ok = all(logs[d].is_zero() for d in range(2, len(logs), 2))
    if not even_ok:
        rep.fail({"identity": "even log coefficients"})
    for j in zs:
        for k in zs:
            if j < k and not zs[j].commutator(zs[k]).is_zero():
                rep.fail({"identity": "[Z_j, Z_k] = 0", "j": j, "k": k})
    for lam in lam_samples:
        S = transfer(n, lam)
        for k, z in zs.items():
            if not z.commutator(S).is_zero():
                rep.fail({"identity": "[Z_k, S] = 0", "k": k, "lambda": str(as_scalar(lam))})
    rep.details["w_degree"] = w.degree
    rep.details["charge_nnz"] = {str(k): len(z.entries) for k, z in zs.items()}
    rep.details["nonzero_beyond_degree"] = [k for k, z in zs.items() if 2 * k - 1 > n and not z.is_zero()]
    return rep


__all__ = ["TransferPoly", "build_w", "charge", "charges", "check_charge_identities", "log_series", "poly_mul"]
