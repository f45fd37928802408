"""Single quasi-particle spectrum of the NESS density operator.

The exact part is the three-term identity for ``rho~ T^0_1(mu) |Omega_0>``
and the dispersion relation.  Root finding for the rapidity equation and
the eigenvector residuals are floating point.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (DegenerateLeadingCoefficient, DegeneratePair, KernelEmpty, SingularCoefficient,
                     SingularDispersion)
from .linalg import row_reduce
from .mpa import monodromy_element, transfer, vacuum_index
from .report import Report
from .scalar import ZERO, Scalar, as_scalar
from .spin import sector_indices

UWT_ORDERS = ("lambda,mu", "mu,lambda")


def dispersion(mu, lam):
    """``((lam+mu)(lam+mu-1)) / ((lam-mu)(lam-mu+1))``; exact for Scalars, float for complex."""
    exact = not isinstance(mu, complex) and not isinstance(lam, complex)
    if exact:
        mu, lam = as_scalar(mu), as_scalar(lam)
    den = (lam - mu) * (lam - mu + 1)
    if den == 0:
        raise SingularDispersion(f"lambda - mu in {{0, -1}} (lambda={lam}, mu={mu})")
    return (lam + mu) * (lam + mu - 1) / den


def _t(lam, n):
    return lam ** n


def uwt_coefficients(n: int, lam, mu, order: str = "mu,lambda", unwanted_scale: int = 2):
    """The three coefficients of the identity.

    ``order`` picks the argument order of the dispersion in the wanted
    term.  ``unwanted_scale`` multiplies the two unwanted-term coefficients;
    the identity holds with ``order="mu,lambda"`` and ``unwanted_scale=2``,
    while ``unwanted_scale=1`` drops the factor 2 on the unwanted terms.
    """
    lam_is_float = isinstance(lam, complex) or isinstance(mu, complex)
    if not lam_is_float:
        lam, mu = as_scalar(lam), as_scalar(mu)
    d1 = (mu - lam) * (lam - mu + 1)
    d2 = (lam + 1) * (lam - mu + 1)
    if d1 == 0 or d2 == 0:
        raise SingularCoefficient(f"vanishing denominator at lambda={lam}, mu={mu}")
    disp = dispersion(lam, mu) if order == "lambda,mu" else dispersion(mu, lam)
    t = lambda x: _t(x, n)  # noqa: E731
    c1 = t(lam) ** 2 * disp
    c2 = mu * ((lam + mu - 1) * t(lam) * t(mu) - 2 * lam * (mu - lam) * t(lam + 1) * t(mu - 1)) / d1
    c3 = 2 * mu * lam * (lam + 0.5 if lam_is_float else lam + Scalar(1, 0) / 2) * t(lam) * t(mu - 1) / d2
    return c1, c2 * unwanted_scale, c3 * unwanted_scale


def rho_tilde(n: int, lam):
    """``S(lam) S^T(-lam)``, exact or complex-float depending on lam."""
    return transfer(n, lam) @ transfer(n, -lam).transpose()


def one_particle_vector(n: int, mu):
    return monodromy_element(n, 0, 1, mu).apply({vacuum_index(n): Scalar(1) if not isinstance(mu, complex) else 1 + 0j})


def _vec_add(*terms):
    out = {}
    for c, v in terms:
        for k, x in v.items():
            out[k] = out.get(k, 0) + c * x
    return {k: x for k, x in out.items() if x != 0}


def check_uwt(n: int, lam, mu) -> Report:
    """Exact three-term identity; records which argument order of the dispersion holds."""
    lam, mu = as_scalar(lam), as_scalar(mu)
    rep = Report("uwt", {"n": n, "lambda": str(lam), "mu": str(mu)})
    rho = rho_tilde(n, lam)
    v_mu = one_particle_vector(n, mu)
    v_lam = one_particle_vector(n, lam)
    v_lam1 = one_particle_vector(n, lam + 1)
    lhs = {k: x * (-1) ** n for k, x in rho.apply(v_mu).items()}
    holds = []
    for order in UWT_ORDERS:
        for scale in (1, 2):
            c1, c2, c3 = uwt_coefficients(n, lam, mu, order, scale)
            rhs = _vec_add((c1, v_mu), (c2, v_lam), (c3, v_lam1))
            if lhs == rhs:
                holds.append({"order": order, "unwanted_scale": scale})
    rep.details["forms_holding"] = holds
    rep.details["default_form_holds"] = {"order": "mu,lambda", "unwanted_scale": 2} in holds
    keys = sorted(set(v_mu) | set(v_lam) | set(v_lam1))
    cols = [[as_scalar(v.get(k, ZERO)) for k in keys] for v in (v_mu, v_lam, v_lam1)]
    rank, _ = row_reduce(cols)
    rep.details["rhs_rank"] = rank
    if not rep.details["default_form_holds"]:
        rep.fail({"identity": "UWT", "forms_holding": holds})
    return rep


# --- rapidity equation ------------------------------------------------------------

def _rapidity_parameter(lam, literal: bool):
    """Parameter entering the rapidity formulas: 2*lam, or lam in the literal variant."""
    return lam if literal else 2 * lam


def bethe_polynomial(n: int, lam, literal: bool = False) -> np.ndarray:
    """Cleared rapidity equation, coefficients lowest degree first (degree <= 2n+2).

    The equation is written in ``L = 2 lam``; ``literal=True`` substitutes
    ``L = lam`` instead, which does not pair equal dispersions.
    """
    L = _rapidity_parameter(complex(lam), literal)
    a = P.polypow([1, -(L + 1)], n)            # (1 - (L+1) xi)^n
    b = P.polypow([L - 1, 1], n)               # (xi + L - 1)^n
    c = P.polypow([1, L + 1], n)               # (1 + (L+1) xi)^n
    d = P.polypow([1 - L, 1], n)               # (xi - L + 1)^n
    left = P.polymul(P.polymul(a, b), P.polymul([1, 1], [1 - L, L + 1]))
    right = P.polymul(P.polymul(c, d), P.polymul([1, -1], [L - 1, L + 1]))
    size = max(len(left), len(right))
    coeffs = np.zeros(size, dtype=complex)
    coeffs[:len(left)] += left
    coeffs[:len(right)] -= right
    return coeffs


def _denominators(L, xi):
    return (1 + (L + 1) * xi, xi - L + 1, 1 + xi, (L + 1) * xi - L + 1, xi)


def bethe_residual(n: int, lam, xi, literal: bool = False) -> float:
    """|LHS - RHS| of the uncleared equation."""
    L = _rapidity_parameter(complex(lam), literal)
    lhs = ((1 - (L + 1) * xi) / (1 + (L + 1) * xi)) ** n * ((xi + L - 1) / (xi - L + 1)) ** n
    rhs = (1 - xi) / (1 + xi) * ((L + 1) * xi + L - 1) / ((L + 1) * xi - L + 1)
    return float(abs(lhs - rhs))


def solve_bethe(n: int, lam, tol: float = 1e-8, literal: bool = False):
    """Roots of the cleared polynomial minus the spurious ones; [(xi, residual)]."""
    lam = complex(lam)
    L = _rapidity_parameter(lam, literal)
    coeffs = bethe_polynomial(n, lam, literal)
    scale = np.max(np.abs(coeffs))
    while len(coeffs) > 1 and abs(coeffs[-1]) <= 1e-13 * scale:
        coeffs = coeffs[:-1]
    if len(coeffs) < 2:
        raise DegenerateLeadingCoefficient(f"polynomial collapses at lambda={lam}")
    roots = P.polyroots(coeffs)
    out = []
    for xi in roots:
        if any(abs(d) < tol for d in _denominators(L, xi)):
            continue
        out.append((complex(xi), bethe_residual(n, lam, xi, literal)))
    return out


def rapidity_pair(lam, xi, literal: bool = False):
    """``mu_1 = (1 + (L+1) xi)/2`` and ``mu_2 = (1 + (L-1)/xi)/2`` with ``L = 2 lam``.

    Works for Scalars (exact) and complex floats.
    """
    L = _rapidity_parameter(lam, literal)
    return (1 + (L + 1) * xi) / 2, (1 + (L - 1) / xi) / 2


def swap_rapidity(lam, xi, literal: bool = False):
    """The rapidity exchanging the roles of mu_1 and mu_2."""
    L = _rapidity_parameter(lam, literal)
    return (L - 1) / ((L + 1) * xi)


def check_dispersion_pairing(lam, xi, literal: bool = False) -> bool:
    """Exact test of Lambda(mu_1, lam) = Lambda(mu_2, lam) at rational xi."""
    lam, xi = as_scalar(lam), as_scalar(xi)
    mu1, mu2 = rapidity_pair(lam, xi, literal)
    return dispersion(mu1, lam) == dispersion(mu2, lam)


@dataclass
class OneParticle:
    c1: complex
    c2: complex
    state: np.ndarray
    eigenvalue: complex
    residual: float


def _dense_vector(vec: dict, dim: int) -> np.ndarray:
    out = np.zeros(dim, dtype=complex)
    for k, v in vec.items():
        out[k] = complex(v)
    return out


def build_one_particle(n: int, lam, xi, order: str = "mu,lambda", kernel_tol: float = 1e-8) -> OneParticle:
    lam, xi = complex(lam), complex(xi)
    mu1, mu2 = rapidity_pair(lam, xi)
    if abs(mu1 - mu2) < 1e-12:
        raise DegeneratePair(f"mu_1 = mu_2 = {mu1}")
    _, a2, a3 = uwt_coefficients(n, lam, mu1, order)
    _, b2, b3 = uwt_coefficients(n, lam, mu2, order)
    system = np.array([[a2, b2], [a3, b3]], dtype=complex)
    _, svals, vh = np.linalg.svd(system)
    if svals[-1] > kernel_tol * max(svals[0], 1.0):
        raise KernelEmpty(f"smallest singular value {svals[-1]:.3e} at xi={xi}")
    c1, c2 = vh[-1].conj()
    dim = 1 << n
    psi = (c1 * _dense_vector(one_particle_vector(n, mu1), dim)
           + c2 * _dense_vector(one_particle_vector(n, mu2), dim))
    eig = (-1) ** n * lam ** (2 * n) * (dispersion(lam, mu1) if order == "lambda,mu" else dispersion(mu1, lam))
    rho = rho_tilde(n, lam).to_dense()
    res = float(np.linalg.norm(rho @ psi - eig * psi) / np.linalg.norm(psi))
    return OneParticle(complex(c1), complex(c2), psi, complex(eig), res)


def brute_force_sector_spectrum(n: int, lam) -> np.ndarray:
    """Eigenvalues of rho~ on the one-up-spin sector."""
    if n > 6:
        raise ValueError("dense sector spectrum limited to n <= 6")
    rho = rho_tilde(n, complex(lam)).to_dense()
    idx = sector_indices(n, 1)
    return np.linalg.eigvals(rho[np.ix_(idx, idx)])


def check_bethe(n: int, lam, order: str = "mu,lambda", root_tol: float = 1e-10, eig_tol: float = 1e-8) -> Report:
    """Roots, one-particle eigenvectors and their match against the sector spectrum."""
    lam = complex(lam)
    rep = Report("bethe", {"n": n, "lambda": repr(lam), "order": order})
    roots = solve_bethe(n, lam)
    spectrum = brute_force_sector_spectrum(n, lam)
    scale = max(1.0, float(np.max(np.abs(spectrum))))
    rows = []
    matched = set()
    for xi, resid in roots:
        row = {"xi": [xi.real, xi.imag], "residual": resid}
        if resid > root_tol:
            rep.fail({"root": row["xi"], "residual": resid})
        try:
            part = build_one_particle(n, lam, xi, order)
        except (KernelEmpty, DegeneratePair, SingularCoefficient) as exc:
            row["skipped"] = type(exc).__name__
            rows.append(row)
            continue
        dist = np.abs(spectrum - part.eigenvalue) / scale
        j = int(np.argmin(dist))
        row.update({"eigenvalue": [part.eigenvalue.real, part.eigenvalue.imag],
                    "eigen_residual": part.residual, "spectrum_distance": float(dist[j])})
        if part.residual > eig_tol:
            rep.fail({"root": row["xi"], "eigen_residual": part.residual})
        if dist[j] > eig_tol:
            rep.fail({"root": row["xi"], "spectrum_distance": float(dist[j])})
        else:
            matched.add(j)
        rows.append(row)
    rep.details["roots"] = rows
    rep.details["sector_eigenvalues"] = [[z.real, z.imag] for z in spectrum]
    rep.details["sector_eigenvalues_reached"] = sorted(matched)
    return rep


__all__ = [
    "OneParticle", "bethe_polynomial", "bethe_residual", "brute_force_sector_spectrum", "build_one_particle",
    "check_bethe", "check_uwt", "dispersion", "one_particle_vector", "rapidity_pair", "rho_tilde",
    "check_dispersion_pairing", "solve_bethe", "swap_rapidity", "uwt_coefficients",
]
