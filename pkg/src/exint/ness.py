"""Steady state of the boundary-driven XXX chain in Cholesky form.

``rho~ = S(lam) S^T(-lam)`` with ``lam = 2i/eps``; stationarity is the
exact statement ``i[H, rho] - eps D(rho) = 0`` for jump operators
sigma^+ on the first site and sigma^- on the last.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NullSpaceDimensionError
from .mpa import transfer
from .report import Report
from .scalar import I, Scalar, as_scalar
from .spin import SIGMA_MINUS, SIGMA_PLUS, SpinMatrix, local_operator, xxx_hamiltonian


@dataclass
class LindbladProblem:
    n: int
    epsilon: Scalar
    lam: Scalar = field(init=False)

    def __post_init__(self):
        self.epsilon = as_scalar(self.epsilon)
        if self.epsilon.is_zero():
            raise ValueError("dissipation strength must be nonzero")
        self.lam = Scalar(0, 2) / self.epsilon

    def jump_operators(self):
        return [local_operator(self.n, {0: SIGMA_PLUS}),
                local_operator(self.n, {self.n - 1: SIGMA_MINUS})]


def build_ness(problem: LindbladProblem):
    """Unnormalized ``rho~`` and its trace."""
    n, lam = problem.n, problem.lam
    rho = transfer(n, lam) @ transfer(n, -lam).transpose()
    return rho, rho.trace()


def dissipator(problem: LindbladProblem, rho: SpinMatrix) -> SpinMatrix:
    out = SpinMatrix.zero(problem.n)
    for L in problem.jump_operators():
        Ld = L.dagger()
        LdL = Ld @ L
        out = out + (L @ rho @ Ld).scale(2) - LdL @ rho - rho @ LdL
    return out


def lindblad_residual(problem: LindbladProblem, rho: SpinMatrix) -> SpinMatrix:
    """``i[H, rho] - eps D(rho)``."""
    if rho.n != problem.n:
        raise DimensionMismatch(f"rho has {rho.n} sites, problem has {problem.n}")
    h = xxx_hamiltonian(problem.n)
    return h.commutator(rho).scale(I) - dissipator(problem, rho).scale(problem.epsilon)


def check_ness(n: int, epsilon) -> Report:
    """Exact stationarity, Hermiticity and the conjugation rule S^dagger(lam) = S^T(-lam)."""
    problem = LindbladProblem(n, epsilon)
    rep = Report("ness", {"n": n, "epsilon": str(problem.epsilon)})
    rho, tr = build_ness(problem)
    res = lindblad_residual(problem, rho)
    if not res.is_zero():
        rep.fail({"identity": "stationarity", "entry": list(min(res.entries))})
    if rho.dagger() != rho:
        rep.fail({"identity": "hermiticity"})
    S = transfer(n, problem.lam)
    if problem.epsilon.is_real and S.dagger() != transfer(n, -problem.lam).transpose():
        rep.fail({"identity": "S^dagger = S^T(-lambda)"})
    for i in range(1 << n):
        d = rho[(i, i)]
        if d.im or d.re < 0:
            rep.fail({"identity": "nonnegative diagonal", "index": i})
            break
    rep.details["trace"] = str(tr)
    rep.details["nnz"] = len(rho.entries)
    return rep


def _to_numpy(op: SpinMatrix):
    return op.to_dense()


def liouvillian(problem: LindbladProblem) -> np.ndarray:
    """Dense row-major superoperator of ``rho -> -i[H, rho] + eps D(rho)``."""
    n = problem.n
    dim = 1 << n
    eye = np.eye(dim)
    h = _to_numpy(xxx_hamiltonian(n)) if n > 1 else np.zeros((dim, dim))
    eps = complex(problem.epsilon)
    sup = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for L in problem.jump_operators():
        l = _to_numpy(L)
        ldl = l.conj().T @ l
        sup = sup + eps * (2 * np.kron(l, l.conj()) - np.kron(ldl, eye) - np.kron(eye, ldl.T))
    return sup


def brute_force_ness(problem: LindbladProblem, tol: float = 1e-8) -> np.ndarray:
    """Trace-normalized null vector of the dense Liouvillian."""
    if problem.n > 6:
        raise ValueError("dense Liouvillian limited to n <= 6")
    sup = liouvillian(problem)
    _, svals, vh = np.linalg.svd(sup)
    null_dim = int(np.sum(svals < tol))
    if null_dim != 1:
        raise NullSpaceDimensionError(f"null space dimension {null_dim} at tolerance {tol}")
    dim = 1 << problem.n
    rho = vh[-1].conj().reshape(dim, dim)
    return rho / np.trace(rho)


def normalized_ness(problem: LindbladProblem) -> np.ndarray:
    rho, tr = build_ness(problem)
    return _to_numpy(rho) / complex(tr)


def check_ness_oracle(n: int, epsilon, tol: float = 1e-10) -> Report:
    problem = LindbladProblem(n, epsilon)
    rep = Report("ness_oracle", {"n": n, "epsilon": str(problem.epsilon), "tol": tol})
    exact = normalized_ness(problem)
    approx = brute_force_ness(problem)
    dist = float(np.max(np.abs(exact - approx)))
    rep.details["max_abs_diff"] = dist
    if not dist < tol:
        rep.fail({"max_abs_diff": dist})
    return rep


__all__ = [
    "LindbladProblem", "brute_force_ness", "build_ness", "check_ness", "check_ness_oracle",
    "dissipator", "lindblad_residual", "liouvillian", "normalized_ness",
]
