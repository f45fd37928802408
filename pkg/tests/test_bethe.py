from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given

from conftest import nonzero_real, real
from exint.bethe import (bethe_polynomial, bethe_residual, brute_force_sector_spectrum, build_one_particle,
                         check_bethe, check_dispersion_pairing, check_uwt, dispersion, rapidity_pair, rho_tilde,
                         solve_bethe, swap_rapidity, uwt_coefficients)
from exint.errors import SingularCoefficient, SingularDispersion
from exint.scalar import Scalar, parse_scalar

LAM, MU = parse_scalar("3/7"), parse_scalar("-2/9")


def test_dispersion_value():
    assert dispersion(1, 3) == 2
    with pytest.raises(SingularDispersion):
        dispersion(3, 3)


def test_uwt_singular():
    with pytest.raises(SingularCoefficient):
        uwt_coefficients(2, LAM, LAM)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_uwt_exact(n):
    rep = check_uwt(n, LAM, MU)
    assert rep.passed
    assert {"order": "mu,lambda", "unwanted_scale": 2} in rep.details["forms_holding"]
    assert {"order": "mu,lambda", "unwanted_scale": 1} not in rep.details["forms_holding"] or n == 1


@given(real, real)
def test_uwt_property(lam, mu):
    try:
        rep = check_uwt(3, lam, mu)
    except (SingularCoefficient, SingularDispersion):
        return
    assert rep.passed


@given(nonzero_real, nonzero_real)
def test_rapidity_pair_shares_dispersion(lam, xi):
    L = 2 * lam
    assume(not (L + 1).is_zero() and not (L - 1).is_zero())
    mu1, mu2 = rapidity_pair(lam, xi)
    try:
        assert check_dispersion_pairing(lam, xi)
    except SingularDispersion:
        return
    # swapping the rapidity exchanges the pair
    assert rapidity_pair(lam, swap_rapidity(lam, xi)) == (mu2, mu1)


def test_literal_parametrization_does_not_pair():
    assert not check_dispersion_pairing(Scalar(0, 2), Fraction(1, 3), literal=True)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_roots_solve_equation(n):
    for xi, res in solve_bethe(n, 2j):
        assert res < 1e-10
        assert abs(bethe_residual(n, 2j, xi) - res) < 1e-12


def test_polynomial_degree():
    assert len(bethe_polynomial(3, 2j)) <= 2 * 3 + 3


@pytest.mark.parametrize("lam", [2j, 0.7j, 3.1j])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_one_particle_states(n, lam):
    rep = check_bethe(n, lam)
    assert rep.passed, rep.witness
    built = [r for r in rep.details["roots"] if "eigenvalue" in r]
    if n == 1:
        # both roots are fixed points of the rapidity swap, so mu_1 = mu_2
        assert all(r["skipped"] == "DegeneratePair" for r in rep.details["roots"])
    else:
        assert built


def test_eigenvector_is_eigenvector():
    n, lam = 3, 2j
    xi = next(x for x, _ in solve_bethe(n, lam) if _builds(n, lam, x))
    part = build_one_particle(n, lam, xi)
    rho = rho_tilde(n, lam).to_dense()
    assert np.linalg.norm(rho @ part.state - part.eigenvalue * part.state) < 1e-8 * np.linalg.norm(part.state)
    assert np.min(np.abs(brute_force_sector_spectrum(n, lam) - part.eigenvalue)) < 1e-8


def _builds(n, lam, xi):
    try:
        build_one_particle(n, lam, xi)
        return True
    except Exception:
        return False
