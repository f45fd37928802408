
import pytest
from hypothesis import given

from conftest import real
from exint.charges import TransferPoly, build_w, charge, charges, check_charge_identities, log_series, poly_mul
from exint.scalar import I
from exint.spin import SIGMA_MINUS, SIGMA_PLUS, SpinMatrix, local_operator

E12 = local_operator(2, {0: SIGMA_PLUS, 1: SIGMA_MINUS})


def test_two_site_w_frozen():
    # lam^-2 S(lam) = 1 - (2/lam) E12 and 2/lam = -i eps
    w = build_w(2)
    assert w.degree == 1
    assert w.coeffs[0] == SpinMatrix.identity(2)
    assert w.coeffs[1] == E12.scale(I)


def test_two_site_charge():
    assert charge(2, 1) == E12.scale(I)
    assert charge(2, 2).is_zero()


@pytest.mark.parametrize("n", range(1, 7))
def test_degree_is_n_minus_one(n):
    assert build_w(n).degree == n - 1


@given(real)
def test_inverse_identity(eps):
    w = build_w(3)
    assert w(eps) @ w(-eps) == SpinMatrix.identity(3)


def test_log_of_exact_exponential():
    # W = 1 + eps N with N^2 = 0 has log W = eps N
    w = TransferPoly(2, [SpinMatrix.identity(2), E12])
    logs = log_series(w, 4)
    assert logs[1] == E12 and all(l.is_zero() for l in logs[2:])


def test_poly_mul_truncates():
    one = [SpinMatrix.identity(1)]
    x = [SpinMatrix.zero(1), SpinMatrix.identity(1)]
    assert len(poly_mul(x, x, 1, 1)) == 2 and poly_mul(x, x, 1, 1)[1].is_zero()
    assert poly_mul(one, x, 1, 3)[1] == SpinMatrix.identity(1)


@pytest.mark.parametrize("n", range(2, 7))
def test_identities(n):
    rep = check_charge_identities(n, 3)
    assert rep.passed, rep.witness
    assert rep.details["w_degree"] == n - 1


def test_charges_vanish_beyond_degree():
    zs, _ = charges(5, 4)
    for k, z in zs.items():
        assert z.is_zero() == (2 * k - 1 >= 5)


def test_charges_conserve_magnetization():
    from exint.spin import magnetization
    zs, _ = charges(4, 2)
    for z in zs.values():
        assert z.commutator(magnetization(4)).is_zero()
