from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import gaussian, real
from exint.errors import DenominatorZero
from exint.mpa import (brute_force_element, check_bandedness, check_commute, check_engine_oracle,
                       check_magnetization, check_shift_relations, check_tilde_commute, check_transfer_structure,
                       check_transpose_relations, check_vacuum_shift, discover_dependencies,
                       measure_magnetization_factor, monodromy_element, selection_rule_holds, shift_coefficients,
                       tilde_transfer, transfer, vacuum_index)
from exint.scalar import Scalar, parse_scalar
from exint.spin import SIGMA_MINUS, SIGMA_PLUS, SpinMatrix, local_operator

LAM = parse_scalar("3/7")


def test_single_site_elements():
    # <0|A0|0> = lam, <0|A+|1> = -2 lam, <1|A-|0> = 1
    lam = Scalar(5)
    assert monodromy_element(1, 0, 0, lam) == SpinMatrix.identity(1).scale(5)
    assert monodromy_element(1, 0, 1, lam).entries == {(0, 1): Scalar(-10)}
    assert monodromy_element(1, 1, 0, lam).entries == {(1, 0): Scalar(1)}
    assert monodromy_element(1, 0, 2, lam).is_zero()


@given(gaussian)
def test_two_site_transfer_closed_form(lam):
    expected = SpinMatrix.identity(2).scale(lam * lam) - local_operator(2, {0: SIGMA_PLUS, 1: SIGMA_MINUS},
                                                                         coeff=2 * lam)
    assert transfer(2, lam) == expected


@given(gaussian, st.integers(1, 3), st.integers(0, 3), st.integers(0, 3))
def test_engine_matches_brute_force(lam, n, a, b):
    assert monodromy_element(n, a, b, lam) == brute_force_element(n, a, b, lam)


def test_float_engine_matches_exact():
    lam = parse_scalar("1/3+2/5*i")
    exact = monodromy_element(4, 1, 2, lam).to_dense()
    approx = monodromy_element(4, 1, 2, complex(lam)).to_dense()
    assert np.allclose(exact, approx, atol=1e-12)


def test_oracle_report():
    assert check_engine_oracle(3, LAM).passed


@given(gaussian, st.integers(1, 4), st.integers(0, 4), st.integers(0, 4))
def test_selection_rule_and_magnetization(lam, n, a, b):
    op = monodromy_element(n, a, b, lam)
    assert selection_rule_holds(op, a, b)
    factor = measure_magnetization_factor(op)
    assert factor is not None
    if not op.is_zero():
        assert factor == 2 * (b - a)


def test_magnetization_report_records_both_factors():
    rep = check_magnetization(4, 0, 1, LAM)
    assert rep.passed
    assert rep.details["measured_factor"] == "2/1" and rep.details["alternate_factor"] == -2


def test_vacuum_is_all_down():
    assert vacuum_index(3) == 7
    # T^0_1 acts nontrivially on the all-down state
    assert monodromy_element(3, 0, 1, LAM).apply({7: Scalar(1)})


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_structure(n):
    assert check_transfer_structure(n, LAM).passed
    assert check_bandedness(n, LAM).passed


@given(real, real)
def test_transfer_commutes(lam, mu):
    assert check_commute(3, lam, mu).passed


def test_transfer_commutes_complex():
    assert check_commute(5, parse_scalar("1/2+1/3*i"), parse_scalar("-2/7+i")).passed


@given(real, real)
def test_tilde_commutes(lam, mu):
    try:
        rep = check_tilde_commute(3, lam, mu)
    except DenominatorZero:
        return
    assert rep.passed and rep.label == "EMPIRICAL"


def test_tilde_denominator():
    with pytest.raises(DenominatorZero):
        tilde_transfer(3, Fraction(1, 2))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_transpose_relations(n):
    rep = check_transpose_relations(n, LAM)
    assert rep.passed
    assert rep.details["compact_form_without_aux_transpose_holds"] is False


@pytest.mark.parametrize("q,l", [(0, 0), (1, 0), (1, 1), (2, 1), (1, 2)])
def test_vacuum_shift_is_lambda_minus_l(q, l):
    held = check_vacuum_shift(4, q, l, LAM)
    assert "l" in held["up"] and "l" in held["down"]


def test_one_particle_shifts_are_size_independent():
    rep = check_shift_relations(4, 1, 1, 2, LAM)
    assert rep.passed, rep.witness
    assert rep.label == "EMPIRICAL"
    assert rep.details["s-alt_solvable"] is False


def test_shift_solution_shared_across_sizes():
    _, joint = shift_coefficients([3, 4, 5], 1, 1, 1, LAM, "r")
    assert joint is not None


def test_dependencies_rank():
    lams = [parse_scalar(t) for t in ("3/7", "-2/9", "5/11")]
    n, q = 3, 1
    res = discover_dependencies(n, q, lams)
    assert res["rank"] == {"+": [3, 3, 3], "-": [3, 3, 3]}
    # T^l_{l+q} beyond the basis is the stated combination of T^k_{k+q}, k <= n-q
    for j, lam in enumerate(lams):
        coeffs = res["+"][4][j]
        combo = SpinMatrix.zero(n)
        for k, c in enumerate(coeffs):
            combo = combo + monodromy_element(n, k, k + q, lam).scale(c)
        assert combo == monodromy_element(n, 4, 4 + q, lam)
