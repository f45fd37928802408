import pytest
from hypothesis import assume, given

from conftest import non_pole, real
from exint.cli import _r_pair_ok
from exint.errors import NotInvertible, PoleError
from exint.linalg import Matrix
from exint.rmat import (RMatrix, build_r, center_of_mass, check_exp_termination, check_lemma1, check_lemma2,
                        check_r_properties, check_rll, check_rtt, check_ybe, r_block)
from exint.scalar import is_half_integer_pole, parse_scalar

LAM, MU = parse_scalar("3/7"), parse_scalar("1/5")


def _u_ok(v):
    return not (v.re >= 0 and (2 * v.re).denominator == 1)


def test_alpha_one_block_frozen():
    # x = 11/35, y = 8/35 and H1 = (1/2x) [[-1,-1],[1,1]], so R = 1 + y H1
    assert r_block(1, LAM, MU).to_strings() == [["7/11", "-4/11"], ["4/11", "15/11"]]


def test_alpha_two_block_frozen():
    assert r_block(2, LAM, MU).to_strings() == [
        ["147/143", "112/143", "108/143"], ["84/143", "207/143", "-20/143"], ["-172/143", "-240/143", "75/143"]]


def test_center_of_mass_pole():
    with pytest.raises(PoleError):
        center_of_mass(1, 2)
    assert center_of_mass(LAM, MU) == parse_scalar("11/35")


def test_json_round_trip():
    r = build_r(LAM, MU, 4)
    back = RMatrix.from_json(r.to_json())
    assert back.lam == LAM and back.mu == MU
    assert all(back[a] == r[a] for a in range(5))


@given(real, real)
def test_regularity_and_unitarity(lam, mu):
    assume(_r_pair_ok(lam, mu))
    r, rr = build_r(lam, mu, 5), build_r(mu, lam, 5)
    for a in range(6):
        assert r[a] @ rr[a] == Matrix.identity(a + 1)
    if not is_half_integer_pole(lam):
        assert all(build_r(lam, lam, 5)[a] == Matrix.identity(a + 1) for a in range(6))


@given(real, real)
def test_rll_property(lam, mu):
    assume(_r_pair_ok(lam, mu))
    assert check_rll(lam, mu, 4).passed


@given(real, real)
def test_properties_property(lam, mu):
    assume(_r_pair_ok(lam, mu) and _u_ok(lam) and _u_ok(mu))
    rep = check_r_properties(lam, mu, 5)
    assert rep.passed, rep.witness
    assert rep.details["transposal_alternate_order_holds"] is False or rep.details["transposal"]


def test_properties_singular_u():
    # 2*mu = -1 is fine, 2*lam = 1 makes binom(2 lam, 2) vanish
    with pytest.raises(NotInvertible):
        check_r_properties(parse_scalar("1/2"), parse_scalar("-3/7"), 3)


def test_rtt_small():
    assert check_rtt(2, LAM, MU, 3).passed


def test_ybe_labeled_empirical():
    rep = check_ybe(LAM, MU, parse_scalar("-2/9"), 4)
    assert rep.passed and rep.label == "EMPIRICAL"


@given(non_pole)
def test_lemmas_property(x):
    assert check_lemma1(x, 5).passed
    assert check_lemma2(x, 5).passed


def test_exp_series_terminates():
    assert check_exp_termination(LAM, MU, 8).passed
