from fractions import Fraction

import pytest
from hypothesis import given

from conftest import non_pole, real
from exint.auxops import (BlockMatrix, build_B, build_lambda_components, build_lax, build_mpa_tensor, build_U,
                          check_AT_symmetry, check_sl2, swap_matrix)
from exint.errors import NotInvertible, SingularW, TruncationTooSmall
from exint.hgen import (check_forms, check_nilpotent, check_null, check_parity, check_residue_vectors, h_compact,
                        h_first, h_residue, jordan_delta, jordan_W, measure_u_constant, null_pair, reconstruct,
                        reconstruct_jordan)
from exint.linalg import Matrix
from exint.scalar import Scalar, parse_scalar

X = parse_scalar("3/7")


# --- auxiliary-space operators ---------------------------------------------

def test_mpa_tensors_small():
    lam = Scalar(5)
    assert build_mpa_tensor("0", lam, 3) == Matrix.diag([Scalar(5), Scalar(4), Scalar(3)])
    ap = build_mpa_tensor("+", lam, 3)
    assert ap[0, 1] == -10 and ap[1, 2] == -9
    am = build_mpa_tensor("-", lam, 3)
    assert am[1, 0] == 1 and am[2, 1] == 2


@given(real)
def test_sl2_relations(lam):
    assert check_sl2(lam, 6).passed


def test_sl2_needs_room():
    with pytest.raises(TruncationTooSmall):
        check_sl2(1, 2)


@given(real)
def test_lax_is_linear_in_lambda(lam):
    L, L0, Lp = build_lax(lam, 5)
    for key in L.blocks:
        assert L[key] == L0[key] + Lp[key].scale(lam)
    assert Lp[(0, 1)] == -build_B(5)


@given(real)
def test_transpose_symmetry_of_tensors(lam):
    # binom(2 lam, k) vanishes only for 2 lam in {0, ..., k-1}
    if lam.re >= 0 and (2 * lam.re).denominator == 1 and 2 * lam.re < 5:
        with pytest.raises(NotInvertible):
            build_U(lam, 6)
        return
    assert check_AT_symmetry(lam, 6).passed


def test_block_matrix_shape_validation():
    with pytest.raises(ValueError):
        BlockMatrix({0: Matrix.identity(2)}, 0)
    bm = BlockMatrix({0: Matrix.identity(1), 1: Matrix.identity(2)})
    assert BlockMatrix.from_json(bm.to_json()) .blocks == bm.blocks


def test_lambda_components_match_closed_form():
    # raises MismatchError internally on any disagreement
    comps = build_lambda_components(X, 6)
    assert (0, (0, 0)) in comps and (2, "0") in comps


# --- the generator H -------------------------------------------------------

def test_h_small_blocks_frozen():
    # values cross-checked by the compact, residue and Jordan forms
    assert h_first(0, X).to_strings() == [["0/1"]]
    assert h_first(1, X).to_strings() == [["-7/6", "-7/6"], ["7/6", "7/6"]]
    assert h_first(2, X).to_strings() == [["35/6", "14/1", "49/6"], ["7/6", "0/1", "-7/6"],
                                          ["-49/6", "-14/1", "-35/6"]]


@given(non_pole)
def test_four_forms_agree(x):
    for a in range(5):
        ref = h_first(a, x)
        assert h_compact(a, x) == ref
        assert reconstruct(h_residue(a), x) == ref
        try:
            assert reconstruct_jordan(a, x) == ref
        except SingularW:
            pass


def test_printed_jordan_normalization_gives_twice_h():
    for a in range(1, 7):
        w = jordan_W(a, X)
        assert w @ jordan_delta(a, scale=1) @ w.inverse() == h_first(a, X).scale(2)


def test_forms_check_report():
    rep = check_forms(6, [X, Fraction(-2, 5)])
    assert rep.passed and rep.label == "PROVEN-IN-PAPER"


@given(non_pole)
def test_nilpotent_and_parity(x):
    for a in range(6):
        h = h_first(a, x)
        assert (h ** (a + 1)).is_zero()
        P = swap_matrix(a)
        assert P @ h @ P == -h


def test_nilpotent_check():
    assert check_nilpotent(8, [X]).passed
    assert check_parity(8, X).passed
    assert check_residue_vectors(8).passed


def test_null_pair_vectors():
    pair = null_pair(2)
    assert pair.v == [1, -1, 1]
    assert pair.u == [0, -1, 2]


@given(non_pole)
def test_null_constant_is_half_alpha(x):
    for a in range(1, 7):
        assert measure_u_constant(a, x) == Fraction(a, 2)
        assert check_null(a, x).passed
