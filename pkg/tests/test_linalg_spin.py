from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from conftest import gaussian
from exint.errors import NotInvertible
from exint.linalg import Matrix, row_reduce
from exint.scalar import ONE, ZERO, Scalar
from exint.spin import (SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z, SpinMatrix, bits, from_bits, local_operator,
                        magnetization, sector_indices, xxx_hamiltonian)

matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(gaussian, min_size=n, max_size=n), min_size=n, max_size=n)).map(Matrix)


@given(matrices)
def test_inverse_or_singular(m):
    try:
        inv = m.inverse()
    except NotInvertible:
        assert m.charpoly()[0].is_zero()
        return
    assert m @ inv == Matrix.identity(m.nrows)


@given(matrices)
def test_charpoly_cayley_hamilton(m):
    coeffs = m.charpoly()
    acc = Matrix.zeros(m.nrows)
    power = Matrix.identity(m.nrows)
    for c in coeffs:
        acc = acc + power.scale(c)
        power = power @ m
    assert acc.is_zero()


def test_row_reduce_unique_and_inconsistent():
    cols = [[Scalar(1), Scalar(0)], [Scalar(1), Scalar(1)]]
    rank, sol = row_reduce(cols, [Scalar(3), Scalar(2)])
    assert rank == 2 and sol == [Scalar(1), Scalar(2)]
    rank, sol = row_reduce([[Scalar(1), Scalar(1)]], [Scalar(1), Scalar(2)])
    assert rank == 1 and sol is None


def test_matrix_string_round_trip():
    m = Matrix([[Scalar(Fraction(1, 3)), Scalar(0, -2)], [ZERO, ONE]])
    assert Matrix.from_strings(m.to_strings()) == m


def test_bits_msb_first():
    assert bits(0b10, 2) == (1, 0)
    assert from_bits((1, 0, 1)) == 5


def test_local_operator_places_sigma():
    op = local_operator(2, {0: SIGMA_PLUS, 1: SIGMA_MINUS})
    # |01><10|
    assert op.entries == {(1, 2): ONE}


def test_hamiltonian_two_sites():
    h = xxx_hamiltonian(2).to_dense()
    expected = np.diag([1, -1, -1, 1]).astype(complex)
    expected[1, 2] = expected[2, 1] = 2
    assert np.array_equal(h, expected)


def test_hamiltonian_conserves_magnetization():
    for n in range(2, 6):
        assert xxx_hamiltonian(n).commutator(magnetization(n)).is_zero()


def test_sector_indices():
    # spin 0 is up, so one up spin means exactly one zero bit
    assert sector_indices(3, 1) == [3, 5, 6]


spin_ops = st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n),
    st.dictionaries(st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1)), gaussian,
                    max_size=6)))


@given(spin_ops, spin_ops)
def test_product_and_transpose(a, b):
    (n, ea), (_, eb) = a, b
    if a[0] != b[0]:
        return
    A = SpinMatrix(n, {k: v for k, v in ea.items() if not v.is_zero()})
    B = SpinMatrix(n, {k: v for k, v in eb.items() if not v.is_zero()})
    assert (A @ B).T == B.T @ A.T
    assert np.allclose((A @ B).to_dense(), A.to_dense() @ B.to_dense())
    assert (A @ B).trace() == (B @ A).trace()
    assert SpinMatrix.from_json(A.to_json()) == A


def test_pauli_algebra():
    p, m, z = (SpinMatrix(1, dict(o)) for o in (SIGMA_PLUS, SIGMA_MINUS, SIGMA_Z))
    assert p.commutator(m) == z
    assert z.commutator(p) == p.scale(2)
