import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from preproj.linalg import (
    Field,
    FieldElem,
    Matrix,
    invert,
    is_prime,
    kernel_basis,
    rank,
    rref,
    solve,
)


def test_is_prime():
    assert is_prime(2) and is_prime(5) and is_prime(32003)
    assert not is_prime(1) and not is_prime(32001)


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        Field(6)


def test_fieldelem_canonical():
    x = FieldElem(7, 5)
    assert x.value == 2
    assert (x + FieldElem(3, 5)).value == 0
    assert (x * x.inv()).value == 1


def test_rref_identity():
    r, piv = rref(np.eye(2, dtype=np.int64), 7)
    assert np.array_equal(r, np.eye(2, dtype=np.int64))
    assert piv == [0, 1]


def test_rref_zero():
    r, piv = rref(np.zeros((3, 3), dtype=np.int64), 7)
    assert not r.any()
    assert piv == []


def test_rref_rank_one_f5():
    # hand row-reduction: [[1,2],[2,4]] over F_5 -> [[1,2],[0,0]]
    r, piv = rref(np.array([[1, 2], [2, 4]]), 5)
    assert r.tolist() == [[1, 2], [0, 0]]
    assert piv == [0]


def test_kernel_identity_and_zero():
    assert kernel_basis(np.eye(3, dtype=np.int64), 7).shape == (3, 0)
    k = kernel_basis(np.zeros((4, 4), dtype=np.int64), 7)
    assert k.shape == (4, 4)
    assert np.array_equal(rref(k.T, 7)[0], np.eye(4, dtype=np.int64))


def test_kernel_rank_one_f5():
    # solve by hand: kernel of [[1,2],[2,4]] over F_5 is spanned by (-2,1)=(3,1)
    k = kernel_basis(np.array([[1, 2], [2, 4]]), 5)
    assert k.shape == (2, 1)
    v = k[:, 0]
    w = np.array([3, 1])
    # equal up to scalar
    assert (v[1] * w[0] - v[0] * w[1]) % 5 == 0 and v.any()


def test_solve_identity_and_inconsistent():
    b = np.array([4, 2])
    assert np.array_equal(solve(np.eye(2, dtype=np.int64), b, 7), b)
    assert solve(np.zeros((2, 2), dtype=np.int64), b, 7) is None


def test_solve_back_substitution_f7():
    # [[1,1],[0,1]] x = (3,1) over F_7 -> (2,1)
    x = solve(np.array([[1, 1], [0, 1]]), np.array([3, 1]), 7)
    assert x.tolist() == [2, 1]


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve(np.eye(2, dtype=np.int64), np.array([1, 2, 3]), 7)


def test_matrix_wrapper():
    f = Field(7)
    m = Matrix(f, [[1, 2], [3, 4]])
    i = Matrix(f, f.eye(2))
    assert (m @ i) == m
    with pytest.raises(ValueError):
        Matrix(f, [[1, 2]]) @ Matrix(f, [[1, 2]])


def test_rationals():
    f = Field(0)
    r, piv = rref(f.array([[2, 4], [1, 3]]), 0)
    assert piv == [0, 1]
    x = solve(f.array([[2, 0], [0, 3]]), f.array([[1], [1]]), 0)
    from fractions import Fraction

    assert x[0, 0] == Fraction(1, 2) and x[1, 0] == Fraction(1, 3)


def test_invert():
    a = np.array([[1, 1], [0, 1]])
    ainv = invert(a, 7)
    assert (a @ ainv % 7 == np.eye(2)).all()
    with pytest.raises(np.linalg.LinAlgError):
        invert(np.array([[1, 2], [2, 4]]), 5)


matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(0, 6), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
)


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_kernel_annihilates(data):
    m = np.array(data) % 7
    k = kernel_basis(m, 7)
    assert not ((m @ k) % 7).any()


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_rank_nullity(data):
    m = np.array(data) % 7
    assert rank(m, 7) + kernel_basis(m, 7).shape[1] == m.shape[1]


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_rref_idempotent(data):
    m = np.array(data) % 7
    r1, p1 = rref(m, 7)
    r2, p2 = rref(r1, 7)
    assert np.array_equal(r1, r2) and p1 == p2


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_solve_consistency(data):
    m = np.array(data) % 7
    rng = np.random.default_rng(0)
    x0 = rng.integers(0, 7, size=m.shape[1])
    b = (m @ x0) % 7
    x = solve(m, b, 7)
    assert x is not None
    assert np.array_equal((m @ x) % 7, b)
