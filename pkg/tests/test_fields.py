import numpy as np
import pytest

from quivergrass.fields import NotPrimeError, PrimeField


def test_prime_check():
    PrimeField(2)
    PrimeField(13)
    with pytest.raises(NotPrimeError):
        PrimeField(4)
    with pytest.raises(NotPrimeError):
        PrimeField(1)


def test_rref_known():
    f = PrimeField(5)
    mat = np.array([[2, 4, 1], [1, 2, 4]], dtype=np.int64)
    r, piv = f.rref(mat)
    assert piv == (0, 2)
    # rows are unit in their pivot columns
    for i, c in enumerate(piv):
        assert r[i, c] == 1
    assert f.rank(mat) == 2


def test_nullspace_and_solve():
    f = PrimeField(7)
    rng = np.random.default_rng(3)
    a = f.reduce(rng.integers(0, 7, size=(4, 6)))
    ns = f.nullspace(a)
    assert ns.shape[0] == 6
    assert not f.matmul(a, ns).any()
    assert f.rank(a) + ns.shape[1] == 6
    x = f.reduce(rng.integers(0, 7, size=(6, 2)))
    b = f.matmul(a, x)
    sol = f.solve(a, b)
    assert sol is not None
    assert np.array_equal(f.matmul(a, sol), b)


def test_solve_inconsistent():
    f = PrimeField(3)
    a = np.array([[1, 0], [0, 0]], dtype=np.int64)
    b = np.array([[0], [1]], dtype=np.int64)
    assert f.solve(a, b) is None


def test_inverse_roundtrip():
    f = PrimeField(11)
    rng = np.random.default_rng(0)
    while True:
        a = f.reduce(rng.integers(0, 11, size=(4, 4)))
        if f.rank(a) == 4:
            break
    assert np.array_equal(f.matmul(a, f.inv(a)), f.eye(4))


def test_row_and_column_space():
    f = PrimeField(2)
    a = np.array([[1, 1, 0], [0, 0, 1], [1, 1, 1]], dtype=np.int64)
    rows = f.row_space(a)
    assert rows.shape[0] == 2
    cols = f.column_space(a)
    assert cols.shape == (3, 2)
    assert f.in_row_space(np.array([1, 1, 1], dtype=np.int64), rows)
    assert not f.in_row_space(np.array([1, 0, 0], dtype=np.int64), rows)
