import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from torskit import fp

PRIMES = [2, 3, 5]


def small_matrix(p, rows, cols):
    return st.lists(
        st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols),
        min_size=rows,
        max_size=rows,
    ).map(lambda m: np.array(m, dtype=np.int64))


@st.composite
def matrix_and_prime(draw):
    p = draw(st.sampled_from(PRIMES))
    rows = draw(st.integers(1, 5))
    cols = draw(st.integers(1, 5))
    return p, draw(small_matrix(p, rows, cols))


@given(matrix_and_prime())
def test_nullspace_annihilates(data):
    p, a = data
    ns = fp.nullspace(a, p)
    assert ns.shape[0] + fp.rank(a, p) == a.shape[1]
    if ns.size:
        assert not ((a @ ns.T) % p).any()
    assert fp.rank(ns, p) == ns.shape[0]


@given(matrix_and_prime())
def test_rref_idempotent_and_rank(data):
    p, a = data
    red, pivots = fp.rref(a, p)
    again, pivots2 = fp.rref(red, p)
    assert (red == again).all()
    assert pivots == pivots2
    assert len(pivots) == fp.rank(a, p)


@given(matrix_and_prime())
def test_solve_consistent_systems(data):
    p, a = data
    x = np.arange(a.shape[1], dtype=np.int64) % p
    b = (a @ x) % p
    sol = fp.solve(a, b, p)
    assert sol is not None
    assert ((a @ sol) % p == b).all()


@pytest.mark.parametrize("p", PRIMES)
def test_inverse_roundtrip(p):
    a = np.array([[1, 1], [0, 1]], dtype=np.int64)
    inv = fp.inv_matrix(a, p)
    assert ((a @ inv) % p == np.eye(2, dtype=np.int64)).all()
    singular = np.array([[1, 1], [1, 1]], dtype=np.int64)
    assert fp.inv_matrix(singular, p) is None
    assert not fp.is_invertible(singular, p)


def test_solve_inconsistent_returns_none():
    a = np.array([[1, 0], [1, 0]], dtype=np.int64)
    assert fp.solve(a, np.array([1, 0]), 2) is None


def test_kron_conventions():
    # row-major vec: vec(X m) = kron_left(m, rows) @ vec(X)
    p = 5
    x = np.array([[1, 2], [3, 4]], dtype=np.int64)
    m = np.array([[1, 1], [0, 2]], dtype=np.int64)
    left = (fp.kron_left(m, 2) @ x.reshape(-1)) % p
    assert (left == ((x @ m) % p).reshape(-1)).all()
    right = (fp.kron_right(m, 2) @ x.reshape(-1)) % p
    assert (right == ((m @ x) % p).reshape(-1)).all()


def test_all_vectors_enumeration():
    vecs = list(fp.all_vectors(2, 3))
    assert len(vecs) == 9
    assert not vecs[0].any()
    assert len({tuple(v) for v in vecs}) == 9
