"""Dense exact linear algebra over the prime field F_p.

Matrices are numpy int64 arrays with entries reduced into [0, p).  Vectors
living in F_p^n are 1-d arrays.  Everything here is small and desk scale, so
plain Gaussian elimination is used throughout.
"""

from __future__ import annotations

import numpy as np


def asmat(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    return m


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (asmat(a) @ asmat(b)) % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = asmat(a).copy() % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = r
        while pr < rows and m[pr, c] == 0:
            pr += 1
        if pr == rows:
            continue
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = (m[r] * inv_mod(m[r, c], p)) % p
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of the right kernel {x : a x = 0}."""
    m = asmat(a)
    rows, cols = m.shape
    if cols == 0:
        return zeros(0, 0)
    if rows == 0:
        return eye(cols)
    red, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros(len(free), cols)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-red[r, fc]) % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of a x = b, or None if inconsistent."""
    m = asmat(a)
    rhs = np.asarray(b, dtype=np.int64).reshape(-1) % p
    aug = np.concatenate([m, rhs.reshape(-1, 1)], axis=1)
    red, pivots = rref(aug, p)
    cols = m.shape[1]
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = red[r, cols]
    return x


def inv_matrix(a: np.ndarray, p: int) -> np.ndarray | None:
    m = asmat(a)
    n = m.shape[0]
    if m.shape[1] != n:
        return None
    aug = np.concatenate([m, eye(n)], axis=1)
    red, pivots = rref(aug, p)
    if pivots[:n] != list(range(n)):
        return None
    return red[:, n:]


def is_invertible(a: np.ndarray, p: int) -> bool:
    m = asmat(a)
    return m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def row_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Nonzero rows of the rref: canonical basis of the row space."""
    red, pivots = rref(a, p)
    return red[: len(pivots)]


def stack_rows(mats: list[np.ndarray], cols: int) -> np.ndarray:
    parts = [asmat(m) for m in mats if m.size]
    if not parts:
        return zeros(0, cols)
    return np.concatenate(parts, axis=0)


def in_row_space(a: np.ndarray, v: np.ndarray, p: int) -> bool:
    base = row_basis(a, p)
    return rank(np.concatenate([base, asmat(v)], axis=0), p) == base.shape[0]


def kron_left(m: np.ndarray, identity_dim: int) -> np.ndarray:
    """Matrix of X -> X m on vec(X) read row-major, X with identity_dim rows."""
    return np.kron(eye(identity_dim), asmat(m).T)


def kron_right(m: np.ndarray, identity_dim: int) -> np.ndarray:
    """Matrix of X -> m X on vec(X) read row-major, X with identity_dim cols."""
    return np.kron(asmat(m), eye(identity_dim))


def all_vectors(dim: int, p: int):
    """All of F_p^dim in lexicographic order, the zero vector first."""
    v = np.zeros(dim, dtype=np.int64)
    while True:
        yield v.copy()
        i = dim - 1
        while i >= 0 and v[i] == p - 1:
            v[i] = 0
            i -= 1
        if i < 0:
            return
        v[i] += 1


def matrix_key(a: np.ndarray) -> bytes:
    """Deterministic sort key for a matrix."""
    return asmat(a).tobytes()
