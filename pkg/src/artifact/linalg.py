"""Dense exact linear algebra over a FiniteField.

Matrices are int64 numpy arrays of field codes.  Subspaces are stored as
matrices whose rows form a basis, matching the row-vector convention used
for right modules.
"""

from __future__ import annotations

import numpy as np

from .finring import FiniteField


def as_matrix(A, ncols: int | None = None) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size else np.zeros((0, ncols or 0), dtype=np.int64)
    return A


def zeros(m: int, n: int) -> np.ndarray:
    return np.zeros((m, n), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rref(F: FiniteField, A) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        piv = int(R[r, c])
        if piv != 1:
            R[r] = F.amul(np.int64(F.inv(piv)), R[r])
        col = R[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            R[rows] = F.asub(R[rows], F.amul(col[rows][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(F: FiniteField, A) -> int:
    A = as_matrix(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def row_basis(F: FiniteField, A, ncols: int | None = None) -> np.ndarray:
    A = as_matrix(A, ncols)
    if A.shape[0] == 0:
        return zeros(0, A.shape[1] if ncols is None else ncols)
    return rref(F, A)[0]


def nullspace(F: FiniteField, A, ncols: int | None = None) -> np.ndarray:
    """Rows spanning {x : A x^T = 0}."""
    A = as_matrix(A, ncols)
    n = A.shape[1]
    if A.shape[0] == 0:
        return identity(n)
    R, pivots = rref(F, A)
    free = [j for j in range(n) if j not in set(pivots)]
    N = zeros(len(free), n)
    for k, j in enumerate(free):
        N[k, j] = 1
        for i, c in enumerate(pivots):
            N[k, c] = F.neg(int(R[i, j]))
    return N


def left_nullspace(F: FiniteField, A) -> np.ndarray:
    """Rows spanning {y : y A = 0}."""
    A = as_matrix(A)
    return nullspace(F, A.T, ncols=A.shape[0])


def kernel_of_map(F: FiniteField, M) -> np.ndarray:
    """Kernel of the map x -> x M on row vectors."""
    return left_nullspace(F, M)


def image_of_map(F: FiniteField, V, M) -> np.ndarray:
    """Row basis of V M."""
    V = as_matrix(V)
    M = as_matrix(M)
    if V.shape[0] == 0:
        return zeros(0, M.shape[1])
    return row_basis(F, F.matmul(V, M))


def intersect(F: FiniteField, A, B) -> np.ndarray:
    """Row basis of rowspace(A) intersected with rowspace(B)."""
    A = row_basis(F, A)
    B = row_basis(F, B)
    n = A.shape[1] if A.shape[0] else B.shape[1]
    if A.shape[0] == 0 or B.shape[0] == 0:
        return zeros(0, n)
    # x A = y B  <=>  (x, y) [A; -B] = 0
    S = np.vstack([A, F.aneg(B)])
    K = left_nullspace(F, S)
    if K.shape[0] == 0:
        return zeros(0, n)
    return row_basis(F, F.matmul(K[:, : A.shape[0]], A))


def sum_spaces(F: FiniteField, A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    return row_basis(F, np.vstack([A, B]))


def contains(F: FiniteField, A, v) -> bool:
    """Is every row of v in rowspace(A)?"""
    A, v = as_matrix(A), as_matrix(v)
    if v.shape[0] == 0:
        return True
    return rank(F, np.vstack([A, v])) == rank(F, A)


def solve_left(F: FiniteField, A, B) -> np.ndarray | None:
    """Some X with X A = B, or None if no solution exists."""
    A, B = as_matrix(A), as_matrix(B)
    m = A.shape[0]
    aug = np.hstack([A.T, B.T])
    R, pivots = rref(F, aug)
    if any(c >= m for c in pivots):
        return None
    X = zeros(B.shape[0], m)
    for i, c in enumerate(pivots):
        X[:, c] = R[i, m:]
    return X


def coordinates(F: FiniteField, basis, v) -> np.ndarray:
    """Coefficients of rows of v in terms of the rows of a basis."""
    X = solve_left(F, basis, v)
    if X is None:
        raise ValueError("vector not in span")
    return X


def inverse(F: FiniteField, A) -> np.ndarray:
    A = as_matrix(A)
    n = A.shape[0]
    R, pivots = rref(F, np.hstack([A, identity(n)]))
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("singular matrix")
    return R[:n, n:]


def complement_basis(F: FiniteField, V, n: int) -> np.ndarray:
    """Standard basis vectors completing rowspace(V) to the full space."""
    V = row_basis(F, V, n)
    _, pivots = rref(F, V) if V.shape[0] else (None, [])
    free = [j for j in range(n) if j not in set(pivots)]
    C = zeros(len(free), n)
    for k, j in enumerate(free):
        C[k, j] = 1
    return C


def power(F: FiniteField, M, e: int) -> np.ndarray:
    M = as_matrix(M)
    result = identity(M.shape[0])
    base = M
    while e:
        if e & 1:
            result = F.matmul(result, base)
        base = F.matmul(base, base)
        e >>= 1
    return result


def restrict(F: FiniteField, V, M) -> np.ndarray:
    """Matrix of x -> x M on an invariant subspace with row basis V."""
    V = as_matrix(V)
    if V.shape[0] == 0:
        return zeros(0, 0)
    X = solve_left(F, V, F.matmul(V, M))
    if X is None:
        raise ValueError("subspace is not invariant")
    return X


def lift_scalars(emb: np.ndarray, A) -> np.ndarray:
    """Apply a field embedding entrywise."""
    return emb[as_matrix(A)]
