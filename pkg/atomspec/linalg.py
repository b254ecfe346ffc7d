"""
Linear algebra over F_p on numpy integer arrays.

Subspaces of F_p^n are carried as their reduced row echelon basis, which
makes equal subspaces equal arrays.
"""
from itertools import combinations, product
from typing import Iterator

import numpy as np

DTYPE = np.int64


def as_matrix(rows, columns: int, p: int) -> np.ndarray:
    return np.asarray(rows, dtype=DTYPE).reshape(len(rows), columns) % p


def rref(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Return the nonzero rows of the reduced row echelon form and the pivot columns."""
    A = np.array(matrix, dtype=DTYPE) % p
    if A.ndim != 2:
        raise ValueError("rref needs a 2-dimensional array")
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        rows = np.nonzero(A[r:, c])[0]
        if rows.size == 0:
            continue
        k = r + int(rows[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(matrix: np.ndarray, p: int) -> int:
    return len(rref(matrix, p)[1])


def nullspace(matrix: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows, in echelon form) of {x : matrix @ x == 0}."""
    matrix = np.asarray(matrix, dtype=DTYPE)
    n = matrix.shape[1]
    R, pivots = rref(matrix, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=DTYPE)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for i, c in enumerate(pivots):
            basis[row, c] = (-R[i, f]) % p
    return rref(basis, p)[0]


def row_basis(vectors: np.ndarray, p: int) -> np.ndarray:
    return rref(vectors, p)[0]


def in_span(vector: np.ndarray, basis: np.ndarray, p: int) -> bool:
    vector = np.reshape(vector, (1, -1))
    basis = np.asarray(basis, dtype=DTYPE).reshape(len(basis), vector.shape[1])
    return rank(np.vstack([basis, vector]), p) == rank(basis, p)


def subspace_contains(big: np.ndarray, small: np.ndarray, p: int) -> bool:
    if small.shape[0] == 0:
        return True
    return rank(np.vstack([big, small]), p) == rank(big, p)


def reduce_mod(vector: np.ndarray, basis: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    """Reduce a vector against an echelon basis; the result vanishes on pivot columns."""
    v = np.array(vector, dtype=DTYPE) % p
    for row, c in zip(basis, pivots):
        if v[c]:
            v = (v - v[c] * row) % p
    return v


def complement_columns(pivots: list[int], n: int) -> list[int]:
    return [c for c in range(n) if c not in pivots]


def image_basis(matrix: np.ndarray, basis: np.ndarray, p: int) -> np.ndarray:
    """Echelon basis of matrix applied to the row space of `basis`."""
    if basis.shape[0] == 0:
        return np.zeros((0, matrix.shape[0]), dtype=DTYPE)
    return row_basis((basis @ matrix.T) % p, p)


def enumerate_subspaces(n: int, p: int) -> Iterator[np.ndarray]:
    """Every subspace of F_p^n, as its echelon basis, smallest dimension first."""
    for k in range(n + 1):
        for pivots in combinations(range(n), k):
            slots = [
                (i, c)
                for i, pivot in enumerate(pivots)
                for c in range(pivot + 1, n)
                if c not in pivots
            ]
            for values in product(range(p), repeat=len(slots)):
                basis = np.zeros((k, n), dtype=DTYPE)
                for i, pivot in enumerate(pivots):
                    basis[i, pivot] = 1
                for (i, c), value in zip(slots, values):
                    basis[i, c] = value
                yield basis


def gaussian_binomial(n: int, k: int, p: int) -> int:
    numerator = denominator = 1
    for i in range(k):
        numerator *= p ** (n - i) - 1
        denominator *= p ** (i + 1) - 1
    return numerator // denominator


def count_subspaces(n: int, p: int) -> int:
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def all_matrices(rows: int, columns: int, p: int) -> Iterator[np.ndarray]:
    for entries in product(range(p), repeat=rows * columns):
        yield np.array(entries, dtype=DTYPE).reshape(rows, columns)


def matrix_key(matrix: np.ndarray) -> tuple:
    return (matrix.shape, tuple(int(x) for x in matrix.flatten()))
