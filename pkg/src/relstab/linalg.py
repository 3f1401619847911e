"""Exact dense linear algebra over prime fields GF(p).

Matrices are plain ``numpy`` int64 arrays with entries in ``[0, p)``; the
modulus travels alongside as an ``int``.  Every routine is a pure function
and never mutates its inputs.  Reduced row echelon forms are unique, so all
derived bases (kernels, column spaces) are canonical.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_DIM = 4096
MAX_PRIME = 97


class LinalgError(ValueError):
    pass


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


@dataclass(frozen=True)
class Field:
    """The prime field GF(p), 2 <= p <= 97."""

    p: int

    def __post_init__(self):
        if not (2 <= self.p <= MAX_PRIME) or not is_prime(self.p):
            raise LinalgError(f"GF(p) needs a prime 2 <= p <= {MAX_PRIME}, got {self.p}")

    def matrix(self, rows) -> np.ndarray:
        return as_matrix(rows, self.p)


def _check_dims(*shapes):
    for shape in shapes:
        if any(s > MAX_DIM for s in shape):
            raise LinalgError(f"matrix of shape {shape} exceeds the {MAX_DIM} dimension cap")


def as_matrix(rows, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    a = np.array(rows, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim != 2:
        raise LinalgError(f"expected a 2-d matrix, got shape {a.shape}")
    _check_dims(a.shape)
    return a % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


_FLOAT_EXACT = 2**52


def mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise LinalgError(f"cannot multiply {a.shape} by {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    if a.shape[1] * (p - 1) ** 2 < _FLOAT_EXACT:
        # float64 products are exact here and go through BLAS
        return (a.astype(np.float64) @ b.astype(np.float64) % p).astype(np.int64)
    return (a @ b) % p


def matpow(a: np.ndarray, k: int, p: int) -> np.ndarray:
    result = identity(a.shape[0])
    base = a
    while k:
        if k & 1:
            result = mul(result, base, p)
        k >>= 1
        if k:
            base = mul(base, base, p)
    return result


def _rref_inplace(a: np.ndarray, p: int) -> list[int]:
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        if p != 2:
            inv = pow(int(a[r, c]), -1, p)
            a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            if p == 2:
                a[rows, c:] ^= a[r, c:]
            else:
                a[rows, c:] = (a[rows, c:] - np.outer(col[rows], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return pivots


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form with first-nonzero pivoting.

    Returns ``(R, rank, pivots)``.
    """
    _check_dims(a.shape)
    work = (a % p).astype(np.uint8 if p == 2 else np.int64)
    pivots = _rref_inplace(work, p)
    return work.astype(np.int64), len(pivots), pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return rref(a, p)[1]


def kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning ``{x : a @ x = 0}``, read off the RREF."""
    m, n = a.shape
    r, rk, pivots = rref(a, p)
    free = [j for j in range(n) if j not in set(pivots)]
    k = zeros(n, len(free))
    for col, j in enumerate(free):
        k[j, col] = 1
        for row, pc in enumerate(pivots):
            k[pc, col] = (-r[row, j]) % p
    return k


def row_space(a: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis (RREF rows) of the row space."""
    if a.shape[0] == 0:
        return zeros(0, a.shape[1])
    r, rk, _ = rref(a, p)
    return r[:rk]


def column_space(a: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis (as columns) of the column space."""
    return row_space(a.T, p).T


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Some ``X`` with ``a @ X = b``, or ``None`` when the system is inconsistent."""
    if a.shape[0] != b.shape[0]:
        raise LinalgError(f"row mismatch in solve: {a.shape} vs {b.shape}")
    m, n = a.shape
    k = b.shape[1]
    aug = np.concatenate([a % p, b % p], axis=1)
    r, rk, pivots = rref(aug, p)
    if any(pc >= n for pc in pivots):
        return None
    x = zeros(n, k)
    for row, pc in enumerate(pivots):
        x[pc] = r[row, n:]
    return x


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise LinalgError(f"cannot invert non-square {a.shape}")
    aug = np.concatenate([a % p, identity(n)], axis=1)
    r, rk, pivots = rref(aug, p)
    if pivots[:n] != list(range(n)):
        raise LinalgError("matrix is singular")
    return r[:, n:]


def is_invertible(a: np.ndarray, p: int) -> bool:
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def kron(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Kronecker product with ``(A⊗B)[i*rb + k, j*cb + l] = A[i,j]*B[k,l]``."""
    _check_dims((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))
    return np.kron(a, b) % p


def flatten_maps(mats: np.ndarray) -> np.ndarray:
    """A stack ``(k, r, c)`` of matrices as ``k`` row vectors of length ``r*c``."""
    return mats.reshape(mats.shape[0], mats.shape[1] * mats.shape[2])


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    _check_dims((rows, cols))
    out = zeros(rows, cols)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def complement_columns(basis: np.ndarray, n: int, p: int) -> np.ndarray:
    """Standard basis vectors extending the column span of ``basis`` to GF(p)^n.

    Chosen greedily in index order, so the result is deterministic.
    """
    r = row_space(basis.T, p) if basis.size else zeros(0, n)
    pivots = set()
    for row in r:
        pivots.add(int(np.flatnonzero(row)[0]))
    free = [j for j in range(n) if j not in pivots]
    c = zeros(n, len(free))
    for col, j in enumerate(free):
        c[j, col] = 1
    return c


def independent_rows(a: np.ndarray, p: int) -> list[int]:
    """Indices of a maximal set of linearly independent rows, greedy in order."""
    return rref(a.T, p)[2] if a.size else []


class Echelon:
    """Incrementally maintained reduced basis of a subspace of GF(p)^n.

    ``reduce`` returns the residue of a vector modulo the current span;
    ``add`` inserts it if independent.
    """

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v % self.p
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c:
                v = (v - c * row) % self.p
        return v

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def add(self, v: np.ndarray) -> bool:
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        pc = int(nz[0])
        v = (v * pow(int(v[pc]), -1, self.p)) % self.p
        # keep earlier rows reduced at the new pivot
        for idx, row in enumerate(self.rows):
            c = row[pc]
            if c:
                self.rows[idx] = (row - c * v) % self.p
        self.rows.append(v)
        self.pivots.append(pc)
        return True


def in_span(basis_rows: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis_rows.shape[0] == 0:
        return not (v % p).any()
    return rank(np.vstack([basis_rows, v[None, :]]), p) == rank(basis_rows, p)


def random_matrix(rng: np.random.Generator, rows: int, cols: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=(rows, cols), dtype=np.int64)


def random_invertible(rng: np.random.Generator, n: int, p: int) -> np.ndarray:
    while True:
        a = random_matrix(rng, n, n, p)
        if is_invertible(a, p):
            return a
