# Exact linear algebra over prime fields F_p.
#
# All matrices are numpy int64 arrays with entries in [0, p).  Every routine
# is deterministic: Gaussian elimination always picks the first nonzero pivot.

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def is_prime(n: int) -> bool:
    """Trial-division primality test; fine for the small moduli used here."""
    if n <= 1:
        return False
    for i in range(2, int(math.isqrt(n)) + 1):
        if n % i == 0:
            return False
    return True


class NotPrimeError(ValueError):
    pass


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime p, with exact matrix arithmetic."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrimeError(f"modulus {self.p} is not prime")

    def reduce(self, a) -> np.ndarray:
        return np.asarray(a, dtype=np.int64) % self.p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def inv_scalar(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(a, self.p - 2, self.p)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a @ b) % self.p

    def rref(self, mat: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
        """Reduced row echelon form and the tuple of pivot columns."""
        p = self.p
        m = self.reduce(mat).copy()
        rows, cols = m.shape
        pivots = []
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            nz = np.nonzero(m[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                m[[r, i]] = m[[i, r]]
            m[r] = (m[r] * self.inv_scalar(m[r, c])) % p
            for j in range(rows):
                if j != r and m[j, c]:
                    m[j] = (m[j] - m[j, c] * m[r]) % p
            pivots.append(c)
            r += 1
        return m, tuple(pivots)

    def rank(self, mat: np.ndarray) -> int:
        if mat.size == 0:
            return 0
        return len(self.rref(mat)[1])

    def row_space(self, mat: np.ndarray) -> np.ndarray:
        """Canonical (RREF) basis of the row space, one basis vector per row."""
        r, piv = self.rref(mat)
        return r[: len(piv)]

    def column_space(self, mat: np.ndarray) -> np.ndarray:
        """Canonical basis of the column space, one basis vector per column."""
        return self.row_space(mat.T).T

    def nullspace(self, mat: np.ndarray) -> np.ndarray:
        """Basis of the right nullspace, one basis vector per column."""
        mat = self.reduce(mat)
        rows, cols = mat.shape
        r, piv = self.rref(mat)
        free = [c for c in range(cols) if c not in piv]
        basis = self.zeros(cols, len(free))
        for k, fc in enumerate(free):
            basis[fc, k] = 1
            for i, pc in enumerate(piv):
                basis[pc, k] = (-r[i, fc]) % self.p
        return basis

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """One solution X of A X = B, or None if the system is inconsistent."""
        a = self.reduce(a)
        b = self.reduce(b)
        if b.ndim == 1:
            b = b.reshape(-1, 1)
        rows, cols = a.shape
        aug = np.concatenate([a, b], axis=1)
        r, piv = self.rref(aug)
        if any(c >= cols for c in piv):
            return None
        x = self.zeros(cols, b.shape[1])
        for i, pc in enumerate(piv):
            x[pc] = r[i, cols:]
        return x

    def inv(self, mat: np.ndarray) -> np.ndarray:
        n = mat.shape[0]
        x = self.solve(mat, self.eye(n))
        if x is None or self.rank(mat) != n:
            raise ValueError("matrix not invertible")
        return x

    def in_row_space(self, vec: np.ndarray, basis_rref: np.ndarray) -> bool:
        """Membership test against a basis already in RREF."""
        v = self.reduce(vec).copy()
        for row in basis_rref:
            nz = np.nonzero(row)[0]
            if nz.size == 0:
                continue
            c = int(nz[0])
            if v[c]:
                v = (v - v[c] * row) % self.p
        return not v.any()

    def coords_in_rows(self, vec: np.ndarray, rows: np.ndarray) -> np.ndarray | None:
        """Coordinates of vec as a combination of the given rows, or None."""
        return self.solve(rows.T, vec.reshape(-1, 1))
