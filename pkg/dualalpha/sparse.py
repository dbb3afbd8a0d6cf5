"""
Sparse matrices over a prime field F_p.

Storage is a scipy CSR matrix of int64 residues in [0, p); duplicates are summed
and reduced at construction so every stored entry is a nonzero residue.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
from scipy import sparse
from sympy import isprime


class NonPrimeModulusError(ValueError):
    pass


def is_prime(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and bool(isprime(int(n)))


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise NonPrimeModulusError(f"modulus {p!r} is not prime")
    return int(p)


@dataclass(frozen=True)
class SparseMatrixFp:
    rows: int
    cols: int
    prime: int
    data: sparse.csr_matrix

    @classmethod
    def from_triples(
        cls,
        shape: Tuple[int, int],
        triples: Iterable[Tuple[int, int, int]],
        prime: int,
    ) -> "SparseMatrixFp":
        p = require_prime(prime)
        n_rows, n_cols = int(shape[0]), int(shape[1])
        trip = list(triples)
        if trip:
            r, c, v = (np.asarray(a, dtype=np.int64) for a in zip(*trip))
        else:
            r = c = v = np.zeros(0, dtype=np.int64)
        if r.size and (r.min() < 0 or r.max() >= n_rows or c.min() < 0 or c.max() >= n_cols):
            raise IndexError(f"entry index out of range for shape {n_rows}x{n_cols}")
        coo = sparse.coo_matrix((np.mod(v, p), (r, c)), shape=(n_rows, n_cols), dtype=np.int64)
        return cls._reduced(coo.tocsr(), p)

    @classmethod
    def from_dense(cls, array, prime: int) -> "SparseMatrixFp":
        p = require_prime(prime)
        a = np.mod(np.asarray(array, dtype=np.int64), p)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {a.shape}")
        return cls._reduced(sparse.csr_matrix(a), p)

    @classmethod
    def _reduced(cls, m: sparse.csr_matrix, p: int) -> "SparseMatrixFp":
        m = m.copy()
        m.sum_duplicates()
        m.data = np.mod(m.data, p)
        m.eliminate_zeros()
        m.sort_indices()
        return cls(rows=m.shape[0], cols=m.shape[1], prime=p, data=m)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return int(self.data.nnz)

    def triples(self) -> list[Tuple[int, int, int]]:
        coo = self.data.tocoo()
        return sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))

    def row_dicts(self) -> dict[int, dict[int, int]]:
        """Nonempty rows as {row: {col: value}}, the working form of elimination."""
        out: dict[int, dict[int, int]] = {}
        indptr, indices, data = self.data.indptr, self.data.indices, self.data.data
        for i in range(self.rows):
            lo, hi = indptr[i], indptr[i + 1]
            if hi > lo:
                out[i] = dict(zip(indices[lo:hi].tolist(), data[lo:hi].tolist()))
        return out

    def to_dense(self) -> np.ndarray:
        return self.data.toarray()

    def matmul(self, other: "SparseMatrixFp") -> "SparseMatrixFp":
        if self.prime != other.prime:
            raise ValueError(f"prime mismatch: {self.prime} vs {other.prime}")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        return self._reduced((self.data @ other.data).tocsr(), self.prime)

    def __matmul__(self, other: "SparseMatrixFp") -> "SparseMatrixFp":
        return self.matmul(other)
