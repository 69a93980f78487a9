"""Exact linear algebra over a prime field F_p.

Two representations are used.  ``SparseMatrix`` holds the differentials of
the Loday complexes, which are large and very sparse; its rank is computed by
sparse elimination on dict rows.  ``Subspace`` holds canonical reduced
row-echelon bases as dense numpy arrays and backs the subquotient bookkeeping
of the spectral sequence, where the ambient spaces are moderate.

Pivoting is deterministic everywhere: lowest column first, then lowest row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np


class NotASubspace(ValueError):
    """Raised when a claimed containment of subspaces fails."""


class NotPrime(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise NotPrime(f"modulus {self.p!r} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return pow(a, self.p - 2, self.p)

    def reduce(self, a: int) -> int:
        return a % self.p


@dataclass(frozen=True)
class SparseMatrix:
    """A rows x cols matrix over F_p stored as nonzero (row, col, value) triples."""

    rows: int
    cols: int
    p: int
    entries: tuple = ()

    def __post_init__(self):
        seen = set()
        for i, j, v in self.entries:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            if not 1 <= v < self.p:
                raise ValueError(f"entry value {v} not a nonzero residue mod {self.p}")
            if (i, j) in seen:
                raise ValueError(f"duplicate entry at ({i}, {j})")
            seen.add((i, j))

    @classmethod
    def from_dict(cls, rows: int, cols: int, p: int, data: Mapping[tuple[int, int], int]):
        entries = []
        for (i, j), v in sorted(data.items()):
            v %= p
            if v:
                entries.append((i, j, v))
        return cls(rows, cols, p, tuple(entries))

    @classmethod
    def from_columns(cls, rows: int, p: int, columns: Sequence[Mapping[int, int]]):
        """Build from a list of sparse columns ``{row: value}``."""
        entries = []
        for j, col in enumerate(columns):
            for i, v in sorted(col.items()):
                v %= p
                if v:
                    entries.append((i, j, v))
        entries.sort()
        return cls(rows, len(columns), p, tuple(entries))

    @classmethod
    def from_dense(cls, a, p: int):
        a = np.asarray(a, dtype=np.int64) % p
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows, cols = a.shape
        nz = np.argwhere(a)
        entries = tuple((int(i), int(j), int(a[i, j])) for i, j in nz)
        return cls(rows, cols, p, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int):
        return cls(rows, cols, p, ())

    @classmethod
    def identity(cls, n: int, p: int):
        return cls(n, n, p, tuple((i, i, 1) for i in range(n)))

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.rows, self.cols), dtype=np.int64)
        for i, j, v in self.entries:
            a[i, j] = v
        return a

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(i, j): v for i, j, v in self.entries}

    def row_dicts(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = [dict() for _ in range(self.rows)]
        for i, j, v in self.entries:
            out[i][j] = v
        return out

    def column_dicts(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = [dict() for _ in range(self.cols)]
        for i, j, v in self.entries:
            out[j][i] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, self.p, tuple(sorted((j, i, v) for i, j, v in self.entries)))

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.p != other.p:
            raise ValueError("field mismatch")
        p = self.p
        other_rows = other.row_dicts()
        acc: dict[tuple[int, int], int] = {}
        for i, k, v in self.entries:
            for j, w in other_rows[k].items():
                acc[(i, j)] = (acc.get((i, j), 0) + v * w) % p
        return SparseMatrix.from_dict(self.rows, other.cols, p, acc)

    def is_zero(self) -> bool:
        return not self.entries

    @property
    def nnz(self) -> int:
        return len(self.entries)


def _sparse_rank(rows: Iterable[dict[int, int]], p: int) -> int:
    """Rank by elimination on dict rows; pivot = lowest column of each row."""
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for row in rows:
        row = {j: v % p for j, v in row.items() if v % p}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(row[c], p - 2, p)
                pivots[c] = {j: (v * inv) % p for j, v in row.items()}
                rank += 1
                break
            f = row[c]
            for j, v in piv.items():
                nv = (row.get(j, 0) - f * v) % p
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
    return rank


def rank(m: SparseMatrix) -> int:
    """F_p-rank of a sparse matrix."""
    if not m.entries:
        return 0
    # eliminate along the shorter dimension
    if m.rows <= m.cols:
        return _sparse_rank(m.row_dicts(), m.p)
    return _sparse_rank(m.column_dicts(), m.p)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over F_p of a dense integer array.

    Returns the nonzero rows of the RREF and the pivot columns.
    """
    a = np.array(a, dtype=np.int64, copy=True) % p
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p, through float64 BLAS when the exact sums fit in 53 bits."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] * (p - 1) ** 2 < 2**52:
        out = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
        return out % p
    return (a @ b) % p


def dense_rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F_p^ambient with its canonical RREF basis (one row per vector)."""

    ambient: int
    p: int
    basis: np.ndarray = field(repr=False)
    pivots: tuple = ()

    @classmethod
    def span(cls, vectors, ambient: int, p: int) -> "Subspace":
        if ambient == 0 or not len(vectors):
            return cls.zero(ambient, p)
        v = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient)
        if v.shape[0] == 0:
            return cls.zero(ambient, p)
        r, piv = rref(v, p)
        return cls(ambient, p, r, tuple(piv))

    @classmethod
    def zero(cls, ambient: int, p: int) -> "Subspace":
        return cls(ambient, p, np.zeros((0, ambient), dtype=np.int64), ())

    @classmethod
    def full(cls, ambient: int, p: int) -> "Subspace":
        return cls(ambient, p, np.eye(ambient, dtype=np.int64), tuple(range(ambient)))

    @classmethod
    def coordinate(cls, indices: Iterable[int], ambient: int, p: int) -> "Subspace":
        idx = sorted(set(indices))
        b = np.zeros((len(idx), ambient), dtype=np.int64)
        for r, i in enumerate(idx):
            b[r, i] = 1
        return cls(ambient, p, b, tuple(idx))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient == other.ambient and self.p == other.p
                and self.pivots == other.pivots and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.ambient, self.p, self.pivots, self.basis.tobytes()))

    def reduce(self, v) -> np.ndarray:
        """Canonical representative of v modulo this subspace (pivot entries cleared)."""
        v = np.array(v, dtype=np.int64, copy=True)
        if self.ambient == 0:
            return v.reshape(v.shape[0] if v.ndim == 2 else 1, 0)
        v = v.reshape(-1, self.ambient) % self.p
        for row, c in zip(self.basis, self.pivots):
            f = v[:, c].copy()
            nz = f != 0
            if nz.any():
                v[nz] = (v[nz] - np.outer(f[nz], row)) % self.p
        return v

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def contains_space(self, other: "Subspace") -> bool:
        return other.dim == 0 or self.contains(other.basis)

    def coordinates(self, v) -> np.ndarray:
        """Coordinates of vectors (rows of v) in the RREF basis; raises if not contained."""
        v = np.asarray(v, dtype=np.int64)
        v = (v.reshape(v.shape[0] if v.ndim == 2 else 1, 0) if self.ambient == 0
             else v.reshape(-1, self.ambient) % self.p)
        if not self.contains(v):
            raise NotASubspace("vector not in subspace")
        return v[:, list(self.pivots)] if self.pivots else np.zeros((v.shape[0], 0), dtype=np.int64)

    def __add__(self, other: "Subspace") -> "Subspace":
        _check_compatible(self, other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return Subspace.span(np.vstack([self.basis, other.basis]), self.ambient, self.p)

    def intersect(self, other: "Subspace") -> "Subspace":
        _check_compatible(self, other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient, self.p)
        # solve a*S = b*O via the kernel of [S; -O]^T
        stacked = np.vstack([self.basis, (-other.basis) % self.p])
        k = dense_kernel(stacked.T, self.p)
        if k.dim == 0:
            return Subspace.zero(self.ambient, self.p)
        coeffs = k.basis[:, : self.dim]
        return Subspace.span((coeffs @ self.basis) % self.p, self.ambient, self.p)

    def image_under(self, m: np.ndarray) -> "Subspace":
        """Image of this subspace under the linear map with matrix m (target x source)."""
        m = np.asarray(m, dtype=np.int64)
        if self.dim == 0:
            return Subspace.zero(m.shape[0], self.p)
        return Subspace.span(matmul_mod(self.basis, m.T, self.p), m.shape[0], self.p)

    def complement_basis(self, sub: "Subspace") -> np.ndarray:
        """Canonical lifts of a basis of self/sub: reduced vectors of self's basis mod sub, re-echelonized."""
        if not self.contains_space(sub):
            raise NotASubspace("complement_basis: sub is not contained in self")
        if self.dim == 0:
            return np.zeros((0, self.ambient), dtype=np.int64)
        red = sub.reduce(self.basis)
        r, piv = rref(red, self.p) if red.any() else (np.zeros((0, self.ambient), dtype=np.int64), [])
        return r


def _check_compatible(a: Subspace, b: Subspace):
    if a.ambient != b.ambient or a.p != b.p:
        raise ValueError("subspaces live in different ambient spaces")


def dense_kernel(a, p: int) -> Subspace:
    """Null space {v : a v = 0} of a dense matrix, as a canonical Subspace."""
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    if rows == 0 or not (a % p).any():
        return Subspace.full(cols, p)
    r, piv = rref(a, p)
    pset = set(piv)
    free = [c for c in range(cols) if c not in pset]
    vecs = np.zeros((len(free), cols), dtype=np.int64)
    if free:
        vecs[np.arange(len(free)), free] = 1
        if piv:
            vecs[:, piv] = (-r[:, free].T) % p
    # free-variable vectors are already in RREF up to column order; span() canonicalizes
    return Subspace.span(vecs, cols, p)


def kernel(m: SparseMatrix) -> Subspace:
    """Canonical echelon basis of the kernel; dim = cols - rank."""
    return dense_kernel(m.to_dense(), m.p)


def image(m: SparseMatrix) -> Subspace:
    """Column space of m."""
    return Subspace.span(m.to_dense().T, m.rows, m.p)


def quotient_dim(sub: Subspace, sup: Subspace) -> int:
    """dim(sup / sub); raises NotASubspace when sub is not contained in sup."""
    _check_compatible(sub, sup)
    if not sup.contains_space(sub):
        raise NotASubspace("quotient_dim: sub is not contained in sup")
    return sup.dim - sub.dim
