"""Exact integer linear algebra.

Everything here works over Z with Python integers.  The elimination loops
live in ``_backend`` (compiled int64 kernel with a big-int fallback); this
module wraps them in an immutable :class:`IntMatrix` and builds the
homological helpers on top: Smith normal form, kernels, images, integer
solving and (co)homology of complexes of finitely presented groups.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import _backend


class IntMatrix:
    """Immutable dense integer matrix; shape is explicit so 0 x n works."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]] = (), rows: Optional[int] = None,
                 cols: Optional[int] = None):
        data = tuple(tuple(operator.index(v) for v in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows and not (rows > 0 and cols == 0 and not data):
            raise ValueError(f"expected {rows} rows, got {len(data)}")
        if not data:
            data = tuple(() for _ in range(rows))
        for row in data:
            if len(row) != cols:
                raise ValueError(f"ragged matrix: row of length {len(row)}, expected {cols}")
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        if not columns:
            return cls.zeros(rows, 0)
        return cls(list(zip(*columns)) if rows else [], rows, len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self._data]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(list(zip(*self._data)) if self.rows else [], self.cols, self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if other.rows == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        cols = list(zip(*other._data))
        return IntMatrix([[sum(a * b for a, b in zip(row, col) if a) for col in cols]
                          for row in self._data], self.rows, other.cols)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for matrix with {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self._data)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                         self.rows, self.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self._data], self.rows, self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"

    def is_zero(self) -> bool:
        return not any(any(row) for row in self._data)

    def select_columns(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[row[j] for j in idx] for row in self._data], self.rows, len(idx))

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix([self._data[i] for i in idx], len(idx), self.cols)

    @staticmethod
    def hstack(*blocks: "IntMatrix") -> "IntMatrix":
        rows = blocks[0].rows
        if any(b.rows != rows for b in blocks):
            raise ValueError("hstack: row counts differ")
        data = [sum((b._data[i] for b in blocks), ()) for i in range(rows)]
        return IntMatrix(data, rows, sum(b.cols for b in blocks))

    @staticmethod
    def vstack(*blocks: "IntMatrix") -> "IntMatrix":
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ValueError("vstack: column counts differ")
        return IntMatrix(sum((b._data for b in blocks), ()), sum(b.rows for b in blocks), cols)


@dataclass(frozen=True)
class SnfResult:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^free_rank + Z/t1 + ... + Z/tk with t1 | t2 | ... and every ti >= 2."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(t < 2 for t in self.torsion):
            raise ValueError(f"torsion factors must be >= 2, got {self.torsion}")

    @classmethod
    def from_diagonal(cls, generators: int, diagonal: Sequence[int]) -> "FgAbelianGroup":
        """Z^generators modulo a diagonal relation matrix in Smith form."""
        nonzero = [abs(d) for d in diagonal if d]
        return cls(generators - len(nonzero), tuple(d for d in nonzero if d != 1))

    @classmethod
    def from_json(cls, obj: dict) -> "FgAbelianGroup":
        return cls(int(obj["free_rank"]), tuple(int(t) for t in obj.get("torsion", ())))

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) or "0"


ZERO_GROUP = FgAbelianGroup()


def as_matrix(A) -> IntMatrix:
    return A if isinstance(A, IntMatrix) else IntMatrix(A)


def snf(A) -> SnfResult:
    """Smith normal form: unimodular U, V with U*A*V = D diagonal, d1 | d2 | ..., all >= 0.

    Pivoting is deterministic (smallest absolute value, then row-major), so
    the same input always yields the same U, D, V.
    """
    A = as_matrix(A)
    U, D, V = _backend.snf(A.tolist(), A.rows, A.cols)
    return SnfResult(IntMatrix(U, A.rows, A.rows), IntMatrix(D, A.rows, A.cols),
                     IntMatrix(V, A.cols, A.cols))


class _Echelon:
    """Column reduction A*V = E with recorded pivot rows (see ``_kernels_py``)."""

    __slots__ = ("E", "V", "rank", "pivots", "rows", "cols")

    def __init__(self, A: IntMatrix):
        E, V, r, pivots = _backend.column_echelon(A.tolist(), A.rows, A.cols)
        self.E, self.V, self.rank, self.pivots = E, V, r, pivots
        self.rows, self.cols = A.rows, A.cols

    def solve(self, b: Sequence[int]) -> Optional[tuple[int, ...]]:
        E, r = self.E, self.rank
        y = []
        for k in range(r):
            row = E[self.pivots[k]]
            s = b[self.pivots[k]] - sum(row[l] * y[l] for l in range(k))
            q, rem = divmod(s, row[k])
            if rem:
                return None
            y.append(q)
        for i in range(self.rows):
            row = E[i]
            if sum(row[l] * y[l] for l in range(r)) != b[i]:
                return None
        return tuple(sum(row[l] * y[l] for l in range(r)) for row in self.V)


def rank(A) -> int:
    return _Echelon(as_matrix(A)).rank


def kernel_basis(A) -> IntMatrix:
    """Columns form a basis of {x in Z^cols : A x = 0}; the lattice is saturated."""
    A = as_matrix(A)
    ech = _Echelon(A)
    return IntMatrix([row[ech.rank:] for row in ech.V], A.cols, A.cols - ech.rank)


def image_basis(A) -> IntMatrix:
    """Columns form a basis of the lattice spanned by the columns of A."""
    A = as_matrix(A)
    ech = _Echelon(A)
    return IntMatrix([row[:ech.rank] for row in ech.E], A.rows, ech.rank)


def solve_linear(A, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """An integer x with A x = b, or None when no integer solution exists."""
    A = as_matrix(A)
    b = tuple(operator.index(v) for v in b)
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    return _Echelon(A).solve(b)


def solve_matrix(A, B) -> Optional[IntMatrix]:
    """Integer X with A X = B (column by column), or None if some column is unsolvable."""
    A, B = as_matrix(A), as_matrix(B)
    if A.rows != B.rows:
        raise ValueError(f"row mismatch: {A.shape} vs {B.shape}")
    if B.cols == 0:
        return IntMatrix.zeros(A.cols, 0)
    ech = _Echelon(A)
    cols = []
    for col in B.columns():
        x = ech.solve(col)
        if x is None:
            return None
        cols.append(x)
    return IntMatrix.from_columns(cols, A.cols)


def in_image(A, B) -> bool:
    """True when every column of B is an integer combination of columns of A."""
    A, B = as_matrix(A), as_matrix(B)
    if B.is_zero():
        return True
    return solve_matrix(A, B) is not None


def cokernel(A) -> FgAbelianGroup:
    """Z^rows / (column span of A)."""
    A = as_matrix(A)
    if A.cols == 0 or A.rows == 0:
        return FgAbelianGroup(A.rows)
    return FgAbelianGroup.from_diagonal(A.rows, snf(A).diagonal)


def lattice_quotient(sub, rel) -> FgAbelianGroup:
    """span(sub) / span(rel) for lattices span(rel) <= span(sub) in Z^N."""
    sub, rel = as_matrix(sub), as_matrix(rel)
    basis = image_basis(sub)
    coords = solve_matrix(basis, rel)
    if coords is None:
        raise ValueError("relation lattice is not contained in the subgroup lattice")
    return cokernel(coords)


def presented_homology(d_in, d_out, rel_mid=None, rel_out=None) -> FgAbelianGroup:
    """Homology at the middle of  P_in --d_in--> P_mid --d_out--> P_out.

    Each P is Z^k / span(rel).  Cycles are the x with d_out x in span(rel_out);
    boundaries are span(d_in) + span(rel_mid).
    """
    d_in, d_out = as_matrix(d_in), as_matrix(d_out)
    k = d_in.rows
    if d_out.cols != k:
        raise ValueError(f"non-composable differentials: {d_in.shape} then {d_out.shape}")
    rel_mid = IntMatrix.zeros(k, 0) if rel_mid is None else as_matrix(rel_mid)
    rel_out = IntMatrix.zeros(d_out.rows, 0) if rel_out is None else as_matrix(rel_out)
    if rel_mid.rows != k or rel_out.rows != d_out.rows:
        raise ValueError("relation matrices do not match the chain groups")
    K = kernel_basis(IntMatrix.hstack(d_out, -rel_out))
    cycles = K.select_rows(range(k))
    boundaries = IntMatrix.hstack(d_in, rel_mid)
    return lattice_quotient(cycles, boundaries)


def homology_at(d_in, d_out) -> FgAbelianGroup:
    """ker(d_out) / im(d_in) for free groups; d_in: C_{n+1} -> C_n, d_out: C_n -> C_{n-1}."""
    d_in, d_out = as_matrix(d_in), as_matrix(d_out)
    if d_out.cols != d_in.rows:
        raise ValueError(f"non-composable differentials: {d_in.shape} then {d_out.shape}")
    if not (d_out @ d_in).is_zero():
        raise ValueError("d_out * d_in is not zero")
    return presented_homology(d_in, d_out)


def chain_homology(boundaries: Sequence[IntMatrix], sizes: Sequence[int]) -> list[FgAbelianGroup]:
    """Homology of a free chain complex with ``sizes[n]`` generators in degree n.

    ``boundaries[n-1]`` is the map C_n -> C_{n-1}, shape (sizes[n-1], sizes[n]).
    """
    top = len(sizes) - 1
    out = []
    for n in range(top + 1):
        d_out = boundaries[n - 1] if n >= 1 else IntMatrix.zeros(0, sizes[0])
        d_in = boundaries[n] if n < top else IntMatrix.zeros(sizes[n], 0)
        out.append(homology_at(d_in, d_out))
    return out


def chain_cohomology(boundaries: Sequence[IntMatrix], sizes: Sequence[int]) -> list[FgAbelianGroup]:
    """Cohomology Hom(C_*, Z) of the same free chain complex."""
    top = len(sizes) - 1
    out = []
    for n in range(top + 1):
        d_in = boundaries[n - 1].T if n >= 1 else IntMatrix.zeros(sizes[0], 0)
        d_out = boundaries[n].T if n < top else IntMatrix.zeros(0, sizes[n])
        out.append(homology_at(d_in, d_out))
    return out
