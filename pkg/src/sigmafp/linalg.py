"""Exact rational linear algebra: vectors, matrices, RREF, kernels, subspaces.

Every coordinate is a `fractions.Fraction`, so ranks, kernels, and equality
tests are exact.  A subspace is always stored through its reduced row-echelon
basis, which makes the representation canonical: two subspaces are equal iff
their stored bases are entry-wise equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def vector(entries: Iterable) -> Vector:
    return tuple(Fraction(e) for e in entries)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Fraction, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def vec_neg(v: Vector) -> Vector:
    return tuple(-a for a in v)


def vec_dot(u: Vector, v: Vector) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), ZERO)


def is_zero_vector(v: Vector) -> bool:
    return all(a == 0 for a in v)


def linf_norm(v: Vector) -> Fraction:
    return max((abs(a) for a in v), default=ZERO)


@dataclass(frozen=True)
class Matrix:
    """Dense rational matrix, row-major, immutable."""

    rows: int
    cols: int
    entries: tuple[Vector, ...]

    @staticmethod
    def from_rows(rows: Sequence[Iterable], cols: int | None = None) -> "Matrix":
        data = tuple(vector(r) for r in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged rows")
            if cols is not None and cols != width:
                raise ValueError(f"expected {cols} columns, got {width}")
            cols = width
        elif cols is None:
            raise ValueError("column count required for an empty matrix")
        return Matrix(len(data), cols, data)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(
            n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))
        )

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)))

    def stack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in stack")
        return Matrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def mul_vec(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(vec_dot(r, v) for r in self.entries)

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols = [other.column(j) for j in range(other.cols)]
        data = tuple(tuple(vec_dot(r, c) for c in cols) for r in self.entries)
        return Matrix(self.rows, other.cols, data)


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row-echelon form with zero rows removed, plus pivot columns.

    Idempotent: rref(rref(m)) == rref(m).
    """
    work = [list(r) for r in m.entries]
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if work[i][c] != 0), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = 1 / work[r][c]
        work[r] = [inv * a for a in work[r]]
        for i in range(nrows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    reduced = tuple(tuple(row) for row in work[:r])
    return Matrix(r, ncols, reduced), tuple(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[0].rows


def det(m: Matrix) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    work = [list(r) for r in m.entries]
    result = ONE
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if work[i][c] != 0), None)
        if pivot_row is None:
            return ZERO
        if pivot_row != c:
            work[c], work[pivot_row] = work[pivot_row], work[c]
            result = -result
        result *= work[c][c]
        inv = 1 / work[c][c]
        for i in range(c + 1, n):
            if work[i][c] != 0:
                f = work[i][c] * inv
                work[i] = [a - f * b for a, b in zip(work[i], work[c])]
    return result


def minor_det(m: Matrix, drop_row: int, drop_col: int) -> Fraction:
    sub = tuple(
        tuple(v for j, v in enumerate(r) if j != drop_col)
        for i, r in enumerate(m.entries)
        if i != drop_row
    )
    return det(Matrix(m.rows - 1, m.cols - 1, sub))


def cofactor(m: Matrix, i: int, j: int) -> Fraction:
    sign = ONE if (i + j) % 2 == 0 else -ONE
    return sign * minor_det(m, i, j)


def inverse(m: Matrix) -> Matrix:
    """Exact inverse via Gauss-Jordan; raises ValueError on a singular input."""
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    work = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(m.entries)]
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if work[i][c] != 0), None)
        if pivot_row is None:
            raise ValueError("singular matrix")
        work[c], work[pivot_row] = work[pivot_row], work[c]
        inv = 1 / work[c][c]
        work[c] = [inv * a for a in work[c]]
        for i in range(n):
            if i != c and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[c])]
    return Matrix(n, n, tuple(tuple(row[n:]) for row in work))


def submatrix_columns(m: Matrix, columns: Sequence[int]) -> Matrix:
    data = tuple(tuple(r[c] for c in columns) for r in m.entries)
    return Matrix(m.rows, len(columns), data)


@dataclass(frozen=True)
class Subspace:
    """A rational subspace stored by its canonical RREF basis.

    The zero subspace keeps an explicit ambient dimension and an empty basis,
    avoiding 0xN matrix ambiguity.
    """

    ambient_dim: int
    basis: Matrix
    pivot_columns: tuple[int, ...]

    @staticmethod
    def span(vectors: Sequence[Iterable], ambient_dim: int | None = None) -> "Subspace":
        rows = [vector(v) for v in vectors]
        if rows:
            n = len(rows[0])
            if ambient_dim is not None and ambient_dim != n:
                raise ValueError("ambient dimension mismatch")
            ambient_dim = n
        elif ambient_dim is None:
            raise ValueError("ambient dimension required for an empty span")
        reduced, pivots = rref(Matrix.from_rows(rows, cols=ambient_dim))
        return Subspace(ambient_dim, reduced, pivots)

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix(0, ambient_dim, ()), ())

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix.identity(ambient_dim), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def contains(self, v: Vector) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        residue = list(v)
        for row, p in zip(self.basis.entries, self.pivot_columns):
            c = residue[p]
            if c != 0:
                residue = [a - c * b for a, b in zip(residue, row)]
        return all(a == 0 for a in residue)


def kernel_basis(m: Matrix) -> Subspace:
    """Right kernel {x : m x = 0} as a Subspace; dim = cols - rank."""
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    vectors = []
    for c in free_cols:
        v = [ZERO] * m.cols
        v[c] = ONE
        for r, p in enumerate(pivots):
            v[p] = -reduced.entries[r][c]
        vectors.append(v)
    return Subspace.span(vectors, ambient_dim=m.cols)


def constraint_rows(s: Subspace) -> Matrix:
    """A matrix K with null(K) = s: the linear equations cutting out s."""
    return kernel_basis(s.basis).basis if s.dim else Matrix.identity(s.ambient_dim)


def subspaces_intersect_trivially(u: Subspace, v: Subspace) -> bool:
    """True iff u and v meet only in 0, i.e. their sum is direct."""
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if u.dim == 0 or v.dim == 0:
        return True
    return rank(u.basis.stack(v.basis)) == u.dim + v.dim
