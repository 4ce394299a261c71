"""Exact rational matrices and the linear-algebra kernel.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  Matrices are immutable and stored densely; the
arithmetic is delegated to FLINT's ``fmpq_mat`` which keeps everything
exact while staying fast for the few-thousand-column matrices that tensor
powers produce.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from flint import fmpq, fmpq_mat

from .errors import InconsistentError, NotIdempotent, NotInvertible, SizeMismatch

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce an int, Fraction, fmpq or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_rational(x) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = as_rational(x)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _to_fmpq(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return fmpq(x)
    q = as_rational(x)
    return fmpq(q.numerator, q.denominator)


class Matrix:
    """Immutable dense matrix over Q."""

    __slots__ = ("_m",)

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        entries = list(entries)
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        if entries and len(entries) != rows * cols:
            raise SizeMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
        if entries:
            self._m = fmpq_mat(rows, cols, [_to_fmpq(e) for e in entries])
        else:
            self._m = fmpq_mat(rows, cols)

    @classmethod
    def _wrap(cls, m: fmpq_mat) -> "Matrix":
        obj = cls.__new__(cls)
        obj._m = m
        return obj

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise SizeMismatch("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._wrap(fmpq_mat(rows, cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = fmpq_mat(n, n)
        for i in range(n):
            m[i, i] = 1
        return cls._wrap(m)

    @classmethod
    def from_sparse(cls, rows: int, cols: int, data: Mapping[tuple[int, int], object]) -> "Matrix":
        m = fmpq_mat(rows, cols)
        for (i, j), v in data.items():
            if v:
                m[i, j] = _to_fmpq(v)
        return cls._wrap(m)

    @classmethod
    def scalar(cls, n: int, c) -> "Matrix":
        m = fmpq_mat(n, n)
        c = _to_fmpq(c)
        for i in range(n):
            m[i, i] = c
        return cls._wrap(m)

    @property
    def rows(self) -> int:
        return self._m.nrows()

    @property
    def cols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return self._m.nrows(), self._m.ncols()

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(as_rational(e) for e in self._m.entries())

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return as_rational(self._m[i, j])

    def tolist(self) -> list[list[Fraction]]:
        r, c = self.shape
        flat = self.entries
        return [list(flat[i * c:(i + 1) * c]) for i in range(r)]

    def nonzero(self) -> dict[tuple[int, int], Fraction]:
        """Sparse view: (row, col) -> nonzero entry."""
        return {ij: as_rational(e) for ij, e in self._raw_nonzero()}

    def _raw_nonzero(self):
        c = self.cols
        for k, e in enumerate(self._m.entries()):
            if e != 0:
                yield divmod(k, c), e

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, {[[format_rational(e) for e in r] for r in self.tolist()]})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._m == other._m

    def __hash__(self) -> int:
        return hash((self.shape, tuple(str(e) for e in self._m.entries())))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise SizeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0:
            return Matrix.zeros(self.rows, other.cols)
        return Matrix._wrap(self._m * other._m)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise SizeMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix._wrap(self._m + other._m)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise SizeMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix._wrap(self._m - other._m)

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(-self._m)

    def scale(self, c) -> "Matrix":
        c = _to_fmpq(c)
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix._wrap(self._m * c)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(self._m.transpose())

    def is_zero(self) -> bool:
        return self._m == fmpq_mat(self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return self._m.rank()

    def take_columns(self, idx: Sequence[int]) -> "Matrix":
        m = fmpq_mat(self.rows, len(idx))
        for new, old in enumerate(idx):
            for i in range(self.rows):
                m[i, new] = self._m[i, old]
        return Matrix._wrap(m)

    def take_rows(self, idx: Sequence[int]) -> "Matrix":
        m = fmpq_mat(len(idx), self.cols)
        for new, old in enumerate(idx):
            for j in range(self.cols):
                m[new, j] = self._m[old, j]
        return Matrix._wrap(m)

    def fmpq(self) -> fmpq_mat:
        """A mutable copy of the underlying FLINT matrix."""
        return fmpq_mat(self._m)


def hstack(blocks: Sequence[Matrix], rows: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(rows or 0, 0)
    r = blocks[0].rows
    if any(b.rows != r for b in blocks):
        raise SizeMismatch("hstack needs equal row counts")
    cols = sum(b.cols for b in blocks)
    m = fmpq_mat(r, cols)
    off = 0
    for b in blocks:
        for (i, j), v in b._raw_nonzero():
            m[i, off + j] = v
        off += b.cols
    return Matrix._wrap(m)


def vstack(blocks: Sequence[Matrix], cols: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(0, cols or 0)
    return hstack([b.T for b in blocks]).T


def block_matrix(grid: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a matrix from a rectangular grid of compatible blocks."""
    return vstack([hstack(row) for row in grid])


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    r = sum(b.rows for b in blocks)
    c = sum(b.cols for b in blocks)
    m = fmpq_mat(r, c)
    ro = co = 0
    for b in blocks:
        for (i, j), v in b._raw_nonzero():
            m[ro + i, co + j] = v
        ro += b.rows
        co += b.cols
    return Matrix._wrap(m)


def rref(M: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and the pivot columns.

    The reduced form is unique, so the pivot list is deterministic: a column
    is a pivot exactly when it is not in the span of the columns before it.
    """
    if M.rows == 0 or M.cols == 0:
        return M, []
    R, rank = M._m.rref()
    pivots = []
    row = 0
    for j in range(M.cols):
        if row < rank and R[row, j] != 0:
            pivots.append(j)
            row += 1
    return Matrix._wrap(R), pivots


def image_basis(M: Matrix) -> Matrix:
    """The pivot columns of M: a basis of the column space."""
    _, piv = rref(M)
    return M.take_columns(piv)


def kernel_basis(M: Matrix) -> Matrix:
    """Columns spanning ker M, one per free column of the reduced form."""
    R, piv = rref(M)
    n = M.cols
    free = [j for j in range(n) if j not in set(piv)]
    K = fmpq_mat(n, len(free))
    for k, fj in enumerate(free):
        K[fj, k] = 1
        for r, pj in enumerate(piv):
            K[pj, k] = -R._m[r, fj]
    return Matrix._wrap(K)


def solve(M: Matrix, b: Matrix) -> Matrix:
    """One exact solution X of M·X = b (free variables set to zero)."""
    if b.rows != M.rows:
        raise SizeMismatch(f"right-hand side has {b.rows} rows, matrix has {M.rows}")
    n = M.cols
    if b.cols == 0:
        return Matrix.zeros(n, 0)
    if M.rows == 0:
        return Matrix.zeros(n, b.cols)
    R, piv = rref(hstack([M, b]))
    if piv and piv[-1] >= n:
        raise InconsistentError("right-hand side is not in the column space")
    X = fmpq_mat(n, b.cols)
    for r, pj in enumerate(piv):
        for k in range(b.cols):
            X[pj, k] = R._m[r, n + k]
    return Matrix._wrap(X)


def inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise NotInvertible(f"non-square {M.shape} matrix")
    if M.rows == 0:
        return M
    if M.rank() != M.rows:
        raise NotInvertible("singular matrix")
    return Matrix._wrap(M._m.inv())


def complement_columns(B: Matrix) -> list[int]:
    """Indices of standard basis vectors completing the columns of B to a basis.

    B must have full column rank.
    """
    n = B.rows
    _, piv = rref(hstack([B, Matrix.identity(n)]))
    k = B.cols
    if piv[:k] != list(range(k)):
        raise ValueError("columns are linearly dependent")
    return [p - k for p in piv if p >= k]


@dataclass(frozen=True)
class SplitData:
    """A splitting of an idempotent P: P = inclusion·projection, projection·inclusion = 1."""

    inclusion: Matrix
    projection: Matrix

    @property
    def rank(self) -> int:
        return self.inclusion.cols


def split_idempotent(P: Matrix) -> SplitData:
    if not P.is_square():
        raise NotIdempotent(f"non-square {P.shape} matrix")
    if P @ P != P:
        raise NotIdempotent("P·P ≠ P")
    R, piv = rref(P)
    # column-row factorization: P = P[:, pivots] · R[:rank, :]
    inclusion = P.take_columns(piv)
    projection = R.take_rows(range(len(piv)))
    return SplitData(inclusion, projection)
