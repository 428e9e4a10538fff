"""Exact rational vectors, matrices, and elimination kernels.

Everything runs over Python's arbitrary-precision ``Fraction``, so scalars
are always in lowest terms with a positive denominator and equality is
structural. Indices are 0-based throughout this module; 1-based indices
appear only in file formats and human-facing reports.

Conventions fixed here and relied on everywhere else:

* ``nullspace`` returns the reduced-echelon basis obtained by setting each
  free variable to 1 in increasing column order, the others to 0.
* ``solve`` returns the particular solution with all free variables 0.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence


def as_fraction(value) -> Fraction:
    """Coerce an int, a string like ``-3/2``, or a Fraction to Fraction."""
    return value if isinstance(value, Fraction) else Fraction(value)


class QVector:
    """Immutable vector of exact rationals."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable):
        object.__setattr__(self, "entries", tuple(as_fraction(e) for e in entries))

    @classmethod
    def zero(cls, dim: int) -> "QVector":
        return cls([0] * dim)

    @classmethod
    def unit(cls, dim: int, index: int) -> "QVector":
        if not 0 <= index < dim:
            raise ValueError(f"unit index {index} out of range for dim {dim}")
        return cls([1 if i == index else 0 for i in range(dim)])

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, QVector) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __setattr__(self, name, value):
        raise AttributeError("QVector is immutable")

    def __add__(self, other: "QVector") -> "QVector":
        self._check_dim(other)
        return QVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "QVector") -> "QVector":
        self._check_dim(other)
        return QVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "QVector":
        return QVector(-a for a in self.entries)

    def scale(self, c) -> "QVector":
        c = as_fraction(c)
        return QVector(c * a for a in self.entries)

    def __rmul__(self, c) -> "QVector":
        return self.scale(c)

    def dot(self, other: "QVector") -> Fraction:
        self._check_dim(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def _check_dim(self, other: "QVector"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __repr__(self):
        return "QVector([" + ", ".join(str(a) for a in self.entries) + "])"


class QMatrix:
    """Immutable row-major matrix of exact rationals.

    Zero-row or zero-column shapes are tolerated for internal stacking;
    the file formats only ever carry positive dimensions.
    """

    __slots__ = ("entries", "cols")

    def __init__(self, rows: Iterable[Iterable], cols: Optional[int] = None):
        grid = tuple(tuple(as_fraction(e) for e in row) for row in rows)
        if grid:
            width = len(grid[0])
            if any(len(r) != width for r in grid):
                raise ValueError("rows have unequal lengths")
            if cols is not None and cols != width:
                raise ValueError(f"declared cols {cols} does not match row length {width}")
            cols = width
        elif cols is None:
            raise ValueError("empty matrix needs an explicit column count")
        object.__setattr__(self, "entries", grid)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "QMatrix":
        cols = [tuple(as_fraction(e) for e in c) for c in columns]
        if not cols:
            raise ValueError("need at least one column")
        return cls([[c[i] for c in cols] for i in range(len(cols[0]))])

    @classmethod
    def from_flat(cls, flat: Sequence, rows: int, cols: int) -> "QMatrix":
        flat = list(flat)
        if len(flat) != rows * cols:
            raise ValueError("flat entry count does not match shape")
        return cls([flat[r * cols : (r + 1) * cols] for r in range(rows)], cols=cols)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def row(self, i: int) -> QVector:
        return QVector(self.entries[i])

    def col(self, j: int) -> QVector:
        return QVector(r[j] for r in self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_shape(other)
        return QMatrix(
            (a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)
        )

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._check_shape(other)
        return QMatrix(
            (a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)
        )

    def __neg__(self) -> "QMatrix":
        return QMatrix((-a for a in r) for r in self.entries)

    def scale(self, c) -> "QMatrix":
        c = as_fraction(c)
        return QMatrix((c * a for a in r) for r in self.entries)

    def __rmul__(self, c) -> "QMatrix":
        return self.scale(c)

    def __matmul__(self, other):
        if isinstance(other, QVector):
            if other.dim != self.cols:
                raise ValueError(f"dimension mismatch: {self.shape} @ vector of dim {other.dim}")
            return QVector(
                sum((a * x for a, x in zip(r, other.entries)), Fraction(0)) for r in self.entries
            )
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise ValueError(f"dimension mismatch: {self.shape} @ {other.shape}")
            cols = other.transpose().entries
            return QMatrix(
                [
                    [sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols]
                    for r in self.entries
                ],
                cols=other.cols,
            )
        return NotImplemented

    def transpose(self) -> "QMatrix":
        return QMatrix(
            ([r[j] for r in self.entries] for j in range(self.cols)), cols=self.rows
        )

    def flatten(self) -> tuple:
        """Row-major tuple of all entries."""
        return tuple(e for r in self.entries for e in r)

    def is_zero(self) -> bool:
        return all(e == 0 for r in self.entries for e in r)

    def _check_shape(self, other: "QMatrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __repr__(self):
        body = "; ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.entries)
        return f"QMatrix({self.rows}x{self.cols}: {body})"


def _rref_rows(rows: list, ncols: int) -> tuple:
    """In-place reduced row echelon form on a list of row lists.

    Returns (reduced rows, pivot column tuple).
    """
    pivots = []
    pivot_row = 0
    nrows = len(rows)
    for col in range(ncols):
        pivot = None
        for r in range(pivot_row, nrows):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        lead = rows[pivot_row][col]
        if lead != 1:
            inv = 1 / lead
            rows[pivot_row] = [inv * e for e in rows[pivot_row]]
        for r in range(nrows):
            if r == pivot_row:
                continue
            factor = rows[r][col]
            if factor == 0:
                continue
            prow = rows[pivot_row]
            rows[r] = [e - factor * p for e, p in zip(rows[r], prow)]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == nrows:
            break
    return rows, tuple(pivots)


def rref(m: QMatrix) -> tuple:
    """Reduced row echelon form. Returns (QMatrix, pivot columns)."""
    rows = [list(r) for r in m.entries]
    rows, pivots = _rref_rows(rows, m.cols)
    return QMatrix(rows, cols=m.cols), pivots


def rank(m: QMatrix) -> int:
    return len(rref(m)[1])


def rank_of_rows(rows: Iterable[Sequence], ncols: int) -> int:
    """Rank of a set of raw coefficient rows (deduplicated, zeros dropped)."""
    distinct = _prepare_rows(rows)
    if not distinct:
        return 0
    return len(_rref_rows(distinct, ncols)[1])


def _prepare_rows(rows: Iterable[Sequence]) -> list:
    seen = set()
    out = []
    for row in rows:
        key = tuple(row)
        if key in seen or all(e == 0 for e in key):
            continue
        seen.add(key)
        out.append(list(key))
    return out


def nullspace_of_rows(rows: Iterable[Sequence], ncols: int) -> list:
    """Canonical kernel basis of a stack of coefficient rows.

    Free variables are set to 1 one at a time in increasing column order,
    so the output is deterministic. Returns a list of entry tuples.
    """
    reduced = _prepare_rows(rows)
    reduced, pivots = _rref_rows(reduced, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -reduced[r][free]
        basis.append(tuple(vec))
    return basis


def nullspace(m: QMatrix) -> list:
    """Canonical basis of the right kernel {v : m v = 0} as QVectors."""
    return [QVector(v) for v in nullspace_of_rows(m.entries, m.cols)]


def solve(m: QMatrix, b: QVector) -> Optional[QVector]:
    """One exact solution of m x = b, or None when inconsistent.

    The particular solution sets all free variables to 0.
    """
    if b.dim != m.rows:
        raise ValueError(f"dimension mismatch: matrix has {m.rows} rows, vector has dim {b.dim}")
    rows = [list(r) + [bv] for r, bv in zip(m.entries, b.entries)]
    rows, pivots = _rref_rows(rows, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for r, p in enumerate(pivots):
        x[p] = rows[r][m.cols]
    return QVector(x)


def invert(m: QMatrix) -> Optional[QMatrix]:
    """Exact inverse, or None when singular. Raises on non-square input."""
    n = m.rows
    if n != m.cols:
        raise ValueError(f"cannot invert a {m.rows}x{m.cols} matrix")
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(m.entries)]
    aug = [[as_fraction(e) for e in row] for row in aug]
    aug, pivots = _rref_rows(aug, 2 * n)
    if tuple(pivots[:n]) != tuple(range(n)) or len(pivots) != n:
        return None
    return QMatrix((row[n:] for row in aug), cols=n)
