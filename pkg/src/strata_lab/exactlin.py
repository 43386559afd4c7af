"""Exact sparse linear algebra over the rationals.

Matrices are sparse maps ``(row, col) -> Fraction``.  Every decomposition goes
through the fraction-free Gauss-Jordan kernel in :mod:`strata_lab.kernels`
after clearing denominators row by row, so nothing here ever rounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .kernels import ff_gauss_jordan


class ComplexError(ValueError):
    """A sequence of maps that is not a cochain complex."""

    def __init__(self, degree: int, message: str | None = None):
        self.degree = degree
        super().__init__(message or f"d^{degree + 1} o d^{degree} != 0")


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, eq=False)
class RationalMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            v = _frac(v)
            if v:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    # construction -------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = v
        return cls(len(rows), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RationalMatrix":
        entries = {}
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length mismatch")
            for i, v in enumerate(col):
                if v:
                    entries[(i, j)] = v
        return cls(rows, len(columns), entries)

    # views ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def to_rows(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> list[Fraction]:
        col = [Fraction(0)] * self.rows
        for (i, jj), v in self.entries.items():
            if jj == j:
                col[i] = v
        return col

    def columns(self) -> list[list[Fraction]]:
        cols = [[Fraction(0)] * self.rows for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    __hash__ = None

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    # arithmetic -----------------------------------------------------------

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def transpose(self) -> "RationalMatrix":
        return self.T

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (j, k), v in other.entries.items():
            by_row.setdefault(j, []).append((k, v))
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, j), a in self.entries.items():
            for k, b in by_row.get(j, ()):
                acc[(i, k)] = acc.get((i, k), 0) + a * b
        return RationalMatrix(self.rows, other.cols, acc)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        acc = dict(self.entries)
        for k, v in other.entries.items():
            acc[k] = acc.get(k, 0) + v
        return RationalMatrix(self.rows, self.cols, acc)

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + (-other)

    def scale(self, c) -> "RationalMatrix":
        c = _frac(c)
        return RationalMatrix(self.rows, self.cols, {k: c * v for k, v in self.entries.items()})

    def apply(self, vec: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            if vec[j]:
                out[i] += v * vec[j]
        return out

    def select_columns(self, cols: Sequence[int]) -> "RationalMatrix":
        where = {c: k for k, c in enumerate(cols)}
        return RationalMatrix(
            self.rows,
            len(cols),
            {(i, where[j]): v for (i, j), v in self.entries.items() if j in where},
        )

    def select_rows(self, rows: Sequence[int]) -> "RationalMatrix":
        where = {r: k for k, r in enumerate(rows)}
        return RationalMatrix(
            len(rows),
            self.cols,
            {(where[i], j): v for (i, j), v in self.entries.items() if i in where},
        )


def hstack(mats: Sequence[RationalMatrix], rows: int | None = None) -> RationalMatrix:
    if rows is None:
        rows = mats[0].rows if mats else 0
    entries = {}
    off = 0
    for m in mats:
        if m.rows != rows:
            raise ValueError("hstack row mismatch")
        for (i, j), v in m.entries.items():
            entries[(i, j + off)] = v
        off += m.cols
    return RationalMatrix(rows, off, entries)


def vstack(mats: Sequence[RationalMatrix], cols: int | None = None) -> RationalMatrix:
    if cols is None:
        cols = mats[0].cols if mats else 0
    entries = {}
    off = 0
    for m in mats:
        if m.cols != cols:
            raise ValueError("vstack column mismatch")
        for (i, j), v in m.entries.items():
            entries[(i + off, j)] = v
        off += m.rows
    return RationalMatrix(off, cols, entries)


def block_matrix(blocks: Mapping[tuple[int, int], RationalMatrix],
                 row_sizes: Sequence[int], col_sizes: Sequence[int]) -> RationalMatrix:
    """Assemble a matrix from a sparse grid of blocks."""
    row_off = np.concatenate([[0], np.cumsum(row_sizes)]).astype(int)
    col_off = np.concatenate([[0], np.cumsum(col_sizes)]).astype(int)
    entries: dict[tuple[int, int], Fraction] = {}
    for (bi, bj), m in blocks.items():
        if m.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block ({bi}, {bj}) has shape {m.shape}")
        ro, co = int(row_off[bi]), int(col_off[bj])
        for (i, j), v in m.entries.items():
            key = (i + ro, j + co)
            entries[key] = entries.get(key, 0) + v
    return RationalMatrix(int(row_off[-1]), int(col_off[-1]), entries)


# elimination ---------------------------------------------------------------

def _integer_rows(m: RationalMatrix) -> np.ndarray:
    """Dense object array with each row scaled to integers (row space unchanged)."""
    a = np.zeros((m.rows, m.cols), dtype=object)
    a[:] = 0
    dens = [1] * m.rows
    for (i, _), v in m.entries.items():
        dens[i] = math.lcm(dens[i], v.denominator)
    for (i, j), v in m.entries.items():
        a[i, j] = v.numerator * (dens[i] // v.denominator)
    return a


def rref(m: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return RationalMatrix.zeros(0, m.cols), ()
    reduced, rank, pivots, den = ff_gauss_jordan(_integer_rows(m))
    entries = {}
    for i in range(rank):
        row = reduced[i]
        for j in np.flatnonzero(row != 0):
            entries[(i, int(j))] = Fraction(int(row[j]), den)
    return RationalMatrix(rank, m.cols, entries), tuple(int(p) for p in pivots)


def rank(m: RationalMatrix) -> int:
    if m.is_zero():
        return 0
    # eliminate along the short side
    src = m if m.rows <= m.cols else m.T
    _, r, _, _ = ff_gauss_jordan(_integer_rows(src))
    return r


def kernel_basis(m: RationalMatrix) -> RationalMatrix:
    """Columns spanning ``ker m``; one column per free variable, in order."""
    r, pivots = rref(m)
    pivset = set(pivots)
    free = [j for j in range(m.cols) if j not in pivset]
    row_of = {p: i for i, p in enumerate(pivots)}
    entries = {}
    by_row_col = r.entries
    for k, f in enumerate(free):
        entries[(f, k)] = Fraction(1)
        for p, i in row_of.items():
            v = by_row_col.get((i, f))
            if v:
                entries[(p, k)] = -v
    return RationalMatrix(m.cols, len(free), entries)


def image_basis(m: RationalMatrix) -> RationalMatrix:
    """Columns spanning ``im m``, in column-echelon canonical form."""
    r, _ = rref(m.T)
    return r.T


def quotient_basis(dim: int, spanning: RationalMatrix) -> RationalMatrix:
    """Standard basis vectors completing ``span(spanning)`` to ``Q^dim``.

    Their classes form a basis of the quotient ``Q^dim / span(spanning)``.
    """
    if spanning.rows != dim:
        raise ValueError("spanning set lives in the wrong space")
    _, pivots = rref(spanning.T)
    pivset = set(pivots)
    reps = [i for i in range(dim) if i not in pivset]
    return RationalMatrix(dim, len(reps), {(i, k): Fraction(1) for k, i in enumerate(reps)})


def left_annihilator(basis: RationalMatrix) -> RationalMatrix:
    """Rows whose common kernel is exactly ``span(basis)``."""
    return kernel_basis(basis.T).T


def solve_in_basis(basis: RationalMatrix, targets: RationalMatrix) -> RationalMatrix:
    """Coordinates ``X`` with ``basis @ X == targets``.

    ``basis`` must have independent columns.  Raises ``ValueError`` if some
    target column leaves the span.
    """
    k = basis.cols
    if targets.cols == 0:
        return RationalMatrix.zeros(k, 0)
    r, pivots = rref(hstack([basis, targets], rows=basis.rows))
    if pivots[:k] != tuple(range(k)):
        raise ValueError("basis columns are dependent")
    if len(pivots) > k:
        raise ValueError(f"target column {pivots[k] - k} is not in the span")
    return RationalMatrix(
        k, targets.cols, {(i, j - k): v for (i, j), v in r.entries.items() if j >= k and i < k}
    )


def intersect(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Basis of ``span(a) ∩ span(b)``."""
    if a.cols == 0 or b.cols == 0:
        return RationalMatrix.zeros(a.rows, 0)
    ker = kernel_basis(hstack([a, -b], rows=a.rows))
    return image_basis(a @ ker.select_rows(range(a.cols)))


def span_sum(*mats: RationalMatrix) -> RationalMatrix:
    rows = mats[0].rows
    return image_basis(hstack(list(mats), rows=rows))


# complexes -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ComplexOfSpaces:
    """Bounded cochain complex ``C^start -> ... -> C^(start + len(dims) - 1)``.

    ``differentials[k]`` is the map out of degree ``start + k``.
    """

    start: int
    dims: tuple[int, ...]
    differentials: tuple[RationalMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if len(self.differentials) != max(len(self.dims) - 1, 0):
            raise ValueError("need exactly one differential between consecutive terms")
        for k, d in enumerate(self.differentials):
            if d.shape != (self.dims[k + 1], self.dims[k]):
                raise ValueError(
                    f"d^{self.start + k} has shape {d.shape}, expected "
                    f"{(self.dims[k + 1], self.dims[k])}"
                )

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.dims))

    @property
    def end(self) -> int:
        return self.start + len(self.dims) - 1

    def dim(self, n: int) -> int:
        k = n - self.start
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def d(self, n: int) -> RationalMatrix:
        """The differential ``C^n -> C^(n+1)`` (zero outside the support)."""
        k = n - self.start
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return RationalMatrix.zeros(self.dim(n + 1), self.dim(n))

    def check(self) -> None:
        for n in self.degrees:
            if not (self.d(n + 1) @ self.d(n)).is_zero():
                raise ComplexError(n)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.dim(n) for n in self.degrees)


def cohomology_dims(c: ComplexOfSpaces, *, check: bool = True) -> dict[int, int]:
    """``dim ker d^n - rank d^(n-1)`` for every degree of ``c``."""
    if check:
        c.check()
    ranks = {n: rank(c.d(n)) for n in range(c.start - 1, c.end + 1)}
    return {n: c.dim(n) - ranks[n] - ranks[n - 1] for n in c.degrees}


def euler_of_dims(dims: Mapping[int, int]) -> int:
    return sum((-1) ** n * v for n, v in dims.items())


def as_matrix(rows: Iterable[Iterable]) -> RationalMatrix:
    """Shorthand used by tests and examples."""
    return RationalMatrix.from_rows([list(r) for r in rows])
