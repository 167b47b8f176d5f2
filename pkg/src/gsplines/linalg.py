"""Exact rational linear algebra: row reduction, rank and kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence


class DimensionMismatch(ValueError):
    pass


@dataclass
class RationalMatrix:
    """Dense matrix of ``Fraction`` entries with optional row/column labels."""

    rows: list[list[Fraction]]
    ncols: int
    row_labels: list[Hashable] = field(default_factory=list)
    col_labels: list[Hashable] = field(default_factory=list)

    def __post_init__(self):
        self.rows = [[Fraction(x) for x in row] for row in self.rows]
        for row in self.rows:
            if len(row) != self.ncols:
                raise DimensionMismatch(f"row of length {len(row)} in a matrix with {self.ncols} columns")
        if self.row_labels and len(self.row_labels) != len(self.rows):
            raise DimensionMismatch("row label count differs from row count")
        if self.col_labels and len(self.col_labels) != self.ncols:
            raise DimensionMismatch("column label count differs from column count")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> RationalMatrix:
        return cls([[Fraction(0)] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def from_sparse(cls, entries: dict[tuple[int, int], Fraction], nrows: int, ncols: int,
                    row_labels=None, col_labels=None) -> RationalMatrix:
        rows = [[Fraction(0)] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            rows[i][j] = Fraction(v)
        return cls(rows, ncols, list(row_labels or []), list(col_labels or []))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> RationalMatrix:
        cols = [[row[j] for row in self.rows] for j in range(self.ncols)]
        return RationalMatrix(cols, self.nrows, list(self.col_labels), list(self.row_labels))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        out = []
        for row in self.rows:
            nz = [(k, a) for k, a in enumerate(row) if a]
            out.append([sum((a * col[k] for k, a in nz), Fraction(0)) for col in cols])
        return RationalMatrix(out, other.ncols)

    def apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        if len(vec) != self.ncols:
            raise DimensionMismatch("vector length differs from column count")
        return [sum((a * b for a, b in zip(row, vec) if a and b), Fraction(0)) for row in self.rows]

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        return [{j: x for j, x in enumerate(row) if x} for row in self.rows]


def _integer_row(row: dict[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    out = {j: int(v * den) for j, v in row.items()}
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        row = {j: v // g for j, v in row.items()}
    return row


def _echelon(rows: Iterable[dict[int, Fraction]], ncols: int, reduce_above: bool = True):
    """Fraction-free Gauss-Jordan on sparse integer rows.

    Returns (pivot rows, pivot columns), pivots increasing.
    """
    work = [_integer_row(r) for r in rows if r]
    pivots: dict[int, dict[int, int]] = {}
    for row in work:
        row = dict(row)
        # eliminate against existing pivots, always on the smallest column first
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                break
            a = row[col]
            p = piv[col]
            g = math.gcd(a, p)
            ma, mp = p // g, a // g
            new = {j: v * ma for j, v in row.items()}
            for j, v in piv.items():
                x = new.get(j, 0) - v * mp
                if x:
                    new[j] = x
                else:
                    new.pop(j, None)
            row = _primitive(new)
        if not row:
            continue
        col = min(row)
        if row[col] < 0:
            row = {j: -v for j, v in row.items()}
        pivots[col] = row
    cols = sorted(pivots)
    if reduce_above:
        for idx in range(len(cols) - 1, -1, -1):
            c = cols[idx]
            piv = pivots[c]
            for c2 in cols[:idx]:
                other = pivots[c2]
                a = other.get(c)
                if not a:
                    continue
                p = piv[c]
                g = math.gcd(a, p)
                ma, mp = p // g, a // g
                new = {j: v * ma for j, v in other.items()}
                for j, v in piv.items():
                    x = new.get(j, 0) - v * mp
                    if x:
                        new[j] = x
                    else:
                        new.pop(j, None)
                new = _primitive(new)
                if new[min(new)] < 0:
                    new = {j: -v for j, v in new.items()}
                pivots[c2] = new
    return [pivots[c] for c in cols], cols


def rref(m: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    prows, cols = _echelon(m.sparse_rows(), m.ncols)
    out = []
    for row, c in zip(prows, cols):
        p = row[c]
        dense = [Fraction(0)] * m.ncols
        for j, v in row.items():
            dense[j] = Fraction(v, p)
        out.append(dense)
    while len(out) < m.nrows:
        out.append([Fraction(0)] * m.ncols)
    return RationalMatrix(out, m.ncols, [], list(m.col_labels)), cols


def rank(m: RationalMatrix | Sequence[dict[int, Fraction]], ncols: int | None = None) -> int:
    if isinstance(m, RationalMatrix):
        rows, ncols = m.sparse_rows(), m.ncols
    else:
        rows = list(m)
    prows, _ = _echelon(rows, ncols or 0, reduce_above=False)
    return len(prows)


def normalize_integer(vec: Sequence[Fraction]) -> list[int]:
    """Scale to integers with content 1 and first nonzero entry positive."""
    sparse = {j: Fraction(v) for j, v in enumerate(vec) if v}
    if not sparse:
        return [0] * len(vec)
    ints = _integer_row(sparse)
    if ints[min(ints)] < 0:
        ints = {j: -v for j, v in ints.items()}
    return [ints.get(j, 0) for j in range(len(vec))]


def kernel_basis(m: RationalMatrix) -> list[list[int]]:
    """Right kernel; one vector per free column, integer-normalized."""
    prows, cols = _echelon(m.sparse_rows(), m.ncols)
    pivset = set(cols)
    out = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        vec = [Fraction(0)] * m.ncols
        vec[free] = Fraction(1)
        for row, c in zip(prows, cols):
            v = row.get(free)
            if v:
                vec[c] = Fraction(-v, row[c])
        out.append(normalize_integer(vec))
    return out


def row_space_basis(vectors: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Reduced row echelon basis of the span, integer-normalized rows."""
    ncols = len(vectors[0]) if vectors else 0
    prows, _ = _echelon([{j: Fraction(v) for j, v in enumerate(vec) if v} for vec in vectors], ncols)
    return [[Fraction(row.get(j, 0)) for j in range(ncols)] for row in prows]


class IncrementalSpan:
    """Greedy selection of independent vectors with coordinate recovery.

    ``add`` keeps a vector only if it is independent of those kept so far;
    ``coordinates`` expresses a vector of the span in terms of the kept ones.
    """

    def __init__(self):
        # echelon rows as (sparse Fraction row, sparse combination of kept vectors)
        self._rows: dict[int, tuple[dict[int, Fraction], dict[int, Fraction]]] = {}
        self.kept = 0

    def _reduce(self, vec: dict[int, Fraction], combo: dict[int, Fraction]):
        vec = dict(vec)
        combo = dict(combo)
        while vec:
            done = True
            for col in sorted(vec):
                hit = self._rows.get(col)
                if hit is None:
                    continue
                prow, pcombo = hit
                f = vec[col]
                for j, v in prow.items():
                    x = vec.get(j, 0) - f * v
                    if x:
                        vec[j] = x
                    else:
                        vec.pop(j, None)
                for j, v in pcombo.items():
                    x = combo.get(j, 0) - f * v
                    if x:
                        combo[j] = x
                    else:
                        combo.pop(j, None)
                done = False
                break
            if done:
                break
        return vec, combo

    def add(self, vec: dict[int, Fraction]) -> bool:
        vec, combo = self._reduce(vec, {self.kept: Fraction(1)})
        if not vec:
            return False
        col = min(vec)
        p = vec[col]
        vec = {j: v / p for j, v in vec.items()}
        combo = {j: v / p for j, v in combo.items()}
        self._rows[col] = (vec, combo)
        self.kept += 1
        return True

    def coordinates(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        rest, combo = self._reduce(vec, {})
        if rest:
            raise DimensionMismatch("vector is not in the span")
        return {j: -v for j, v in combo.items() if v}


def solve(m: RationalMatrix, rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """One exact solution of ``m x = rhs`` (free variables zero), or None."""
    aug = RationalMatrix([row + [Fraction(b)] for row, b in zip(m.rows, rhs)], m.ncols + 1)
    red, cols = rref(aug)
    if m.ncols in cols:
        return None
    x = [Fraction(0)] * m.ncols
    for row, c in zip(red.rows, cols):
        x[c] = row[m.ncols]
    return x
