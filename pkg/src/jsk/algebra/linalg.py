"""Exact matrices over the rationals."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .polynomial import AlgebraError


class RatMatrix:
    """Dense rows x cols matrix of ``Fraction`` entries (immutable)."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = [tuple(Fraction(v) for v in row) for row in data]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise AlgebraError("ragged matrix rows")
        self.rows = len(rows)
        self.cols = cols
        self._data = tuple(rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, size: int) -> "RatMatrix":
        return cls([[int(i == j) for j in range(size)] for i in range(size)], size)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def transpose(self) -> "RatMatrix":
        return RatMatrix([[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise AlgebraError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ot = other.transpose()._data
        return RatMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ot] for r in self._data],
                         other.cols)

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMatrix) and self.cols == other.cols and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.cols, self._data))

    def __repr__(self) -> str:
        return f"RatMatrix({[[str(v) for v in r] for r in self._data]})"


def _as_rows(M) -> list[list[Fraction]]:
    if isinstance(M, RatMatrix):
        return M.tolist()
    return [[Fraction(v) for v in row] for row in M]


def rank_exact(M: RatMatrix | Sequence[Sequence]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination on an integer scaling of ``M``."""
    rows = []
    for r in _as_rows(M):
        den = lcm(*(v.denominator for v in r)) if r else 1
        ir = [int(v * den) for v in r]
        if any(ir):
            rows.append(ir)
    if not rows:
        return 0
    ncols = len(rows[0])
    prev = 1
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            ri = rows[i]
            a = ri[col]
            pr = rows[rank]
            # Bareiss step: division by the previous pivot is exact
            rows[i] = [(p * ri[j] - a * pr[j]) // prev for j in range(ncols)]
        prev = p
        rank += 1
        if rank == len(rows):
            break
    return rank


def rref(M: RatMatrix | Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (zero rows dropped) and pivot columns."""
    rows = [r for r in _as_rows(M)]
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(M: RatMatrix | Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{v : M v = 0}``, one vector per free column, in canonical (RREF) form."""
    rows = _as_rows(M)
    if ncols is None:
        if not rows:
            raise AlgebraError("column count required for an empty matrix")
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(M: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One particular solution of ``M v = b`` or ``None`` when inconsistent."""
    rows = [list(r) + [Fraction(bi)] for r, bi in zip(_as_rows(M), b)]
    if not rows:
        return []
    ncols = len(rows[0]) - 1
    red, pivots = rref(rows)
    if pivots and pivots[-1] == ncols:
        return None
    v = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        v[p] = row[-1]
    return v
