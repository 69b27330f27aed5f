"""Rational functions in the position variables and small matrices of them."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .polynomial import AlgebraError, Coefficient, DimensionMismatch, Family, FamilyMismatch, Polynomial


class SingularMatrix(AlgebraError):
    def __init__(self, determinant: "RationalFunction"):
        super().__init__(f"matrix is singular: determinant {determinant} vanishes identically")
        self.determinant = determinant


@lru_cache(maxsize=None)
def _sympy_ring(n: int):
    names = ",".join(f"x{i + 1}" for i in range(n)) if n else "x0"
    return ring(names, QQ)[0]


def _to_sympy(p: Polynomial):
    R = _sympy_ring(p.n)
    if p.n == 0:
        return R.from_dict({(0,): QQ(c.numerator, c.denominator) for c in p.terms.values()})
    return R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in p.terms.items()})


def _from_sympy(q, n: int) -> Polynomial:
    terms = {}
    for e, c in q.to_dict().items():
        terms[tuple(e) if n else ()] = Fraction(int(c.numerator), int(c.denominator))
    return Polynomial(Family.POSITION, n, terms)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    g = _to_sympy(a).gcd(_to_sympy(b))
    return _from_sympy(g, a.n)


def poly_div_exact(a: Polynomial, b: Polynomial) -> Polynomial:
    q, r = _to_sympy(a).div(_to_sympy(b))
    if r:
        raise AlgebraError(f"{b} does not divide {a}")
    return _from_sympy(q, a.n)


def _content(p: Polynomial) -> Fraction:
    """Positive rational c with p / c having coprime integer coefficients."""
    coefs = list(p.terms.values())
    num = 0
    for c in coefs:
        num = gcd(num, c.numerator)
    den = lcm(*(c.denominator for c in coefs))
    return Fraction(num, den)


class RationalFunction:
    """``num / den`` over Q, normalized so that gcd(num, den) = 1 and ``den`` is a
    primitive integer polynomial with positive grevlex-leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        if num.family is not Family.POSITION:
            raise FamilyMismatch("rational functions live in the position family")
        if den is None:
            den = Polynomial.const(Family.POSITION, num.n, 1)
        if den.family is not Family.POSITION:
            raise FamilyMismatch("rational functions live in the position family")
        if den.n != num.n:
            raise DimensionMismatch("numerator and denominator in different numbers of variables")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = Polynomial.const(Family.POSITION, num.n, 1)
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = poly_div_exact(num, g)
                den = poly_div_exact(den, g)
        c = _content(den)
        if den.leading_term()[1] < 0:
            c = -c
        self.num = num.scale(1 / c)
        self.den = den.scale(1 / c)

    @classmethod
    def const(cls, n: int, c: Coefficient) -> "RationalFunction":
        return cls(Polynomial.const(Family.POSITION, n, c))

    @classmethod
    def zero(cls, n: int) -> "RationalFunction":
        return cls.const(n, 0)

    @classmethod
    def one(cls, n: int) -> "RationalFunction":
        return cls.const(n, 1)

    @property
    def n(self) -> int:
        return self.num.n

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.n != self.n:
                raise DimensionMismatch("rational functions in different numbers of variables")
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.const(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def diff(self, i: int) -> "RationalFunction":
        """Quotient rule with respect to the 0-based position variable ``i``."""
        return RationalFunction(self.num.diff(i) * self.den - self.num * self.den.diff(i), self.den * self.den)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Polynomial)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        num = str(self.num) if len(self.num) == 1 else f"({self.num})"
        return f"{num}/({self.den})"

    __repr__ = __str__


RFMatrix = list[list[RationalFunction]]


def ratfunc_matrix_mul(A: Sequence[Sequence[RationalFunction]], B: Sequence[Sequence[RationalFunction]]) -> RFMatrix:
    if not A or not B or len(A[0]) != len(B):
        raise DimensionMismatch("incompatible matrix shapes")
    n = A[0][0].n
    out = []
    for row in A:
        out_row = []
        for j in range(len(B[0])):
            s = RationalFunction.zero(n)
            for k, a in enumerate(row):
                if a and B[k][j]:
                    s = s + a * B[k][j]
            out_row.append(s)
        out.append(out_row)
    return out


def _eliminate(M: Sequence[Sequence[RationalFunction]], augment: RFMatrix | None):
    """Gauss-Jordan over Q(x).  Returns (reduced rows, augmented rows, pivot cols, det)."""
    rows = [list(r) for r in M]
    aug = [list(r) for r in augment] if augment is not None else None
    if not rows:
        return rows, aug, [], None
    n = rows[0][0].n
    ncols = len(rows[0])
    det = RationalFunction.one(n)
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            det = RationalFunction.zero(n)
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            if aug is not None:
                aug[r], aug[piv] = aug[piv], aug[r]
            det = -det
        p = rows[r][col]
        det = det * p
        inv = p.inverse()
        rows[r] = [v * inv for v in rows[r]]
        if aug is not None:
            aug[r] = [v * inv for v in aug[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
                if aug is not None:
                    aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    return rows, aug, pivots, det


def ratfunc_matrix_inverse(M: Sequence[Sequence[RationalFunction]]) -> RFMatrix:
    """Exact inverse of a square matrix over Q(x1..xn)."""
    size = len(M)
    if any(len(r) != size for r in M):
        raise DimensionMismatch("matrix is not square")
    n = M[0][0].n
    ident = [[RationalFunction.const(n, int(i == j)) for j in range(size)] for i in range(size)]
    _, inv, pivots, det = _eliminate(M, ident)
    if len(pivots) < size:
        raise SingularMatrix(ratfunc_det(M))
    return inv


def ratfunc_det(M: Sequence[Sequence[RationalFunction]]) -> RationalFunction:
    size = len(M)
    if any(len(r) != size for r in M):
        raise DimensionMismatch("matrix is not square")
    _, _, pivots, det = _eliminate(M, None)
    return det if len(pivots) == size else RationalFunction.zero(M[0][0].n)


def ratfunc_rank(M: Sequence[Sequence[RationalFunction]]) -> int:
    """Rank over the field Q(x1..xn)."""
    if not M:
        return 0
    return len(_eliminate(M, None)[2])
