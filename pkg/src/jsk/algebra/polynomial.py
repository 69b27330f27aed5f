"""Sparse multivariate polynomials with exact rational coefficients.

Two variable families are kept apart: derivative symbols ``d1..dn`` (the
ring in which constant-coefficient operators live) and position variables
``x1..xn`` (the ring of polynomial sections).  Mixing them raises
:class:`FamilyMismatch`.
"""
from __future__ import annotations

import enum
import re
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

Monomial = tuple[int, ...]
Coefficient = Union[int, Fraction]


class AlgebraError(ValueError):
    """Base class for structured errors raised by the exact-algebra layer."""


class FamilyMismatch(AlgebraError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class ParseError(AlgebraError):
    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column}: {text!r}")
        self.text = text
        self.column = column


class Family(enum.Enum):
    DERIVATIVE = "d"
    POSITION = "x"

    @property
    def symbol(self) -> str:
        return self.value


def grevlex_key(exps: Monomial) -> tuple:
    """Sort key: larger key means larger monomial in graded reverse lex with v1 > v2 > ..."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def degree(exps: Monomial) -> int:
    return sum(exps)


def _check_monomial(exps: Monomial, n: int) -> Monomial:
    exps = tuple(int(e) for e in exps)
    if len(exps) != n:
        raise DimensionMismatch(f"monomial {exps} has length {len(exps)}, expected {n}")
    if any(e < 0 for e in exps):
        raise AlgebraError(f"negative exponent in {exps}")
    return exps


class Polynomial:
    """Immutable sparse polynomial ``{exponent tuple: Fraction}``.

    >>> d1 = Polynomial.var(Family.DERIVATIVE, 2, 0)
    >>> d2 = Polynomial.var(Family.DERIVATIVE, 2, 1)
    >>> str((d1 + d2) * (d1 - d2))
    'd1^2 - d2^2'
    """

    __slots__ = ("family", "n", "_terms", "_hash")

    def __init__(self, family: Family, n: int, terms: Mapping[Monomial, Coefficient] | None = None):
        if n < 0:
            raise DimensionMismatch(f"negative number of variables {n}")
        self.family = family
        self.n = n
        clean: dict[Monomial, Fraction] = {}
        for exps, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                exps = _check_monomial(exps, n)
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, family: Family, n: int, terms: dict[Monomial, Fraction]) -> "Polynomial":
        # trusted constructor: terms already validated and zero-free
        p = object.__new__(cls)
        p.family = family
        p.n = n
        p._terms = terms
        p._hash = None
        return p

    # ----- constructors -----
    @classmethod
    def zero(cls, family: Family, n: int) -> "Polynomial":
        return cls._raw(family, n, {})

    @classmethod
    def const(cls, family: Family, n: int, c: Coefficient) -> "Polynomial":
        return cls(family, n, {(0,) * n: c})

    @classmethod
    def var(cls, family: Family, n: int, i: int, power: int = 1) -> "Polynomial":
        """The variable with 0-based index ``i`` raised to ``power``."""
        if not 0 <= i < n:
            raise DimensionMismatch(f"variable index {i + 1} out of range 1..{n}")
        exps = [0] * n
        exps[i] = power
        return cls._raw(family, n, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, family: Family, n: int, exps: Monomial, c: Coefficient = 1) -> "Polynomial":
        return cls(family, n, {tuple(exps): c})

    # ----- accessors -----
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Terms in descending grevlex order."""
        for exps in sorted(self._terms, key=grevlex_key, reverse=True):
            yield exps, self._terms[exps]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def coefficient(self, exps: Monomial) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def leading_term(self) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise AlgebraError("zero polynomial has no leading term")
        exps = max(self._terms, key=grevlex_key)
        return exps, self._terms[exps]

    def homogeneous_part(self, deg: int) -> "Polynomial":
        return Polynomial._raw(self.family, self.n,
                               {e: c for e, c in self._terms.items() if sum(e) == deg})

    # ----- arithmetic -----
    def _compatible(self, other: "Polynomial") -> None:
        if self.family is not other.family:
            raise FamilyMismatch(f"cannot combine {self.family.name} and {other.family.name} polynomials")
        if self.n != other.n:
            raise DimensionMismatch(f"polynomials in {self.n} and {other.n} variables")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._compatible(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(self.family, self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.family, self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.family, self.n, {e: -c for e, c in self._terms.items()})

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
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial._raw(self.family, self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise AlgebraError("negative power of a polynomial")
        result = Polynomial.const(self.family, self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Coefficient) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.family, self.n)
        return Polynomial._raw(self.family, self.n, {e: v * c for e, v in self._terms.items()})

    def mul_monomial(self, exps: Monomial, c: Coefficient = 1) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.family, self.n)
        return Polynomial._raw(self.family, self.n,
                               {tuple(a + b for a, b in zip(e, exps)): v * c for e, v in self._terms.items()})

    def diff(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to the 0-based variable ``i``."""
        if not 0 <= i < self.n:
            raise DimensionMismatch(f"axis {i + 1} out of range 1..{self.n}")
        out: dict[Monomial, Fraction] = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return Polynomial._raw(self.family, self.n, out)

    def diff_multi(self, alpha: Monomial) -> "Polynomial":
        """Apply ``∂^alpha`` in one pass."""
        out: dict[Monomial, Fraction] = {}
        for e, c in self._terms.items():
            if all(a <= b for a, b in zip(alpha, e)):
                f = 1
                for a, b in zip(alpha, e):
                    for k in range(a):
                        f *= b - k
                out[tuple(b - a for a, b in zip(alpha, e))] = c * f
        return Polynomial._raw(self.family, self.n, out)

    def reflect(self) -> "Polynomial":
        """``p(v) -> p(-v)``: flips the sign of odd-degree terms."""
        return Polynomial._raw(self.family, self.n,
                               {e: (-c if sum(e) % 2 else c) for e, c in self._terms.items()})

    def evaluate(self, point: Iterable[Coefficient]) -> Fraction:
        point = [Fraction(v) for v in point]
        if len(point) != self.n:
            raise DimensionMismatch(f"point of length {len(point)} for {self.n} variables")
        total = Fraction(0)
        for e, c in self._terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t *= v ** k
            total += t
        return total

    def retag(self, family: Family) -> "Polynomial":
        """Reinterpret the same coefficients in the other variable family."""
        return Polynomial._raw(family, self.n, dict(self._terms))

    # ----- comparison -----
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.const(self.family, self.n, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.family is other.family and self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.family, self.n, frozenset(self._terms.items())))
        return self._hash

    # ----- text -----
    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.family.name}, {self.n}, {format_polynomial(self)!r})"


def _format_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    sym = p.family.symbol
    parts: list[str] = []
    for exps, c in p.items():
        factors = []
        for i, k in enumerate(exps):
            if k == 1:
                factors.append(f"{sym}{i + 1}")
            elif k > 1:
                factors.append(f"{sym}{i + 1}^{k}")
        mag = abs(c)
        if not factors:
            body = _format_coef(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coef(mag) + "*" + "*".join(factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


_TOKEN = re.compile(r"(?P<num>\d+)|(?P<sym>[dx])(?P<idx>\d+)|(?P<op>[-+*/^()])")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", text, pos + 1)
        col = pos + 1
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), col))
        elif m.group("sym") is not None:
            tokens.append(("sym", m.group("sym") + m.group("idx"), col))
        else:
            tokens.append(("op", m.group("op"), col))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, family: Family, n: int):
        self.text = text
        self.family = family
        self.n = n
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message: str):
        tok = self.peek()
        col = tok[2] if tok else len(self.text) + 1
        raise ParseError(message, self.text, col)

    def take_op(self, op: str) -> bool:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.error("empty polynomial")
        p = self.expr()
        if self.peek() is not None:
            self.error("unexpected token")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.take_op("-"):
            sign = -1
        else:
            self.take_op("+")
        total = self.term().scale(sign)
        while True:
            if self.take_op("+"):
                total = total + self.term()
            elif self.take_op("-"):
                total = total - self.term()
            else:
                return total

    def term(self) -> Polynomial:
        p = self.factor()
        while self.take_op("*"):
            p = p * self.factor()
        return p

    def _int(self) -> int:
        tok = self.peek()
        if not tok or tok[0] != "num":
            self.error("expected integer")
        self.i += 1
        return int(tok[1])

    def factor(self) -> Polynomial:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        if tok[0] == "num":
            self.i += 1
            c = Fraction(int(tok[1]))
            if self.take_op("/"):
                den = self._int()
                if den == 0:
                    raise ParseError("zero denominator", self.text, tok[2])
                c /= den
            base = Polynomial.const(self.family, self.n, c)
        elif tok[0] == "sym":
            name = tok[1]
            if name[0] != self.family.symbol:
                raise ParseError(f"symbol {name} does not belong to the {self.family.name} family",
                                 self.text, tok[2])
            idx = int(name[1:])
            if not 1 <= idx <= self.n:
                raise ParseError(f"symbol {name} out of range 1..{self.n}", self.text, tok[2])
            self.i += 1
            base = Polynomial.var(self.family, self.n, idx - 1)
        elif tok == ("op", "(", tok[2]):
            self.i += 1
            base = self.expr()
            if not self.take_op(")"):
                self.error("expected ')'")
        else:
            self.error("unexpected token")
        if self.take_op("^"):
            base = base ** self._int()
        return base


def parse_polynomial(text: str, family: Family | None = None, n: int | None = None) -> Polynomial:
    """Parse ``2*d1^2 - d1*d2`` style text.

    ``family`` and ``n`` are inferred from the symbols when omitted; a bare
    constant then defaults to the derivative family with ``n = 0``.
    """
    if family is None or n is None:
        syms = re.findall(r"([dx])(\d+)", text)
        letters = {s for s, _ in syms}
        if len(letters) > 1:
            raise ParseError("mixed variable families", text, 1)
        if family is None:
            family = Family(letters.pop()) if letters else Family.DERIVATIVE
        if n is None:
            n = max((int(i) for _, i in syms), default=0)
    return _Parser(text, family, n).parse()


def D(n: int, *axes: int) -> Polynomial:
    """Derivative monomial ``∂_{axes}`` with 1-based axes, e.g. ``D(2, 1, 2)`` is ``d1*d2``."""
    exps = [0] * n
    for a in axes:
        if not 1 <= a <= n:
            raise DimensionMismatch(f"axis {a} out of range 1..{n}")
        exps[a - 1] += 1
    return Polynomial._raw(Family.DERIVATIVE, n, {tuple(exps): Fraction(1)})


def X(n: int, *axes: int) -> Polynomial:
    """Position monomial ``x_{axes}`` with 1-based axes."""
    exps = [0] * n
    for a in axes:
        if not 1 <= a <= n:
            raise DimensionMismatch(f"axis {a} out of range 1..{n}")
        exps[a - 1] += 1
    return Polynomial._raw(Family.POSITION, n, {tuple(exps): Fraction(1)})


def monomials_up_to(n: int, deg: int) -> list[Monomial]:
    """All exponent tuples of total degree ``<= deg`` in ascending grevlex order."""
    out = []
    for d in range(deg + 1):
        out.extend(monomials_of_degree(n, d))
    return sorted(out, key=grevlex_key)


def monomials_of_degree(n: int, deg: int) -> list[Monomial]:
    if n == 0:
        return [()] if deg == 0 else []
    if n == 1:
        return [(deg,)]
    out = []
    for first in range(deg, -1, -1):
        for rest in monomials_of_degree(n - 1, deg - first):
            out.append((first,) + rest)
    return out
