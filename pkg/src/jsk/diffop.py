"""Linear constant-coefficient differential operators acting on polynomial sections.

An operator is a ``targetComps x sourceComps`` matrix of polynomials in the
derivative symbols ``d1..dn``.  Sections are tuples of polynomials in the
position variables ``x1..xn``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .algebra import AlgebraError, Family, Polynomial, parse_polynomial


class ShapeMismatch(AlgebraError):
    pass


def _dpoly(n: int, p) -> Polynomial:
    if isinstance(p, Polynomial):
        if p.family is not Family.DERIVATIVE or p.n != n:
            raise ShapeMismatch(f"entry {p!r} is not a derivative polynomial in {n} symbols")
        return p
    if isinstance(p, str):
        return parse_polynomial(p, Family.DERIVATIVE, n)
    return Polynomial.const(Family.DERIVATIVE, n, p)


def _xpoly(n: int, p) -> Polynomial:
    if isinstance(p, Polynomial):
        if p.family is not Family.POSITION or p.n != n:
            raise ShapeMismatch(f"value {p!r} is not a position polynomial in {n} variables")
        return p
    if isinstance(p, str):
        return parse_polynomial(p, Family.POSITION, n)
    return Polynomial.const(Family.POSITION, n, p)


@dataclass(frozen=True)
class Section:
    n: int
    values: tuple[Polynomial, ...]

    def __init__(self, n: int, values: Iterable):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "values", tuple(_xpoly(n, v) for v in values))

    @property
    def comps(self) -> int:
        return len(self.values)

    @classmethod
    def zero(cls, n: int, comps: int) -> "Section":
        return cls(n, [0] * comps)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def __getitem__(self, k: int) -> Polynomial:
        return self.values[k]

    def __add__(self, other: "Section") -> "Section":
        if other.comps != self.comps or other.n != self.n:
            raise ShapeMismatch("sections of different shapes")
        return Section(self.n, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "Section") -> "Section":
        return self + other.scale(-1)

    def scale(self, c) -> "Section":
        return Section(self.n, [v.scale(c) for v in self.values])

    def dot(self, other: "Section") -> Polynomial:
        if other.comps != self.comps:
            raise ShapeMismatch(f"pairing of {self.comps} and {other.comps} components")
        total = Polynomial.zero(Family.POSITION, self.n)
        for a, b in zip(self.values, other.values):
            total = total + a * b
        return total

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True, eq=False)
class LinearDiffOp:
    """Constant-coefficient operator with ``entries[target][source]``."""

    n: int
    source_comps: int
    target_comps: int
    entries: tuple[tuple[Polynomial, ...], ...]
    label: str = field(default="")

    def __init__(self, n: int, entries: Sequence[Sequence], source_comps: int | None = None,
                 label: str = ""):
        rows = tuple(tuple(_dpoly(n, e) for e in row) for row in entries)
        if source_comps is None:
            if not rows:
                raise ShapeMismatch("source_comps is required for an operator with no rows")
            source_comps = len(rows[0])
        if any(len(r) != source_comps for r in rows):
            raise ShapeMismatch(f"every row must have {source_comps} entries")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "source_comps", source_comps)
        object.__setattr__(self, "target_comps", len(rows))
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "label", label)

    # ----- constructors -----
    @classmethod
    def zero(cls, n: int, source_comps: int, target_comps: int, label: str = "zero") -> "LinearDiffOp":
        return cls(n, [[0] * source_comps for _ in range(target_comps)], source_comps, label)

    @classmethod
    def identity(cls, n: int, comps: int, label: str = "id") -> "LinearDiffOp":
        return cls(n, [[int(i == j) for j in range(comps)] for i in range(comps)], comps, label)

    # ----- basic properties -----
    @property
    def order(self) -> int:
        return max((e.degree for row in self.entries for e in row), default=-1)

    def row_order(self, i: int) -> int:
        return max((e.degree for e in self.entries[i]), default=-1)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearDiffOp):
            return NotImplemented
        return (self.n == other.n and self.source_comps == other.source_comps
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.n, self.source_comps, self.entries))

    def relabel(self, label: str) -> "LinearDiffOp":
        return LinearDiffOp(self.n, self.entries, self.source_comps, label)

    def scale_rows(self, signs: Sequence) -> "LinearDiffOp":
        if len(signs) != self.target_comps:
            raise ShapeMismatch("one factor per row required")
        return LinearDiffOp(self.n, [[e.scale(s) for e in row] for row, s in zip(self.entries, signs)],
                            self.source_comps, self.label)

    def scale_cols(self, factors: Sequence) -> "LinearDiffOp":
        if len(factors) != self.source_comps:
            raise ShapeMismatch("one factor per column required")
        return LinearDiffOp(self.n, [[e.scale(f) for e, f in zip(row, factors)] for row in self.entries],
                            self.source_comps, self.label)

    def select_rows(self, idx: Iterable[int]) -> "LinearDiffOp":
        return LinearDiffOp(self.n, [self.entries[i] for i in idx], self.source_comps, self.label)

    def stack(self, other: "LinearDiffOp", label: str | None = None) -> "LinearDiffOp":
        if other.n != self.n or other.source_comps != self.source_comps:
            raise ShapeMismatch("stacked operators must share n and source")
        return LinearDiffOp(self.n, self.entries + other.entries, self.source_comps,
                            self.label if label is None else label)

    def transpose(self) -> "LinearDiffOp":
        return LinearDiffOp(self.n, [[self.entries[i][j] for i in range(self.target_comps)]
                                     for j in range(self.source_comps)], self.target_comps, self.label)

    def __neg__(self) -> "LinearDiffOp":
        return self.scale_rows([-1] * self.target_comps)

    def __add__(self, other: "LinearDiffOp") -> "LinearDiffOp":
        if (other.n, other.source_comps, other.target_comps) != (self.n, self.source_comps, self.target_comps):
            raise ShapeMismatch("operators of different shapes")
        return LinearDiffOp(self.n, [[a + b for a, b in zip(r1, r2)]
                                     for r1, r2 in zip(self.entries, other.entries)], self.source_comps)

    def __sub__(self, other: "LinearDiffOp") -> "LinearDiffOp":
        return self + (-other)

    def __repr__(self) -> str:
        body = "; ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.entries)
        return f"LinearDiffOp(n={self.n}, {self.target_comps}x{self.source_comps}, {self.label!r}: {body})"

    # ----- serialization -----
    def to_record(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "sourceComps": self.source_comps,
            "targetComps": self.target_comps,
            "label": self.label,
            "entries": [[str(e) for e in row] for row in self.entries],
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "LinearDiffOp":
        try:
            n = int(rec["n"])
            src = int(rec["sourceComps"])
            tgt = int(rec["targetComps"])
            entries = rec["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ShapeMismatch(f"malformed operator record: {exc}") from exc
        if len(entries) != tgt:
            raise ShapeMismatch(f"targetComps={tgt} but {len(entries)} rows given")
        op = cls(n, entries, src, str(rec.get("label", "")))
        return op


def apply(op: LinearDiffOp, s: Section) -> Section:
    """Act with ``op`` on a polynomial section."""
    if s.n != op.n or s.comps != op.source_comps:
        raise ShapeMismatch(f"operator with {op.source_comps} source components (n={op.n}) "
                            f"applied to section with {s.comps} components (n={s.n})")
    out = []
    for row in op.entries:
        total = Polynomial.zero(Family.POSITION, op.n)
        for entry, v in zip(row, s.values):
            for alpha, c in entry.terms.items():
                total = total + v.diff_multi(alpha).scale(c)
        out.append(total)
    return Section(op.n, out)


def compose(after: LinearDiffOp, before: LinearDiffOp, label: str | None = None) -> LinearDiffOp:
    """``after ∘ before`` as a product of polynomial matrices."""
    if after.n != before.n or after.source_comps != before.target_comps:
        raise ShapeMismatch(f"cannot compose {after.target_comps}x{after.source_comps} after "
                            f"{before.target_comps}x{before.source_comps}")
    n = after.n
    rows = []
    for arow in after.entries:
        row = []
        for j in range(before.source_comps):
            total = Polynomial.zero(Family.DERIVATIVE, n)
            for k, a in enumerate(arow):
                if a and before.entries[k][j]:
                    total = total + a * before.entries[k][j]
            row.append(total)
        rows.append(row)
    if label is None:
        label = f"{after.label}∘{before.label}" if after.label or before.label else ""
    return LinearDiffOp(n, rows, before.source_comps, label)


def adjoint(op: LinearDiffOp) -> LinearDiffOp:
    """Formal adjoint: transpose with every ``p(∂)`` replaced by ``p(-∂)``."""
    label = f"ad({op.label})" if op.label else ""
    return LinearDiffOp(op.n, [[op.entries[i][j].reflect() for i in range(op.target_comps)]
                               for j in range(op.source_comps)], op.target_comps, label)


def divergence(n: int, flux: Sequence[Polynomial]) -> Polynomial:
    if len(flux) != n:
        raise ShapeMismatch(f"flux must have {n} components")
    total = Polynomial.zero(Family.POSITION, n)
    for i, f in enumerate(flux):
        total = total + f.diff(i)
    return total


@dataclass(frozen=True)
class GreensCertificate:
    left_pairing: Polynomial
    adjoint_pairing: Polynomial
    boundary_flux: tuple[Polynomial, ...]

    @property
    def residual(self) -> Polynomial:
        n = self.left_pairing.n
        return self.left_pairing - self.adjoint_pairing - divergence(n, self.boundary_flux)

    def holds(self) -> bool:
        return self.residual.is_zero()


def greens_identity(op: LinearDiffOp, test_dual: Section, test_source: Section) -> GreensCertificate:
    """Integrate ``λ·(op ξ)`` by parts, one derivative at a time, lowest axis first.

    Each step rewrites ``u ∂_i w = ∂_i(u w) - (∂_i u) w`` and records ``u w`` in
    the ``i``-th flux component.
    """
    if test_dual.comps != op.target_comps or test_source.comps != op.source_comps:
        raise ShapeMismatch("test sections do not match the operator shape")
    if test_dual.n != op.n or test_source.n != op.n:
        raise ShapeMismatch("test sections live in a different dimension")
    n = op.n
    zero = Polynomial.zero(Family.POSITION, n)
    flux = [zero] * n
    for a, row in enumerate(op.entries):
        lam = test_dual.values[a]
        for b, entry in enumerate(row):
            xi = test_source.values[b]
            for alpha, c in entry.terms.items():
                u = lam.scale(c)
                rest = list(alpha)
                for i in range(n):
                    while rest[i]:
                        rest[i] -= 1
                        flux[i] = flux[i] + u * xi.diff_multi(tuple(rest))
                        u = -u.diff(i)
    left = test_dual.dot(apply(op, test_source))
    right = apply(adjoint(op), test_dual).dot(test_source)
    return GreensCertificate(left, right, tuple(flux))
