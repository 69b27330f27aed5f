"""Gröbner bases for submodules of ``Q[d1..dn]^r`` and compatibility conditions.

Compatibility conditions of an operator ``M`` (``p x m``) are row vectors ``g``
with ``g M = 0``.  They are obtained by eliminating the first ``m``
positions from the rows ``(M_i | e_i)`` under a position-over-term order.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

from .algebra import AlgebraError, Family, Polynomial, grevlex_key, monomials_up_to, rref
from .diffop import LinearDiffOp, ShapeMismatch, compose

Term = tuple[int, tuple[int, ...]]  # (position, exponents)
Vec = dict[Term, Fraction]


class RankMismatch(AlgebraError):
    pass


class NotAComplex(AlgebraError):
    pass


class OrderKind(enum.Enum):
    POSITION_OVER_TERM = "positionOverTerm"
    TERM_OVER_POSITION = "termOverPosition"


@dataclass(frozen=True)
class TermOrder:
    kind: OrderKind = OrderKind.POSITION_OVER_TERM

    def key(self, t: Term):
        pos, exps = t
        if self.kind is OrderKind.POSITION_OVER_TERM:
            return (-pos, grevlex_key(exps))
        return (grevlex_key(exps), -pos)


POT = TermOrder(OrderKind.POSITION_OVER_TERM)
TOP = TermOrder(OrderKind.TERM_OVER_POSITION)


@dataclass(frozen=True)
class ModuleElement:
    comps: tuple[Polynomial, ...]

    def __init__(self, comps: Iterable[Polynomial]):
        object.__setattr__(self, "comps", tuple(comps))

    @property
    def rank(self) -> int:
        return len(self.comps)

    @property
    def n(self) -> int:
        return self.comps[0].n

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.comps)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.comps) + ")"


def _to_vec(e: ModuleElement) -> Vec:
    return {(pos, exps): c for pos, p in enumerate(e.comps) for exps, c in p.terms.items()}


def _from_vec(v: Vec, rank: int, n: int) -> ModuleElement:
    parts: list[dict] = [{} for _ in range(rank)]
    for (pos, exps), c in v.items():
        parts[pos][exps] = c
    return ModuleElement(Polynomial(Family.DERIVATIVE, n, p) for p in parts)


def _divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


class _Basis:
    """Working set of monic module vectors with cached leading terms."""

    def __init__(self, order: TermOrder):
        self.order = order
        self.vecs: list[Vec] = []
        self.leads: list[Term] = []

    def lead(self, v: Vec) -> Term:
        return max(v, key=self.order.key)

    def add(self, v: Vec) -> int:
        lt = self.lead(v)
        c = v[lt]
        if c != 1:
            v = {t: x / c for t, x in v.items()}
        self.vecs.append(v)
        self.leads.append(lt)
        return len(self.vecs) - 1

    def reducer(self, t: Term, skip: int | None = None) -> int | None:
        pos, exps = t
        for k, (lp, le) in enumerate(self.leads):
            if k != skip and lp == pos and self.vecs[k] is not None and _divides(le, exps):
                return k
        return None

    def reduce(self, v: Vec, full: bool = True, skip: int | None = None) -> Vec:
        """Normal form of ``v``; with ``full`` every term is reduced, not only the lead."""
        v = dict(v)
        done: Vec = {}
        key = self.order.key
        while v:
            t = max(v, key=key)
            k = self.reducer(t, skip)
            if k is None:
                c = v.pop(t)
                if not full:
                    done[t] = c
                    done.update(v)
                    return done
                done[t] = c
                continue
            c = v[t]
            le = self.leads[k][1]
            shift = tuple(a - b for a, b in zip(t[1], le))
            for (p2, e2), c2 in self.vecs[k].items():
                tt = (p2, tuple(a + b for a, b in zip(e2, shift)))
                s = v.get(tt, 0) - c * c2
                if s:
                    v[tt] = s
                else:
                    v.pop(tt, None)
        return done


def _lcm_exps(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _spoly(b: _Basis, i: int, j: int) -> Vec:
    (pi, ei), (pj, ej) = b.leads[i], b.leads[j]
    L = _lcm_exps(ei, ej)
    si = tuple(x - y for x, y in zip(L, ei))
    sj = tuple(x - y for x, y in zip(L, ej))
    out: Vec = {}
    for (p, e), c in b.vecs[i].items():
        out[(p, tuple(x + y for x, y in zip(e, si)))] = c
    for (p, e), c in b.vecs[j].items():
        t = (p, tuple(x + y for x, y in zip(e, sj)))
        s = out.get(t, 0) - c
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


def _buchberger(vecs: Sequence[Vec], order: TermOrder) -> list[Vec]:
    b = _Basis(order)
    pairs: set[tuple[int, int]] = set()

    def insert(v: Vec) -> None:
        k = b.add(v)
        for i in range(k):
            if b.vecs[i] is not None and b.leads[i][0] == b.leads[k][0]:
                pairs.add((i, k))

    for v in vecs:
        r = b.reduce(v)
        if r:
            insert(r)
    while pairs:
        def pair_key(ij):
            i, j = ij
            L = _lcm_exps(b.leads[i][1], b.leads[j][1])
            return (sum(L), order.key((b.leads[i][0], L)), ij)
        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        if b.vecs[i] is None or b.vecs[j] is None:
            continue
        L = _lcm_exps(b.leads[i][1], b.leads[j][1])
        pos = b.leads[i][0]
        # chain criterion
        chained = False
        for k in range(len(b.vecs)):
            if k in (i, j) or b.vecs[k] is None or b.leads[k][0] != pos:
                continue
            if _divides(b.leads[k][1], L):
                if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                    chained = True
                    break
        if chained:
            continue
        r = b.reduce(_spoly(b, i, j))
        if r:
            insert(r)
    # reduced basis: drop redundant leads, then tail-reduce
    live = [k for k in range(len(b.vecs)) if b.vecs[k] is not None]
    keep = []
    for k in live:
        pk, ek = b.leads[k]
        redundant = False
        for l in live:
            if l == k:
                continue
            pl, el = b.leads[l]
            if pl == pk and _divides(el, ek) and (el != ek or l < k):
                redundant = True
                break
        if not redundant:
            keep.append(k)
    red = _Basis(order)
    for k in keep:
        red.vecs.append(b.vecs[k])
        red.leads.append(b.leads[k])
    out = []
    for idx in range(len(red.vecs)):
        v = red.vecs[idx]
        lt = red.leads[idx]
        c = v[lt]
        tail = {t: x for t, x in v.items() if t != lt}
        tail = red.reduce(tail, skip=idx) if tail else {}
        nv = {lt: c, **tail}
        out.append(nv)
    out.sort(key=lambda v: order.key(max(v, key=order.key)))
    return out


@dataclass(frozen=True)
class GroebnerBasis:
    rank: int
    n: int
    order: TermOrder
    elements: tuple[ModuleElement, ...]
    _vecs: tuple = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def leading_terms(self) -> list[Term]:
        return [max(v, key=self.order.key) for v in self._vecs]

    def _basis(self) -> _Basis:
        b = _Basis(self.order)
        for v in self._vecs:
            b.vecs.append(v)
            b.leads.append(max(v, key=self.order.key))
        return b


def _check_rank(elements: Sequence[ModuleElement]) -> tuple[int, int]:
    if not elements:
        raise RankMismatch("empty generator list")
    rank = elements[0].rank
    n = elements[0].n
    for e in elements:
        if e.rank != rank:
            raise RankMismatch(f"generators of rank {rank} and {e.rank}")
        if any(c.family is not Family.DERIVATIVE or c.n != n for c in e.comps):
            raise RankMismatch("generator components must be derivative polynomials in a common n")
    return rank, n


def module_groebner(gens: Sequence[ModuleElement], order: TermOrder = POT) -> GroebnerBasis:
    """Reduced Gröbner basis, sorted ascending in ``order``, every element monic."""
    rank, n = _check_rank(gens)
    vecs = _buchberger([_to_vec(g) for g in gens if not g.is_zero()], order)
    return GroebnerBasis(rank, n, order, tuple(_from_vec(v, rank, n) for v in vecs), tuple(vecs))


def normal_form(e: ModuleElement, basis: GroebnerBasis) -> ModuleElement:
    if e.rank != basis.rank:
        raise RankMismatch(f"element of rank {e.rank} against basis of rank {basis.rank}")
    if not basis._vecs:
        return e
    return _from_vec(basis._basis().reduce(_to_vec(e)), basis.rank, basis.n)


def is_member(e: ModuleElement, basis: GroebnerBasis) -> bool:
    return normal_form(e, basis).is_zero()


def zero_element(rank: int, n: int) -> ModuleElement:
    return ModuleElement([Polynomial.zero(Family.DERIVATIVE, n)] * rank)


def rows_of(op: LinearDiffOp) -> list[ModuleElement]:
    return [ModuleElement(row) for row in op.entries]


def submodule_basis(elements: Sequence[ModuleElement], rank: int, n: int,
                    order: TermOrder = POT) -> GroebnerBasis:
    """Gröbner basis of the span of ``elements``; the zero module is allowed."""
    nz = [e for e in elements if not e.is_zero()]
    if not nz:
        return GroebnerBasis(rank, n, order, (), ())
    return module_groebner(nz, order)


def truncated_dimension(basis: GroebnerBasis, d: int) -> int:
    """``dim_Q`` of the submodule elements whose components all have degree ``<= d``.

    Requires a degree-compatible order (``TOP``); counts module monomials of
    degree ``<= d`` that are multiples of a leading term.
    """
    if basis.order.kind is not OrderKind.TERM_OVER_POSITION:
        raise ValueError("truncated_dimension needs the term-over-position order")
    leads = basis.leading_terms()
    count = 0
    for pos in range(basis.rank):
        pl = [e for p, e in leads if p == pos]
        if not pl:
            continue
        for mono in monomials_up_to(basis.n, d):
            if any(_divides(le, mono) for le in pl):
                count += 1
    return count


def _primitive(e: ModuleElement) -> ModuleElement:
    """Scale to coprime integer coefficients with a positive leading coefficient."""
    coefs = [c for p in e.comps for c in p.terms.values()]
    if not coefs:
        return e
    den = lcm(*(c.denominator for c in coefs))
    g = 0
    for c in coefs:
        g = gcd(g, (c * den).numerator)
    v = _to_vec(e)
    lead = v[max(v, key=POT.key)]
    f = Fraction(den, g) * (1 if lead > 0 else -1)
    return ModuleElement(p.scale(f) for p in e.comps)


def _row_weights(op: LinearDiffOp) -> list[int] | None:
    """Row degrees making ``op`` homogeneous for suitable column shifts, or None."""
    p, m = op.target_comps, op.source_comps
    row_w: list[int | None] = [None] * p
    col_w: list[int | None] = [None] * m
    edges: list[tuple[int, int, int]] = []
    for i, row in enumerate(op.entries):
        for j, e in enumerate(row):
            for exps in e.terms:
                edges.append((i, j, sum(exps)))
    # row_w[i] - col_w[j] = deg for every term
    for start in range(p):
        if row_w[start] is not None:
            continue
        row_w[start] = 0
        changed = True
        while changed:
            changed = False
            for i, j, d in edges:
                if row_w[i] is not None and col_w[j] is None:
                    col_w[j] = row_w[i] - d
                    changed = True
                elif col_w[j] is not None and row_w[i] is None:
                    row_w[i] = col_w[j] + d
                    changed = True
                elif row_w[i] is not None and col_w[j] is not None and row_w[i] - col_w[j] != d:
                    return None
    # components joined only through other rows are already fixed; isolated rows keep 0
    lo = min(row_w) if row_w else 0
    return [w - lo for w in row_w]


def _weighted_degree(g: ModuleElement, weights: Sequence[int]) -> int:
    return max((c.degree + w for c, w in zip(g.comps, weights) if not c.is_zero()), default=-1)


def minimal_generators(elements: Sequence[ModuleElement], weights: Sequence[int] | None,
                       rank: int, n: int) -> list[ModuleElement]:
    """Greedy irredundant generating subset, processed by weighted degree.

    Minimal in the graded sense whenever ``weights`` make the module graded.
    """
    w = list(weights) if weights is not None else [0] * rank
    cands = sorted((e for e in elements if not e.is_zero()),
                   key=lambda e: (_weighted_degree(e, w), e.degree, str(e)))
    kept: list[ModuleElement] = []
    basis = submodule_basis([], rank, n)
    for c in cands:
        if not is_member(c, basis):
            kept.append(c)
            basis = submodule_basis(kept, rank, n)
    if weights is None:
        # ungraded: one more pass to drop anything generated by the others
        k = 0
        while k < len(kept):
            others = kept[:k] + kept[k + 1:]
            if others and is_member(kept[k], submodule_basis(others, rank, n)):
                kept = others
            else:
                k += 1
    return kept


@dataclass(frozen=True)
class SyzygyReport:
    generators: tuple[ModuleElement, ...]
    source_op: LinearDiffOp
    cc_op: LinearDiffOp
    basis: GroebnerBasis

    @property
    def count(self) -> int:
        return len(self.generators)


def compatibility_conditions(op: LinearDiffOp, label: str | None = None) -> SyzygyReport:
    """Generators of the left kernel ``{g : g · op = 0}``, minimalized.

    ``cc_op`` has one row per generator (primitive integer coefficients); the
    zero operator yields identity rows.
    """
    p, m, n = op.target_comps, op.source_comps, op.n
    zero = Polynomial.zero(Family.DERIVATIVE, n)
    one = Polynomial.const(Family.DERIVATIVE, n, 1)
    if p == 0:
        empty = GroebnerBasis(0, n, POT, (), ())
        return SyzygyReport((), op, LinearDiffOp(n, [], 0, label or f"CC({op.label})"), empty)
    aug = [ModuleElement(list(op.entries[i]) + [one if k == i else zero for k in range(p)])
           for i in range(p)]
    gb = module_groebner(aug, POT)
    syz = []
    for v in gb._vecs:
        if all(pos >= m for pos, _ in v):
            syz.append({(pos - m, e): c for (pos, e), c in v.items()})
    syz_elems = [_from_vec(v, p, n) for v in syz]
    syz_basis = GroebnerBasis(p, n, POT, tuple(syz_elems), tuple(syz))
    weights = _row_weights(op)
    gens = [_primitive(g) for g in minimal_generators(syz_elems, weights, p, n)]
    w = weights or [0] * p
    gens.sort(key=lambda g: (_weighted_degree(g, w), max(_to_vec(g), key=POT.key)[0], str(g)))
    cc = LinearDiffOp(n, [g.comps for g in gens], p, label if label is not None else f"CC({op.label})")
    return SyzygyReport(tuple(gens), op, cc, syz_basis)


def is_complex(second: LinearDiffOp, first: LinearDiffOp) -> bool:
    """True iff ``second ∘ first`` is the zero operator."""
    if second.source_comps != first.target_comps or second.n != first.n:
        raise ShapeMismatch(f"{second.label or 'second'} ({second.target_comps}x{second.source_comps}) "
                            f"cannot follow {first.label or 'first'} ({first.target_comps}x{first.source_comps})")
    return compose(second, first).is_zero()


@dataclass(frozen=True)
class ExactnessReport:
    exact: bool
    cc_count: int
    missing: tuple[ModuleElement, ...]
    cc: SyzygyReport


def check_exactness(first: LinearDiffOp, second: LinearDiffOp) -> ExactnessReport:
    """Do the rows of ``second`` generate every compatibility condition of ``first``?"""
    if not is_complex(second, first):
        raise NotAComplex(f"{second.label or 'second'} ∘ {first.label or 'first'} is not zero")
    cc = compatibility_conditions(first)
    span = submodule_basis(rows_of(second), first.target_comps, first.n)
    missing = tuple(g for g in cc.generators if not is_member(g, span))
    return ExactnessReport(not missing, cc.count, missing, cc)


@dataclass(frozen=True)
class ParametrizationReport:
    composes: bool
    cc_of_param_generated_by_d: bool
    d_rows_are_cc_of_param: bool
    cc_of_param: SyzygyReport

    @property
    def verdict(self) -> bool:
        return self.composes and self.cc_of_param_generated_by_d and self.d_rows_are_cc_of_param


def check_parametrization(D: LinearDiffOp, P: LinearDiffOp) -> ParametrizationReport:
    """Is ``P`` a parametrization of the kernel of ``D`` (formally, ``D`` = CC(P))?"""
    if P.target_comps != D.source_comps or P.n != D.n:
        raise ShapeMismatch(f"parametrization with {P.target_comps} outputs for an operator "
                            f"on {D.source_comps} fields")
    composes = compose(D, P).is_zero()
    cc = compatibility_conditions(P)
    d_span = submodule_basis(rows_of(D), D.source_comps, D.n)
    generated = all(is_member(g, d_span) for g in cc.generators)
    rows_in = all(is_member(r, cc.basis) for r in rows_of(D)) if cc.basis.elements else \
        all(r.is_zero() for r in rows_of(D))
    return ParametrizationReport(composes, generated, rows_in, cc)


def equivalent_row_modules(a: LinearDiffOp, b: LinearDiffOp) -> bool:
    """Mutual membership: rows of ``a`` and ``b`` generate the same submodule."""
    if a.source_comps != b.source_comps or a.n != b.n:
        return False
    ga = submodule_basis(rows_of(a), a.source_comps, a.n)
    gb = submodule_basis(rows_of(b), b.source_comps, b.n)
    return all(is_member(r, gb) for r in rows_of(a)) and all(is_member(r, ga) for r in rows_of(b))


def syzygy_basis_top(report: SyzygyReport) -> GroebnerBasis:
    """The left kernel of ``report.source_op`` re-based under the degree-compatible order."""
    if not report.basis.elements:
        return GroebnerBasis(report.basis.rank, report.basis.n, TOP, (), ())
    return module_groebner(list(report.basis.elements), TOP)


def syzygy_dimension(op: LinearDiffOp, d: int) -> int:
    """``dim_Q`` of compatibility conditions whose components all have degree ``<= d``."""
    return truncated_dimension(syzygy_basis_top(compatibility_conditions(op)), d)


def truncated_syzygies(op: LinearDiffOp, d: int) -> list[ModuleElement]:
    """A Q-basis of the compatibility conditions of componentwise degree ``<= d``.

    Spans the monomial multiples of the degree-compatible Gröbner basis that
    stay within degree ``d`` and echelonizes them, leading terms first.
    """
    gb = syzygy_basis_top(compatibility_conditions(op))
    cands = []
    for g in gb.elements:
        if g.degree > d:
            continue
        for mono in monomials_up_to(op.n, d - g.degree):
            cands.append(ModuleElement(c.mul_monomial(mono) for c in g.comps))
    if not cands:
        return []
    keys = sorted({t for c in cands for t in _to_vec(c)}, key=TOP.key, reverse=True)
    idx = {k: j for j, k in enumerate(keys)}
    mat = []
    for c in cands:
        row = [Fraction(0)] * len(keys)
        for t, v in _to_vec(c).items():
            row[idx[t]] = v
        mat.append(row)
    red, _ = rref(mat)
    return [_primitive(_from_vec({keys[j]: v for j, v in enumerate(row) if v}, op.target_comps, op.n))
            for row in red]


def first_order_cc(op: LinearDiffOp, label: str | None = None) -> LinearDiffOp:
    """Operator whose rows are all first-order compatibility conditions of ``op``."""
    rows = truncated_syzygies(op, 1)
    return LinearDiffOp(op.n, [g.comps for g in rows], op.target_comps,
                        label if label is not None else f"CC1({op.label})")
