"""Jet bookkeeping: prolongation, the Spencer operator, symbol ranks, solution spaces."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

from .algebra import Family, Polynomial, monomials_of_degree, monomials_up_to, nullspace, rank_exact
from .diffop import LinearDiffOp, Section, ShapeMismatch, apply

MultiIndex = tuple[int, ...]


def unit(n: int, i: int) -> MultiIndex:
    return tuple(int(j == i) for j in range(n))


def add_index(mu: MultiIndex, nu: MultiIndex) -> MultiIndex:
    return tuple(a + b for a, b in zip(mu, nu))


def jet_dim(n: int, m: int, q: int) -> int:
    """Number of jet coordinates of order ``<= q`` for ``m`` functions of ``n`` variables."""
    if n < 1 or m < 1 or q < 0:
        raise ValueError(f"invalid jet sizes n={n}, m={m}, q={q}")
    return m * comb(n + q, q)


def strict_jet_dim(n: int, m: int, r: int) -> int:
    """Jet coordinates of exact order ``r``."""
    return m * comb(n + r - 1, r)


@dataclass(frozen=True)
class JetSection:
    """``entries[(k, mu)]`` for every component ``k`` and ``|mu| <= q``."""

    n: int
    m: int
    q: int
    entries: Mapping[tuple[int, MultiIndex], Polynomial]

    def __post_init__(self):
        for k in range(self.m):
            for mu in monomials_up_to(self.n, self.q):
                if (k, mu) not in self.entries:
                    raise ShapeMismatch(f"jet section missing entry for component {k}, index {mu}")

    @classmethod
    def from_partial(cls, n: int, m: int, q: int,
                     entries: Mapping[tuple[int, MultiIndex], Polynomial]) -> "JetSection":
        zero = Polynomial.zero(Family.POSITION, n)
        full = {(k, mu): entries.get((k, mu), zero) for k in range(m) for mu in monomials_up_to(n, q)}
        return cls(n, m, q, full)

    def __getitem__(self, key: tuple[int, MultiIndex]) -> Polynomial:
        return self.entries[key]

    def base(self) -> Section:
        return Section(self.n, [self.entries[(k, (0,) * self.n)] for k in range(self.m)])

    def truncate(self, q: int) -> "JetSection":
        return JetSection(self.n, self.m, q,
                          {(k, mu): v for (k, mu), v in self.entries.items() if sum(mu) <= q})


@dataclass(frozen=True)
class SpencerImage:
    """``entries[(i, k, mu)]``: a 1-form (axis ``i``) with values in jets."""

    n: int
    m: int
    q: int
    entries: Mapping[tuple[int, int, MultiIndex], Polynomial]

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.entries.values())

    def __getitem__(self, key) -> Polynomial:
        return self.entries[key]


def prolong(f: Section, q: int) -> JetSection:
    """``j_q(f)``: every slot filled with the true derivative."""
    if q < 0:
        raise ValueError("jet order must be non-negative")
    entries = {}
    for k, v in enumerate(f.values):
        for mu in monomials_up_to(f.n, q):
            entries[(k, mu)] = v.diff_multi(mu)
    return JetSection(f.n, f.comps, q, entries)


def spencer(f: JetSection) -> SpencerImage:
    """``D f_{q+1} = j_1(f_q) - f_{q+1}`` with entries ``∂_i f^k_mu - f^k_{mu+1_i}``, ``|mu| <= q``."""
    if f.q < 1:
        raise ValueError("the Spencer operator needs jets of order >= 1")
    q = f.q - 1
    entries = {}
    for i in range(f.n):
        e = unit(f.n, i)
        for k in range(f.m):
            for mu in monomials_up_to(f.n, q):
                entries[(i, k, mu)] = f[(k, mu)].diff(i) - f[(k, add_index(mu, e))]
    return SpencerImage(f.n, f.m, q, entries)


def restricted_spencer(f: JetSection) -> SpencerImage:
    """Spencer operator on a finite-type system whose order ``q+1`` jets vanish.

    Same as :func:`spencer` applied to the lift of ``f`` with zero top slots;
    the caller asserts that the system kills those jets.
    """
    entries = {}
    for i in range(f.n):
        e = unit(f.n, i)
        for k in range(f.m):
            for mu in monomials_up_to(f.n, f.q):
                nxt = add_index(mu, e)
                shifted = f[(k, nxt)] if sum(nxt) <= f.q else Polynomial.zero(Family.POSITION, f.n)
                entries[(i, k, mu)] = f[(k, mu)].diff(i) - shifted
    return SpencerImage(f.n, f.m, f.q, entries)


def is_holonomic(f: JetSection) -> bool:
    """``f == j_q(f^0)``."""
    return prolong(f.base(), f.q) == f


def restricted_spencer_operator(n: int, m: int, q: int, params: Sequence[tuple[int, MultiIndex]],
                                jet_map: Mapping[tuple[int, MultiIndex], Mapping[int, Fraction]],
                                label: str = "restrictedSpencerD1") -> LinearDiffOp:
    """Restricted Spencer operator written on the parametric jets of a finite-type system.

    ``params`` lists the jet coordinates kept as unknowns; ``jet_map`` expresses
    every jet ``(k, mu)`` with ``|mu| <= q`` as a rational combination of them
    (missing jets are zero).  Rows are ordered by parameter, then by axis:
    row ``(p, i)`` is ``∂_i u_p - (jet (k_p, mu_p + 1_i) in parameters)``.
    """
    zero = Polynomial.zero(Family.DERIVATIVE, n)
    rows = []
    for p, (k, mu) in enumerate(params):
        for i in range(n):
            row = [zero] * len(params)
            row[p] = row[p] + Polynomial.var(Family.DERIVATIVE, n, i)
            nxt = add_index(mu, unit(n, i))
            if sum(nxt) <= q:
                for pp, c in jet_map.get((k, nxt), {}).items():
                    row[pp] = row[pp] - Polynomial.const(Family.DERIVATIVE, n, c)
            rows.append(row)
    return LinearDiffOp(n, rows, len(params), label)


def jets_from_params(n: int, m: int, q: int, params: Section,
                     jet_map: Mapping[tuple[int, MultiIndex], Mapping[int, Fraction]]) -> JetSection:
    entries = {}
    for k in range(m):
        for mu in monomials_up_to(n, q):
            v = Polynomial.zero(Family.POSITION, n)
            for pp, c in jet_map.get((k, mu), {}).items():
                v = v + params.values[pp].scale(c)
            entries[(k, mu)] = v
    return JetSection(n, m, q, entries)


@dataclass(frozen=True)
class ProlongationRank:
    order: int  # derivative order applied to the target components
    source_jets: int
    target_jets: int
    independent_target_jets: int
    rank: int

    @property
    def cc(self) -> int:
        """Compatibility conditions appearing at this order, by difference."""
        return self.independent_target_jets - self.rank


def operator_row_rank(op: LinearDiffOp) -> int:
    """Rank over Q of the operator rows viewed as coefficient vectors (zero-order relations removed)."""
    cols = sorted({(j, e) for row in op.entries for j, p in enumerate(row) for e in p.terms})
    if not cols:
        return 0
    index = {c: t for t, c in enumerate(cols)}
    mat = []
    for row in op.entries:
        v = [Fraction(0)] * len(cols)
        for j, p in enumerate(row):
            for e, c in p.terms.items():
                v[index[(j, e)]] = c
        mat.append(v)
    return rank_exact(mat)


def symbol_matrix(op: LinearDiffOp, r: int) -> tuple[list[list[Fraction]], list, list]:
    """Coefficients of ``∂^nu`` (``|nu| = r``) of every target component on strict
    order ``q + r`` source jets, using only the order-``q`` part of each entry."""
    n, q = op.n, op.order
    row_keys = [(a, nu) for a in range(op.target_comps) for nu in monomials_of_degree(n, r)]
    col_keys = [(b, beta) for b in range(op.source_comps) for beta in monomials_of_degree(n, q + r)]
    col_index = {c: t for t, c in enumerate(col_keys)}
    mat = []
    for a, nu in row_keys:
        v = [Fraction(0)] * len(col_keys)
        for b, entry in enumerate(op.entries[a]):
            for alpha, c in entry.homogeneous_part(q).terms.items():
                v[col_index[(b, add_index(alpha, nu))]] += c
        mat.append(v)
    return mat, row_keys, col_keys


def symbol_prolongation_rank(op: LinearDiffOp, r: int) -> ProlongationRank:
    """Rank of the order-``r`` prolongation of the symbol of ``op``.

    Strict-order counting: ``targetComps * C(n+r-1, r)`` rows (the ``r``-th
    derivatives of the target) against ``sourceComps * C(n+q+r-1, q+r)`` source
    jets.  Constant linear relations among the rows (e.g. a vanishing trace)
    are removed from the target count before taking the difference.
    """
    if r < 0:
        raise ValueError("prolongation order must be non-negative")
    mat, rows, cols = symbol_matrix(op, r)
    n = op.n
    return ProlongationRank(
        order=r,
        source_jets=len(cols),
        target_jets=len(rows),
        independent_target_jets=operator_row_rank(op) * comb(n + r - 1, r),
        rank=rank_exact(mat) if rows and cols else 0,
    )


@dataclass(frozen=True)
class SequenceDims:
    """Circled dimensions of one row of a diagram.

    ``head`` is the leading fiber dimension before the first bundle (0 when the
    row starts with a solution space only); ``euler_sum`` alternates over
    ``head, dims[0], dims[1], ...``.
    """

    dims: tuple[int, ...]
    head: int = 0

    @property
    def full(self) -> tuple[int, ...]:
        return ((self.head,) if self.head else ()) + self.dims

    @property
    def euler_sum(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.full))


def _wedge_sign(i: int, I: tuple[int, ...]) -> int:
    """Sign of ``dx^i ∧ dx^I`` once sorted; 0 when ``i`` is already in ``I``."""
    if i in I:
        return 0
    return -1 if sum(1 for j in I if j < i) % 2 else 1


def delta_matrix(n: int, m: int, q: int, r: int) -> list[list[Fraction]]:
    """Spencer δ: Λ^{r-1} ⊗ S_{q+1} ⊗ E -> Λ^r ⊗ S_q ⊗ E in jet coordinates."""
    src = [(I, k, b) for I in combinations(range(n), r - 1) for k in range(m)
           for b in monomials_of_degree(n, q + 1)]
    tgt = [(J, k, b) for J in combinations(range(n), r) for k in range(m)
           for b in monomials_of_degree(n, q)]
    tindex = {t: s for s, t in enumerate(tgt)}
    mat = [[Fraction(0)] * len(src) for _ in tgt]
    for col, (I, k, beta) in enumerate(src):
        for i in range(n):
            if beta[i] == 0:
                continue
            s = _wedge_sign(i, I)
            if not s:
                continue
            J = tuple(sorted(I + (i,)))
            lowered = beta[:i] + (beta[i] - 1,) + beta[i + 1:]
            mat[tindex[(J, k, lowered)]][col] += s
    return mat


def spencer_bundle_dims(n: int, m: int, q: int) -> SequenceDims:
    """Dimensions of ``C_r = Λ^r T* ⊗ J_q(E) / δ(Λ^{r-1} T* ⊗ S_{q+1} T* ⊗ E)``, r = 0..n.

    ``head`` is ``m``: the row reads ``0 -> E -> C_0 -> ... -> C_n -> 0``.
    """
    if n < 1 or m < 1 or q < 0:
        raise ValueError(f"invalid sizes n={n}, m={m}, q={q}")
    jq = jet_dim(n, m, q)
    dims = []
    for r in range(n + 1):
        im = 0 if r == 0 else rank_exact(delta_matrix(n, m, q, r))
        dims.append(comb(n, r) * jq - im)
    return SequenceDims(tuple(dims), head=m)


@dataclass(frozen=True)
class SolutionBasis:
    degree_bound: int
    basis: tuple[Section, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, s: Section) -> bool:
        """Is ``s`` a rational combination of the basis sections?"""
        keys = sorted({(k, e) for b in self.basis + (s,) for k, v in enumerate(b.values) for e in v.terms})
        idx = {key: t for t, key in enumerate(keys)}

        def vec(sec: Section) -> list[Fraction]:
            out = [Fraction(0)] * len(keys)
            for k, v in enumerate(sec.values):
                for e, c in v.terms.items():
                    out[idx[(k, e)]] = c
            return out

        if not keys:
            return True
        base = [vec(b) for b in self.basis]
        return rank_exact(base + [vec(s)]) == rank_exact(base) if base else s.is_zero()


def polynomial_solutions(op: LinearDiffOp, degree_bound: int) -> SolutionBasis:
    """Basis of polynomial sections of degree ``<= degree_bound`` annihilated by ``op``."""
    if degree_bound < 0:
        raise ValueError("degree bound must be non-negative")
    n = op.n
    monos = sorted(monomials_up_to(n, degree_bound), key=lambda e: (-sum(e), e), reverse=False)
    unknowns = [(b, mu) for b in range(op.source_comps) for mu in monos]
    images = []
    for b, mu in unknowns:
        vals = [Polynomial.zero(Family.POSITION, n)] * op.source_comps
        vals[b] = Polynomial.monomial(Family.POSITION, n, mu)
        images.append(apply(op, Section(n, vals)))
    row_keys = sorted({(a, e) for img in images for a, v in enumerate(img.values) for e in v.terms})
    rindex = {key: t for t, key in enumerate(row_keys)}
    mat = [[Fraction(0)] * len(unknowns) for _ in row_keys]
    for col, img in enumerate(images):
        for a, v in enumerate(img.values):
            for e, c in v.terms.items():
                mat[rindex[(a, e)]][col] = c
    kernel = nullspace(mat, ncols=len(unknowns))
    basis = []
    for vec in kernel:
        comps: list[dict] = [{} for _ in range(op.source_comps)]
        for (b, mu), c in zip(unknowns, vec):
            if c:
                comps[b][mu] = c
        basis.append(Section(n, [Polynomial(Family.POSITION, n, t) for t in comps]))
    return SolutionBasis(degree_bound, tuple(basis))


def vector_bracket(xi: Section, eta: Section) -> Section:
    """``[ξ, η]^k = Σ_r ξ^r ∂_r η^k - η^r ∂_r ξ^k``."""
    n = xi.n
    if xi.comps != n or eta.comps != n or eta.n != n:
        raise ShapeMismatch("the bracket needs two vector fields with n components")
    out = []
    for k in range(n):
        v = Polynomial.zero(Family.POSITION, n)
        for r in range(n):
            v = v + xi.values[r] * eta.values[k].diff(r) - eta.values[r] * xi.values[k].diff(r)
        out.append(v)
    return Section(n, out)
