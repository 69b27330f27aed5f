"""Maurer–Cartan curvature, gauging of the 1D affine action, elations and the EM field."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..algebra import (AlgebraError, Family, Polynomial, RationalFunction, ratfunc_matrix_inverse,
                       ratfunc_matrix_mul, ratfunc_rank, solve)
from ..diffop import Section, ShapeMismatch
from ..jets import prolong, vector_bracket
from .operators import MetricSpec


class JacobiViolation(AlgebraError):
    pass


@dataclass(frozen=True)
class StructureConstants:
    """``c[tau][rho][sigma]``, validated for antisymmetry and the Jacobi identity."""

    p: int
    c: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __init__(self, p: int, c: Sequence[Sequence[Sequence]]):
        cc = tuple(tuple(tuple(Fraction(v) for v in row) for row in plane) for plane in c)
        if len(cc) != p or any(len(pl) != p or any(len(r) != p for r in pl) for pl in cc):
            raise ShapeMismatch(f"structure constants must be {p}x{p}x{p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "c", cc)
        for t in range(p):
            for a in range(p):
                for b in range(p):
                    if cc[t][a][b] != -cc[t][b][a]:
                        raise JacobiViolation(f"c^{t + 1}_{a + 1}{b + 1} is not antisymmetric")
        for mu in range(p):
            for a in range(p):
                for b in range(p):
                    for t in range(p):
                        s = sum(cc[l][a][b] * cc[mu][l][t] + cc[l][b][t] * cc[mu][l][a]
                                + cc[l][t][a] * cc[mu][l][b] for l in range(p))
                        if s:
                            raise JacobiViolation(f"Jacobi identity fails for ({a + 1},{b + 1},{t + 1}), "
                                                  f"component {mu + 1}")

    @classmethod
    def zero(cls, p: int) -> "StructureConstants":
        return cls(p, [[[0] * p for _ in range(p)] for _ in range(p)])

    @classmethod
    def from_vector_fields(cls, fields: Sequence[Section]) -> "StructureConstants":
        """Constants of ``[θ_ρ, θ_σ] = c^τ_ρσ θ_τ`` for polynomial vector fields spanning a Lie algebra."""
        p = len(fields)
        keys = sorted({(k, e) for f in fields for k, v in enumerate(f.values) for e in v.terms})

        def coords(s: Section) -> list[Fraction]:
            out = []
            for k, e in keys:
                out.append(s.values[k].coefficient(e))
            return out

        cols = [coords(f) for f in fields]
        mat = [[cols[t][r] for t in range(p)] for r in range(len(keys))]
        c = [[[Fraction(0)] * p for _ in range(p)] for _ in range(p)]
        for a in range(p):
            for b in range(p):
                br = vector_bracket(fields[a], fields[b])
                extra = {(k, e) for k, v in enumerate(br.values) for e in v.terms} - set(keys)
                sol = None if extra else solve(mat, coords(br))
                if sol is None:
                    raise AlgebraError("the vector fields do not close under the bracket")
                for t in range(p):
                    c[t][a][b] = sol[t]
        return cls(p, c)


def affine_generators() -> list[Section]:
    """Infinitesimal generators of ``y = a1 x + a2``: dilatation ``x∂x`` and translation ``∂x``."""
    return [Section(1, ["x1"]), Section(1, [1])]


def affine_structure_constants() -> StructureConstants:
    """Bracket of the action's generators: ``[x∂x, ∂x] = -∂x``."""
    return StructureConstants.from_vector_fields(affine_generators())


@dataclass(frozen=True)
class GaugePotential:
    p: int
    n: int
    A: tuple[tuple[RationalFunction, ...], ...]  # A[tau][i]


@dataclass(frozen=True)
class Curvature:
    p: int
    n: int
    F: dict  # (tau, i, j) with i < j -> RationalFunction

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.F.values())


def maurer_cartan(A: GaugePotential, c: StructureConstants) -> Curvature:
    """``F^τ_ij = ∂_i A^τ_j - ∂_j A^τ_i - c^τ_ρσ A^ρ_i A^σ_j`` for ``i < j``."""
    if A.p != c.p:
        raise ShapeMismatch(f"potential with {A.p} components, algebra of dimension {c.p}")
    F = {}
    for t in range(A.p):
        for i in range(A.n):
            for j in range(i + 1, A.n):
                v = A.A[t][j].diff(i) - A.A[t][i].diff(j)
                for a in range(A.p):
                    for b in range(A.p):
                        if c.c[t][a][b]:
                            v = v - A.A[a][i] * A.A[b][j] * c.c[t][a][b]
                F[(t, i, j)] = v
    return Curvature(A.p, A.n, F)


def affine_matrix(a1: RationalFunction, a2: RationalFunction) -> list[list[RationalFunction]]:
    n = a1.n
    return [[a1, a2], [RationalFunction.zero(n), RationalFunction.one(n)]]


def left_invariant_potential(a1: RationalFunction, a2: RationalFunction) -> GaugePotential:
    """``A = a^{-1} da`` for ``a = [[a1, a2], [0, 1]]``, in the basis (dilatation, translation)."""
    if a1.is_zero():
        raise AlgebraError("a1 = 0 is not a group element")
    n = a1.n
    a = affine_matrix(a1, a2)
    inv = ratfunc_matrix_inverse(a)
    rows: list[list[RationalFunction]] = [[], []]
    for i in range(n):
        da = [[v.diff(i) for v in row] for row in a]
        m = ratfunc_matrix_mul(inv, da)
        if not (m[1][0].is_zero() and m[1][1].is_zero()):
            raise AlgebraError("a^{-1} da left the affine Lie algebra")
        rows[0].append(m[0][0])
        rows[1].append(m[0][1])
    return GaugePotential(2, n, (tuple(rows[0]), tuple(rows[1])))


def perturb(A: GaugePotential, tau: int, i: int, delta: RationalFunction) -> GaugePotential:
    rows = [list(r) for r in A.A]
    rows[tau][i] = rows[tau][i] + delta
    return GaugePotential(A.p, A.n, tuple(tuple(r) for r in rows))


def gauging_matrix(q: int = 2) -> list[list[RationalFunction]]:
    """``∂ f_q / ∂ a^τ`` for ``y = a1 x + a2``: column τ is ``j_q`` of the generator coefficient."""
    cols = [prolong(Section(1, ["x1"]), q), prolong(Section(1, [1]), q)]
    return [[RationalFunction(col[(0, (k,))]) for col in cols] for k in range(q + 1)]


def gauging_spencer_identity(a1: RationalFunction, a2: RationalFunction, q: int = 2) -> bool:
    """``D f_{q+1} = (∂f_q/∂a^τ) ∂_x a^τ`` for ``f_{q+1} = j_{q+1}(f)(x, a(x))`` (1D)."""
    if a1.n != 1:
        raise ShapeMismatch("the gauging identity is stated for the action on the line")
    gens = [prolong(Section(1, ["x1"]), q + 1), prolong(Section(1, [1]), q + 1)]
    a = [a1, a2]

    def jet(k: int) -> RationalFunction:
        return sum((a[t] * RationalFunction(gens[t][(0, (k,))]) for t in range(2)), RationalFunction.zero(1))

    mat = gauging_matrix(q)
    for k in range(q + 1):
        lhs = jet(k).diff(0) - jet(k + 1)
        rhs = mat[k][0] * a1.diff(0) + mat[k][1] * a2.diff(0)
        if lhs != rhs:
            return False
    return True


@dataclass
class GaugeDemo:
    A: GaugePotential
    curvature: Curvature
    flat: bool
    gauging_rank: int
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())


def affine_gauge_demo(a1: RationalFunction, a2: RationalFunction) -> GaugeDemo:
    if a1.is_zero():
        raise AlgebraError("a1 = 0 is not a group element")
    A = left_invariant_potential(a1, a2)
    F = maurer_cartan(A, affine_structure_constants())
    rank = ratfunc_rank(gauging_matrix(2))
    checks = {
        "F(a^{-1} da) = 0": F.is_zero(),
        "gauging matrix has maximum rank p = 2": rank == 2,
    }
    if a1.n == 1:
        checks["D f_3 = (∂f_2/∂a) ∂a"] = gauging_spencer_identity(a1, a2)
    return GaugeDemo(A, F, F.is_zero(), rank, checks)


@dataclass
class ElationReport:
    xi2: dict  # (k, i, j) -> Polynomial
    F: list[list[Polynomial]]
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())


def elation_jets(metric: MetricSpec, a: Section) -> dict:
    """``ξ^k_ij = δ^k_i a_j + δ^k_j a_i - ω_ij ω^{kr} a_r``."""
    n = metric.n
    out = {}
    for k in range(n):
        for i in range(n):
            for j in range(n):
                v = Polynomial.zero(Family.POSITION, n)
                if k == i:
                    v = v + a.values[j]
                if k == j:
                    v = v + a.values[i]
                for r in range(n):
                    w = metric.g(i, j) * metric.inverse(k, r)
                    if w:
                        v = v - a.values[r].scale(w)
                out[(k, i, j)] = v
    return out


def elations_em(metric: MetricSpec, a: Section) -> ElationReport:
    """EM field ``F_ij = ∂_i ξ^r_rj - ∂_j ξ^r_ri`` from second-order conformal jets."""
    n = metric.n
    if n != 4:
        raise ValueError("the elation/EM scenario is fixed at n = 4")
    if a.n != n or a.comps != n:
        raise ShapeMismatch("a must be a covector field with 4 components in 4 variables")
    xi2 = elation_jets(metric, a)
    zero = Polynomial.zero(Family.POSITION, n)
    trace = [sum((xi2[(r, r, i)] for r in range(n)), zero) for i in range(n)]
    F = [[trace[j].diff(i) - trace[i].diff(j) for j in range(n)] for i in range(n)]
    closed = all((F[i][j].diff(k) + F[j][k].diff(i) + F[k][i].diff(j)).is_zero()
                 for i in range(n) for j in range(n) for k in range(n))
    checks = {
        "trace ξ^r_ri = n a_i": all(trace[i] == a.values[i].scale(n) for i in range(n)),
        "F = n (∂_i a_j - ∂_j a_i)": all(F[i][j] == (a.values[j].diff(i) - a.values[i].diff(j)).scale(n)
                                         for i in range(n) for j in range(n)),
        "F antisymmetric": all(F[i][j] == -F[j][i] for i in range(n) for j in range(n)),
        "dF = 0": closed,
    }
    return ElationReport(xi2, F, checks)


def homotopy_potential(a: Section) -> Polynomial:
    """``φ(x) = ∫_0^1 x^i a_i(t x) dt`` for a polynomial 1-form."""
    n = a.n
    phi = Polynomial.zero(Family.POSITION, n)
    for i, v in enumerate(a.values):
        for e, c in v.terms.items():
            phi = phi + Polynomial.monomial(Family.POSITION, n, e, c / (sum(e) + 1)) * \
                Polynomial.var(Family.POSITION, n, i)
    return phi


def is_gradient(a: Section) -> bool:
    phi = homotopy_potential(a)
    return all(phi.diff(i) == a.values[i] for i in range(a.n))
