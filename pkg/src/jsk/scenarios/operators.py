"""Named operators: Killing, conformal Killing, Christoffel prolongation, d, Airy, ..."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ..algebra import D, Family, Polynomial
from ..diffop import LinearDiffOp
from ..jets import MultiIndex, restricted_spencer_operator


@dataclass(frozen=True)
class MetricSpec:
    """Flat diagonal metric with entries ±1."""

    n: int
    diagonal_signs: tuple[int, ...]
    conformal_normalized: bool = False

    def __post_init__(self):
        if len(self.diagonal_signs) != self.n:
            raise ValueError(f"{len(self.diagonal_signs)} signs for n={self.n}")
        if any(s not in (1, -1) for s in self.diagonal_signs):
            raise ValueError("diagonal entries must be +1 or -1")

    @classmethod
    def euclidean(cls, n: int) -> "MetricSpec":
        return cls(n, (1,) * n)

    @classmethod
    def minkowski(cls, n: int = 4) -> "MetricSpec":
        return cls(n, (1,) + (-1,) * (n - 1))

    @classmethod
    def from_signature(cls, n: int, signature: str) -> "MetricSpec":
        if signature == "euclid":
            return cls.euclidean(n)
        if signature == "minkowski":
            return cls.minkowski(n)
        raise ValueError(f"unknown signature {signature!r}")

    def g(self, i: int, j: int) -> int:
        return self.diagonal_signs[i] if i == j else 0

    def inverse(self, i: int, j: int) -> int:
        # ±1 diagonal metrics are their own inverse; |det| = 1 so normalization is the identity
        return self.g(i, j)


def sym_pairs(n: int) -> list[tuple[int, int]]:
    """``(i, j)`` with ``i <= j`` in lexicographic order: 11, 12, ..., 22, ..."""
    return [(i, j) for i in range(n) for j in range(i, n)]


def _zero(n: int) -> Polynomial:
    return Polynomial.zero(Family.DERIVATIVE, n)


def killing(n: int, metric: MetricSpec | None = None) -> LinearDiffOp:
    """``Ω_ij = ω_rj ∂_i ξ^r + ω_ir ∂_j ξ^r`` for ``i <= j``."""
    metric = metric or MetricSpec.euclidean(n)
    rows = []
    for i, j in sym_pairs(n):
        row = [_zero(n)] * n
        for r in range(n):
            row[r] = row[r] + D(n, i + 1).scale(metric.g(r, j)) + D(n, j + 1).scale(metric.g(i, r))
        rows.append(row)
    return LinearDiffOp(n, rows, n, f"killing({n})")


def killing_eps(n: int, metric: MetricSpec | None = None) -> LinearDiffOp:
    """Deformation-tensor form ``ε = Ω / 2``."""
    return killing(n, metric).scale_rows([Fraction(1, 2)] * (n * (n + 1) // 2)).relabel(f"killing_eps({n})")


def conformal_killing(n: int, metric: MetricSpec | None = None) -> LinearDiffOp:
    """Trace-free Killing operator ``Ω_ij - (2/n) ω_ij ∂_r ξ^r``."""
    if n < 2:
        raise ValueError("conformal Killing operator needs n >= 2")
    metric = metric or MetricSpec.euclidean(n)
    base = killing(n, metric)
    div = [D(n, r + 1) for r in range(n)]
    rows = []
    for (i, j), row in zip(sym_pairs(n), base.entries):
        w = Fraction(2 * metric.g(i, j), n)
        rows.append([e - d.scale(w) for e, d in zip(row, div)])
    return LinearDiffOp(n, rows, n, f"conformal_killing({n})")


def killing_with_christoffel(n: int, metric: MetricSpec | None = None) -> LinearDiffOp:
    """Killing rows stacked with ``Γ^k_ij = ∂_ij ξ^k`` (flat metric, γ = 0), ``k`` outermost."""
    base = killing(n, metric)
    rows = list(base.entries)
    for k in range(n):
        for i, j in sym_pairs(n):
            row = [_zero(n)] * n
            row[k] = D(n, i + 1, j + 1)
            rows.append(row)
    return LinearDiffOp(n, rows, n, f"killing_christoffel({n})")


def form_basis(n: int, r: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), r))


def exterior_derivative(n: int, r: int) -> LinearDiffOp:
    """``d: Λ^r -> Λ^{r+1}`` on the sorted-index basis ``dx^I``."""
    if not 0 <= r < n:
        raise ValueError(f"form degree {r} out of range 0..{n - 1}")
    src = form_basis(n, r)
    tgt = form_basis(n, r + 1)
    tindex = {J: t for t, J in enumerate(tgt)}
    rows = [[_zero(n) for _ in src] for _ in tgt]
    for col, I in enumerate(src):
        for i in range(n):
            if i in I:
                continue
            sign = -1 if sum(1 for j in I if j < i) % 2 else 1
            J = tuple(sorted(I + (i,)))
            rows[tindex[J]][col] = rows[tindex[J]][col] + D(n, i + 1).scale(sign)
    return LinearDiffOp(n, rows, len(src), f"d{r}({n})")


def _perm_sign(seq: Sequence[int]) -> int:
    seq = list(seq)
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign


def hodge_star(n: int, k: int) -> LinearDiffOp:
    """Euclidean Hodge star ``Λ^k -> Λ^{n-k}``, ``dx^I -> sign(I, I^c) dx^{I^c}``."""
    src = form_basis(n, k)
    tgt = form_basis(n, n - k)
    tindex = {J: t for t, J in enumerate(tgt)}
    rows = [[0] * len(src) for _ in tgt]
    for col, I in enumerate(src):
        comp = tuple(j for j in range(n) if j not in I)
        rows[tindex[comp]][col] = _perm_sign(I + comp)
    return LinearDiffOp(n, rows, len(src), f"star{k}({n})")


def affine_1d() -> LinearDiffOp:
    """Lie operator of the 1D affine group: ``∂xx ξ``."""
    return LinearDiffOp(1, [["d1^2"]], 1, "affine")


def divergence_sym2() -> LinearDiffOp:
    """Plane stress equilibrium on ``(σ11, σ12, σ22)``."""
    return LinearDiffOp(2, [["d1", "d2", "0"], ["0", "d1", "d2"]], 3, "divergence(2)")


def airy2() -> LinearDiffOp:
    """Airy stress function: ``(σ11, σ12, σ22) = (∂22 φ, -∂12 φ, ∂11 φ)``."""
    return LinearDiffOp(2, [["d2^2"], ["-d1*d2"], ["d1^2"]], 1, "airy(2)")


def riemann_cc_eps2() -> LinearDiffOp:
    """``∂11 ε22 + ∂22 ε11 - 2 ∂12 ε12`` on ``(ε11, ε12, ε22)``."""
    return LinearDiffOp(2, [["d2^2", "-2*d1*d2", "d1^2"]], 3, "riemann_cc(2)")


JetMap = dict[tuple[int, MultiIndex], dict[int, Fraction]]


def affine_spencer_data() -> tuple[list[tuple[int, MultiIndex]], JetMap]:
    """Parametric jets ``(ξ, ξ_x)`` of the 1D affine system; ``ξ_xx = 0``."""
    params = [(0, (0,)), (0, (1,))]
    return params, {(0, (0,)): {0: Fraction(1)}, (0, (1,)): {1: Fraction(1)}}


def killing2_spencer_data() -> tuple[list[tuple[int, MultiIndex]], JetMap]:
    """Parametric jets ``(ξ1, ξ2, ρ = ξ_{1,2})`` of plane isometries.

    ``ξ_{1,1} = ξ_{2,2} = 0`` and ``ξ_{2,1} = -ρ`` (indices lowered by the
    Euclidean metric); second-order jets vanish.
    """
    params = [(0, (0, 0)), (1, (0, 0)), (0, (0, 1))]
    jet_map: JetMap = {
        (0, (0, 0)): {0: Fraction(1)},
        (1, (0, 0)): {1: Fraction(1)},
        (0, (0, 1)): {2: Fraction(1)},
        (1, (1, 0)): {2: Fraction(-1)},
    }
    return params, jet_map


def affine_restricted_spencer() -> LinearDiffOp:
    params, jet_map = affine_spencer_data()
    return restricted_spencer_operator(1, 1, 1, params, jet_map, "restrictedSpencerD1(affine)")


def killing2_restricted_spencer() -> LinearDiffOp:
    params, jet_map = killing2_spencer_data()
    return restricted_spencer_operator(2, 2, 1, params, jet_map, "restrictedSpencerD1(killing2)")


def cosserat2_parametrization() -> LinearDiffOp:
    """First-order stress functions ``(φ1, φ2, φ3)`` for ``(σ11, σ12, σ21, σ22, μ1, μ2)``."""
    return LinearDiffOp(2, [
        ["d2", "0", "0"],
        ["-d1", "0", "0"],
        ["0", "-d2", "0"],
        ["0", "d1", "0"],
        ["1", "0", "d2"],
        ["0", "-1", "-d1"],
    ], 3, "cosserat_param(2)")


def airy_substitution() -> LinearDiffOp:
    """``(φ1, φ2, φ3) = (∂2 φ, ∂1 φ, -φ)``."""
    return LinearDiffOp(2, [["d2"], ["d1"], ["-1"]], 1, "airy_substitution")


BUILTIN_OPERATORS = {
    "affine": affine_1d,
    "killing2": lambda: killing(2),
    "killing2_eps": lambda: killing_eps(2),
    "killing_christoffel2": lambda: killing_with_christoffel(2),
    "conformal2": lambda: conformal_killing(2),
    "d0_2": lambda: exterior_derivative(2, 0),
    "d1_2": lambda: exterior_derivative(2, 1),
    "divergence2": divergence_sym2,
    "airy2": airy2,
    "riemann_cc2": riemann_cc_eps2,
    "spencer_affine": affine_restricted_spencer,
    "spencer_killing2": killing2_restricted_spencer,
    "cosserat_param2": cosserat2_parametrization,
}
