"""Adjoint dualities: 1D and plane Cosserat equations, Airy functions, Poincaré self-duality."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra import Family, Polynomial
from ..diffop import GreensCertificate, LinearDiffOp, Section, adjoint, compose, greens_identity
from ..syzygy import (ParametrizationReport, check_parametrization, compatibility_conditions,
                      equivalent_row_modules)
from .operators import (affine_restricted_spencer, airy2, airy_substitution, cosserat2_parametrization,
                        divergence_sym2, exterior_derivative, hodge_star, killing2_restricted_spencer,
                        killing_eps, riemann_cc_eps2)


def sign_normalize(op: LinearDiffOp, signs: list[int] | None = None) -> LinearDiffOp:
    """Multiply rows by -1 (all rows by default) to present equations with positive divergence terms."""
    signs = signs if signs is not None else [-1] * op.target_comps
    return op.scale_rows(signs)


@dataclass
class Cosserat1D:
    d1: LinearDiffOp
    equations: LinearDiffOp
    sign_normalization: list[int]
    certificate: GreensCertificate
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())


def cosserat_1d() -> Cosserat1D:
    """Adjoint of ``(ξ, ξx) -> (∂ξ - ξx, ∂ξx)``: ``∂σ = f``, ``∂μ + σ = m``."""
    d1 = affine_restricted_spencer()
    signs = [-1, -1]
    eqs = sign_normalize(adjoint(d1), signs).relabel("cosserat(1)")
    expected = LinearDiffOp(1, [["d1", "0"], ["1", "d1"]], 2)
    # generic-looking test sections for the integration-by-parts certificate
    sigma, mu = Polynomial.var(Family.POSITION, 1, 0, 3) + 2, Polynomial.var(Family.POSITION, 1, 0, 2).scale(5)
    xi, xix = Polynomial.var(Family.POSITION, 1, 0, 4), Polynomial.var(Family.POSITION, 1, 0) - 7
    cert = greens_identity(d1, Section(1, [sigma, mu]), Section(1, [xi, xix]))
    checks = {
        "equations ∂σ = f, ∂μ + σ = m": eqs == expected,
        "as many dual equations as parameters": eqs.target_comps == d1.source_comps,
        "Green identity residual is zero": cert.holds(),
        "flux equals σξ + μξx": cert.boundary_flux[0] == sigma * xi + mu * xix,
    }
    return Cosserat1D(d1, eqs, signs, cert, checks)


@dataclass
class Cosserat2:
    d1: LinearDiffOp
    equations: LinearDiffOp
    param: LinearDiffOp
    report: ParametrizationReport
    sign_normalization: list[int]
    airy_reduction: LinearDiffOp
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())


COSSERAT2_EQUATIONS = LinearDiffOp(2, [
    ["d1", "d2", "0", "0", "0", "0"],
    ["0", "0", "d1", "d2", "0", "0"],
    ["0", "1", "-1", "0", "d1", "d2"],
], 6, "cosserat(2)")
"""Rows on ``(σ11, σ12, σ21, σ22, μ1, μ2)``: the two force and one couple equilibrium."""


def cosserat_n2() -> Cosserat2:
    d1 = killing2_restricted_spencer()
    signs = [-1, -1, -1]
    eqs = sign_normalize(adjoint(d1), signs).relabel("cosserat(2)")
    param = cosserat2_parametrization()
    report = check_parametrization(eqs, param)
    reduced = compose(param, airy_substitution(), label="cosserat_param∘airy_substitution")
    classical = LinearDiffOp(2, [["d2^2"], ["-d1*d2"], ["-d1*d2"], ["d1^2"], ["0"], ["0"]], 1)
    d2 = compatibility_conditions(d1).cc_op
    checks = {
        "equations match the three equilibrium rows": eqs == COSSERAT2_EQUATIONS,
        "row 3 carries +σ12 and -σ21": eqs.entries[2][1] == 1 and eqs.entries[2][2] == -1,
        "equations ∘ param = 0": compose(eqs, param).is_zero(),
        "param is a parametrization": report.verdict,
        "adjoint(D2) also parametrizes": check_parametrization(eqs, adjoint(d2)).verdict,
        "Airy reduction: μ ≡ 0 and classical stresses": reduced == classical,
    }
    return Cosserat2(d1, eqs, param, report, signs, reduced, checks)


@dataclass
class AiryDuality:
    riemann_cc: LinearDiffOp
    adjoint_cc: LinearDiffOp
    stress_airy: LinearDiffOp
    report: ParametrizationReport
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())


# pairing σ^{ij} ε_ij over all (i, j) counts the off-diagonal strain twice
SYMMETRIC_PAIRING_2 = [Fraction(1), Fraction(1, 2), Fraction(1)]


def airy_duality_n2() -> AiryDuality:
    keps = killing_eps(2)
    cc = compatibility_conditions(keps).cc_op
    ad = adjoint(cc)
    stresses = ad.scale_rows(SYMMETRIC_PAIRING_2).relabel("airy(2)")
    div = sign_normalize(adjoint(keps)).scale_cols([1, 2, 1])
    report = check_parametrization(divergence_sym2(), airy2())
    checks = {
        "CC(killing_eps) ≡ ∂11ε22 + ∂22ε11 - 2∂12ε12": equivalent_row_modules(cc, riemann_cc_eps2()),
        "adjoint of the CC is the Airy column": stresses == airy2() or stresses == -airy2(),
        "adjoint of killing_eps is the divergence": div == divergence_sym2(),
        "divergence ∘ airy = 0": compose(divergence_sym2(), airy2()).is_zero(),
        "airy parametrizes the divergence": report.verdict,
    }
    return AiryDuality(cc, ad, stresses, report, checks)


def poincare_self_adjoint(n: int) -> dict[str, bool]:
    """``adjoint(d_r) = ± ⋆ d_{n-1-r} ⋆`` for every ``r``."""
    out = {}
    for r in range(n):
        lhs = adjoint(exterior_derivative(n, r))
        rhs = compose(hodge_star(n, n - r), compose(exterior_derivative(n, n - 1 - r), hodge_star(n, r + 1)))
        out[f"adjoint(d{r}) = ±⋆d{n - 1 - r}⋆ (n={n})"] = lhs == rhs or lhs == -rhs
    return out


def poincare_complex(n: int) -> dict[str, bool]:
    out = {}
    for r in range(n - 1):
        out[f"d{r + 1}∘d{r} = 0 (n={n})"] = compose(exterior_derivative(n, r + 1),
                                                    exterior_derivative(n, r)).is_zero()
    return out
