"""Named scenarios: parameter validation and report assembly."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from ..algebra import AlgebraError, Family, Polynomial, RationalFunction, parse_polynomial
from ..diffop import Section
from ..jets import polynomial_solutions, vector_bracket
from ..report import Report, UsageError, dims_payload
from ..sampling import make_rng, random_ratfunc, random_section, seed_from_env
from .counts import riemann_weyl_counts
from .diagrams import DiagramReport, affine_diagram, killing_n2_diagram
from .duality import airy_duality_n2, cosserat_1d, cosserat_n2, poincare_complex, poincare_self_adjoint
from .gauge import (GaugePotential, JacobiViolation, StructureConstants, affine_gauge_demo,
                    affine_structure_constants, elations_em, gauging_matrix, is_gradient, maurer_cartan,
                    perturb)
from .operators import MetricSpec, conformal_killing, exterior_derivative, hodge_star, killing

MC_TRIALS = 20
ELATION_TRIALS = 50


@dataclass(frozen=True)
class ScenarioDef:
    build: Callable[[dict[str, Any]], Report]
    defaults: dict[str, Any]


def _x(n: int, text: str) -> Polynomial:
    return parse_polynomial(text, Family.POSITION, n)


def _diagram_report(name: str, d: DiagramReport) -> Report:
    rep = Report(name)
    rep.add("diagram", "diagram", {
        "theta": d.theta_dim,
        "spencer": dims_payload(d.spencer),
        "middle": dims_payload(d.middle),
        "janet": dims_payload(d.janet),
        "columnSums": d.column_sums,
    })
    rep.value("dim Θ", d.theta_dim)
    rep.add("Spencer row", "dims", dims_payload(d.spencer))
    rep.add("middle row (fullSpencer bundles)", "dims", dims_payload(d.middle))
    rep.add("Janet row", "dims", dims_payload(d.janet))
    rep.value("compositions", {k: v for k, v in d.compositions_zero.items()})
    for title, op in d.operators.items():
        rep.operator(title, op)
    rep.check_all(d.checks)
    return rep


def _affine(params: dict[str, Any]) -> Report:
    return _diagram_report("affine", affine_diagram())


def _killing2(params: dict[str, Any]) -> Report:
    return _diagram_report("killing2", killing_n2_diagram())


def _cosserat1d(params: dict[str, Any]) -> Report:
    c = cosserat_1d()
    rep = Report("cosserat1d")
    rep.operator("restrictedSpencerD1", c.d1)
    rep.operator("equations (sign-normalized adjoint)", c.equations)
    rep.value("sign normalization", c.sign_normalization)
    rep.add("Green certificate", "certificate", {
        "leftPairing": str(c.certificate.left_pairing),
        "adjointPairing": str(c.certificate.adjoint_pairing),
        "boundaryFlux": [str(v) for v in c.certificate.boundary_flux],
        "residual": str(c.certificate.residual),
    })
    rep.check_all(c.checks)
    return rep


def _cosserat2(params: dict[str, Any]) -> Report:
    c = cosserat_n2()
    rep = Report("cosserat2")
    rep.value("scope", "plane (n = 2) only; the adjoint(D2) parametrization is not verified for other n")
    rep.operator("restrictedSpencerD1", c.d1)
    rep.operator("equations (sign-normalized adjoint)", c.equations)
    rep.value("sign normalization", c.sign_normalization)
    rep.operator("first-order parametrization", c.param)
    rep.operator("CC of the parametrization", c.report.cc_of_param.cc_op)
    rep.operator("Airy reduction", c.airy_reduction)
    rep.value("parametrization", {
        "composes": c.report.composes,
        "ccOfParamGeneratedByD": c.report.cc_of_param_generated_by_d,
        "dRowsAreCcOfParam": c.report.d_rows_are_cc_of_param,
    })
    rep.check_all(c.checks)
    return rep


def _airy(params: dict[str, Any]) -> Report:
    a = airy_duality_n2()
    rep = Report("airy")
    rep.value("convention", "ε-form strain (ε12 = ε21), stresses paired with weights (1, 1/2, 1)")
    rep.operator("CC of killing_eps(2)", a.riemann_cc)
    rep.operator("adjoint of the CC", a.adjoint_cc)
    rep.operator("Airy stresses", a.stress_airy)
    rep.value("parametrization", {
        "composes": a.report.composes,
        "ccOfParamGeneratedByD": a.report.cc_of_param_generated_by_d,
        "dRowsAreCcOfParam": a.report.d_rows_are_cc_of_param,
    })
    rep.check_all(a.checks)
    return rep


def _metric(params: dict[str, Any]) -> MetricSpec:
    try:
        return MetricSpec.from_signature(params["n"], params["signature"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _counts(params: dict[str, Any]) -> Report:
    n = params["n"]
    if n < 2:
        raise UsageError("n must be ≥ 2")
    c = riemann_weyl_counts(n, _metric(params))
    rep = Report("counts", params)
    rep.value("riemann", {"closedForm": c.riemann_closed, "rankDerived": c.riemann_rank})
    if c.weyl_closed is not None:
        rep.value("weyl", {"closedForm": c.weyl_closed, "rankDerived": c.weyl_rank})
        rep.value("ricci", {"closedForm": c.ricci_closed, "riemannMinusWeyl": c.riemann_rank - c.weyl_rank})
    rep.value("CC counts by order 0, 1, 2", c.cc_by_order)
    rep.check_all(c.checks)
    return rep


def _conformal(params: dict[str, Any]) -> Report:
    n, bound = params["n"], params["degreeBound"]
    if n < 2:
        raise UsageError("n must be ≥ 2")
    if bound < 2:
        raise UsageError("degree bound must be ≥ 2")
    metric = _metric(params)
    op = conformal_killing(n, metric)
    dims = [polynomial_solutions(op, d).dim for d in range(bound + 1)]
    kdims = [polynomial_solutions(killing(n, metric), d).dim for d in range(1, bound + 1)]
    rep = Report("conformal", params)
    rep.operator("conformal Killing", op)
    rep.value("solution dims by degree bound", dims)
    rep.value("Killing solution dims (bound ≥ 1)", kdims)
    rep.check("Killing: dim = n(n+1)/2 at every bound ≥ 1", all(k == n * (n + 1) // 2 for k in kdims))
    if n >= 3:
        expected = (n + 1) * (n + 2) // 2
        rep.check("conformal: dim = (n+1)(n+2)/2 from bound 2 onward", all(d == expected for d in dims[2:]))
        basis = polynomial_solutions(op, bound)
        closed = all(basis.contains(vector_bracket(a, b))
                     for i, a in enumerate(basis.basis) for b in basis.basis[i + 1:])
        rep.check("conformal: solutions closed under the bracket", closed)
    else:
        rep.check("conformal (n=2): dimension grows with the bound",
                  all(a < b for a, b in zip(dims, dims[1:])))
    return rep


def _potential_payload(A: GaugePotential) -> list[list[str]]:
    return [[str(v) for v in row] for row in A.A]


def _maurer_cartan(params: dict[str, Any]) -> Report:
    n = params["n"]
    if n < 1:
        raise UsageError("n must be ≥ 1")
    c = affine_structure_constants()
    rep = Report("maurer-cartan", params)
    rep.value("structure constants c[τ][ρ][σ]", [[[str(v) for v in row] for row in plane] for plane in c.c])
    a1, a2 = RationalFunction(_x(n, "x1 + 1")), RationalFunction(_x(n, "x1^2"))
    demo = affine_gauge_demo(a1, a2)
    rep.value("A = a⁻¹da for a1 = x1 + 1, a2 = x1^2", _potential_payload(demo.A))
    rep.check("F(a⁻¹da) = 0 for a1 = x1 + 1, a2 = x1^2", demo.flat)

    rng = make_rng("maurer-cartan")
    flat = 0
    for _ in range(MC_TRIALS):
        b1 = random_ratfunc(rng, n, nonzero=True)
        b2 = random_ratfunc(rng, n)
        flat += maurer_cartan(affine_gauge_demo(b1, b2).A, c).is_zero()
    rep.value("random group elements", {"seed": seed_from_env(), "trials": MC_TRIALS, "flat": flat})
    rep.check(f"F(a⁻¹da) = 0 for {MC_TRIALS} random elements", flat == MC_TRIALS)

    if n >= 2:
        bumped = perturb(demo.A, 0, 1, RationalFunction(_x(n, "x1")))
        F = maurer_cartan(bumped, c)
        rep.value("curvature after perturbing A[0][1] by x1",
                  {f"F^{t + 1}_{i + 1}{j + 1}": str(v) for (t, i, j), v in sorted(F.F.items())})
        rep.check("perturbed potential has F ≠ 0", not F.is_zero())
        abelian = maurer_cartan(bumped, StructureConstants.zero(2))
        rep.check("c = 0: F = dA", all(
            v == bumped.A[t][j].diff(i) - bumped.A[t][i].diff(j) for (t, i, j), v in abelian.F.items()))

    # su(2)-type constants with one entry altered keep antisymmetry but break Jacobi
    eps = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[k][i][j], eps[k][j][i] = 1, -1
    StructureConstants(3, eps)
    eps[0][0][1], eps[0][1][0] = 1, -1
    try:
        StructureConstants(3, eps)
        rejected = False
    except JacobiViolation:
        rejected = True
    rep.check("Jacobi validation rejects perturbed constants", rejected)
    return rep


def _gauging(params: dict[str, Any]) -> Report:
    rep = Report("gauging")
    mat = gauging_matrix(2)
    rep.value("∂f_2/∂a (rows f, f_x, f_xx)", [[str(v) for v in row] for row in mat])
    a1, a2 = RationalFunction(_x(1, "x1 + 1")), RationalFunction(_x(1, "x1^2"))
    demo = affine_gauge_demo(a1, a2)
    rep.value("gauging rank", demo.gauging_rank)
    rep.value("A for a1 = x1 + 1, a2 = x1^2", _potential_payload(demo.A))
    rep.check_all(demo.checks, "a1 = x1 + 1, a2 = x1^2: ")
    ident = affine_gauge_demo(RationalFunction.one(1), RationalFunction.zero(1))
    rep.check("a1 = 1, a2 = 0: A = 0", all(v.is_zero() for row in ident.A.A for v in row))
    rep.check("a1 = 1, a2 = 0: flat", ident.flat)
    try:
        affine_gauge_demo(RationalFunction.zero(1), a2)
        refused = False
    except AlgebraError:
        refused = True
    rep.check("a1 = 0 is refused", refused)
    return rep


def _elations(params: dict[str, Any]) -> Report:
    if params["n"] != 4:
        raise UsageError("elations-em requires n = 4")
    metric = _metric(params)
    rep = Report("elations-em", params)
    a = Section(4, ["x2", 0, 0, 0])
    em = elations_em(metric, a)
    nonzero = {f"F{i + 1}{j + 1}": str(em.F[i][j]) for i in range(4) for j in range(i + 1, 4)
               if not em.F[i][j].is_zero()}
    rep.value("F for a = (x2, 0, 0, 0)", nonzero)
    rep.check("a = (x2, 0, 0, 0): F12 = -4 and all others 0", nonzero == {"F12": "-4"})
    rep.check_all(em.checks, "a = (x2, 0, 0, 0): ")

    grad = Section(4, [_x(4, "2*x1*x3"), _x(4, "3*x2^2"), _x(4, "x1^2 - 1"), _x(4, "0")])
    rep.check("gradient a gives F = 0",
              all(v.is_zero() for row in elations_em(metric, grad).F for v in row))

    rng = make_rng("elations-em")
    ok = iff = 0
    for _ in range(ELATION_TRIALS):
        s = random_section(rng, 4, 4)
        r = elations_em(metric, s)
        ok += r.verdict
        iff += all(v.is_zero() for row in r.F for v in row) == is_gradient(s)
    rep.value("random covectors", {"seed": seed_from_env(), "trials": ELATION_TRIALS, "allChecksPass": ok, "flatIffGradient": iff})
    rep.check(f"trace, antisymmetry and dF = 0 for {ELATION_TRIALS} random a", ok == ELATION_TRIALS)
    rep.check(f"F = 0 iff a is a gradient ({ELATION_TRIALS} random a)", iff == ELATION_TRIALS)
    return rep


def _poincare(params: dict[str, Any]) -> Report:
    n = params["n"]
    if not 1 <= n <= 6:
        raise UsageError("poincare requires 1 ≤ n ≤ 6")
    rep = Report("poincare", params)
    for r in range(n):
        rep.operator(f"d{r}", exterior_derivative(n, r))
    for k in range(n + 1):
        rep.operator(f"⋆ on {k}-forms", hodge_star(n, k))
    rep.check_all(poincare_complex(n))
    rep.check_all(poincare_self_adjoint(n))
    return rep


SCENARIOS: dict[str, ScenarioDef] = {
    "affine": ScenarioDef(_affine, {}),
    "cosserat1d": ScenarioDef(_cosserat1d, {}),
    "killing2": ScenarioDef(_killing2, {}),
    "cosserat2": ScenarioDef(_cosserat2, {}),
    "airy": ScenarioDef(_airy, {}),
    "counts": ScenarioDef(_counts, {"n": 4, "signature": "euclid"}),
    "conformal": ScenarioDef(_conformal, {"n": 4, "signature": "minkowski", "degreeBound": 3}),
    "maurer-cartan": ScenarioDef(_maurer_cartan, {"n": 2}),
    "gauging": ScenarioDef(_gauging, {}),
    "elations-em": ScenarioDef(_elations, {"n": 4, "signature": "minkowski"}),
    "poincare": ScenarioDef(_poincare, {"n": 3}),
}


def resolve_params(name: str, given: dict[str, Any]) -> dict[str, Any]:
    """Fill defaults and reject parameters the scenario does not take."""
    if name not in SCENARIOS:
        raise UsageError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
    defaults = SCENARIOS[name].defaults
    extra = sorted(k for k, v in given.items() if v is not None and k not in defaults)
    if extra:
        raise UsageError(f"scenario {name!r} does not take {', '.join(extra)}")
    return {k: given.get(k) if given.get(k) is not None else v for k, v in defaults.items()}


def run_scenario(name: str, **params: Any) -> Report:
    resolved = resolve_params(name, params)
    rep = SCENARIOS[name].build(resolved)
    rep.params = resolved
    return rep
