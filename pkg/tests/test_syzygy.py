from __future__ import annotations

import time

import pytest

from jsk.algebra import Family, parse_polynomial
from jsk.diffop import LinearDiffOp, ShapeMismatch, compose
from jsk.sampling import make_rng, random_operator
from jsk.scenarios.operators import BUILTIN_OPERATORS, affine_1d, airy2, cosserat2_parametrization, \
    divergence_sym2, exterior_derivative, killing, killing_eps, killing_with_christoffel, riemann_cc_eps2
from jsk.scenarios.duality import COSSERAT2_EQUATIONS
from jsk.syzygy import (POT, TOP, ModuleElement, NotAComplex, RankMismatch, check_exactness, check_parametrization,
                        compatibility_conditions, equivalent_row_modules, first_order_cc, is_complex, is_member,
                        module_groebner, normal_form, rows_of, submodule_basis, syzygy_dimension, zero_element)

from oracles import dense_syzygy_space, random_combination


def elem(n: int, *texts: str) -> ModuleElement:
    return ModuleElement([parse_polynomial(t, Family.DERIVATIVE, n) for t in texts])


# ----- Gröbner bases and normal forms -----

def test_linear_generators_are_already_a_basis():
    gb = module_groebner([elem(2, "d1"), elem(2, "d2")])
    assert set(map(str, gb.elements)) == {str(elem(2, "d1")), str(elem(2, "d2"))}


def test_contained_generator_is_dropped():
    gb = module_groebner([elem(2, "d1^2"), elem(2, "d1")])
    assert gb.elements == (elem(2, "d1"),)


def test_rank_mismatch_is_refused():
    with pytest.raises(RankMismatch):
        module_groebner([elem(2, "d1"), elem(2, "d1", "d2")])


def test_killing2_riemann_relation_annihilates_rows():
    cc = elem(2, "d2^2", "-2*d1*d2", "d1^2")
    assert compose(LinearDiffOp(2, [cc.comps]), killing(2)).is_zero()
    assert is_member(cc, compatibility_conditions(killing(2)).basis)


def test_normal_form_of_generator_and_zero():
    gb = module_groebner(rows_of(killing(2)))
    for row in rows_of(killing(2)):
        assert normal_form(row, gb).is_zero()
    assert normal_form(zero_element(2, 2), gb).is_zero()


def test_equilibrium_row_reduces_against_airy_cc():
    basis = compatibility_conditions(airy2()).basis
    assert normal_form(elem(2, "d1", "d2", "0"), basis).is_zero()


def test_normal_form_is_idempotent():
    rng = make_rng("nf-idempotent")
    for _ in range(30):
        op = random_operator(rng, 2, rng.randint(1, 3), rng.randint(1, 3), max_degree=2)
        gb = submodule_basis(rows_of(op), op.source_comps, 2, rng.choice([POT, TOP]))
        e = random_operator(rng, 2, 1, op.source_comps, max_degree=3)
        once = normal_form(rows_of(e)[0], gb)
        assert normal_form(once, gb) == once


# ----- compatibility conditions -----

def test_killing_eps_cc_is_the_strain_compatibility():
    rep = compatibility_conditions(killing_eps(2))
    assert rep.count == 1
    assert equivalent_row_modules(rep.cc_op, riemann_cc_eps2())


def test_gradient_cc_is_curl():
    rep = compatibility_conditions(exterior_derivative(2, 0))
    assert rep.count == 1
    assert equivalent_row_modules(rep.cc_op, exterior_derivative(2, 1))


def test_affine_operator_has_no_cc():
    assert compatibility_conditions(affine_1d()).count == 0


def test_zero_operator_cc_is_identity():
    rep = compatibility_conditions(LinearDiffOp.zero(2, 2, 3))
    assert equivalent_row_modules(rep.cc_op, LinearDiffOp.identity(2, 3))


def test_first_order_cc_counts_all_first_order_relations():
    d1 = first_order_cc(killing_with_christoffel(2))
    assert d1.target_comps == 10
    assert first_order_cc(d1).target_comps == 3


def test_is_complex_examples():
    assert is_complex(exterior_derivative(3, 1), exterior_derivative(3, 0))
    assert is_complex(divergence_sym2(), airy2())


def test_is_complex_shape_mismatch():
    with pytest.raises(ShapeMismatch) as info:
        is_complex(exterior_derivative(2, 0), exterior_derivative(2, 0))
    assert "cannot follow" in str(info.value)


def test_exactness_examples():
    keps = killing_eps(2)
    assert check_exactness(keps, compatibility_conditions(keps).cc_op).exact
    assert check_exactness(exterior_derivative(2, 0), exterior_derivative(2, 1)).exact
    missing = check_exactness(exterior_derivative(2, 0), LinearDiffOp.zero(2, 2, 1))
    assert not missing.exact and len(missing.missing) == 1


def test_exactness_needs_a_complex():
    with pytest.raises(NotAComplex):
        check_exactness(exterior_derivative(2, 0), LinearDiffOp(2, [["1", "0"]]))


def test_parametrization_airy():
    assert check_parametrization(divergence_sym2(), airy2()).verdict


def test_parametrization_cosserat_first_order():
    assert check_parametrization(COSSERAT2_EQUATIONS, cosserat2_parametrization()).verdict


def test_gradient_like_column_does_not_parametrize_divergence():
    grad = LinearDiffOp(2, [["d1"], ["d2"], ["0"]])
    rep = check_parametrization(divergence_sym2(), grad)
    assert not rep.composes and not rep.verdict


def test_parametrization_verdict_implies_complex():
    rng = make_rng("param-implies-complex")
    for _ in range(20):
        p = random_operator(rng, 2, rng.randint(1, 3), rng.randint(1, 2), max_degree=1)
        d = compatibility_conditions(p).cc_op
        if d.target_comps == 0:
            continue
        rep = check_parametrization(d, p)
        assert rep.verdict
        assert is_complex(d, p)


# ----- oracle cross-checks -----

def test_cc_composes_to_zero_for_builtins_and_random():
    rng = make_rng("cc-zero")
    ops = [f() for f in BUILTIN_OPERATORS.values()]
    ops += [random_operator(rng, 2, rng.randint(1, 4), rng.randint(1, 3), max_degree=2) for _ in range(15)]
    for op in ops:
        rep = compatibility_conditions(op)
        if rep.count:
            assert compose(rep.cc_op, op).is_zero(), op.label


def test_random_oracle_syzygies_reduce_to_zero():
    rng = make_rng("oracle-syzygies")
    for name in ("killing2", "killing2_eps", "divergence2", "airy2", "d0_2", "spencer_killing2"):
        op = BUILTIN_OPERATORS[name]()
        gens = compatibility_conditions(op).cc_op
        span = submodule_basis(rows_of(gens), op.target_comps, op.n)
        space = dense_syzygy_space(op, 4)
        for _ in range(50):
            g = random_combination(rng, space, op.target_comps, op.n)
            assert is_member(g, span), name


@pytest.mark.parametrize("name", sorted(BUILTIN_OPERATORS))
def test_syzygy_dimension_matches_dense_kernel_builtin(name):
    op = BUILTIN_OPERATORS[name]()
    assert op.n <= 2
    for d in range(5):
        assert syzygy_dimension(op, d) == len(dense_syzygy_space(op, d)), d


def test_syzygy_dimension_matches_dense_kernel_random():
    rng = make_rng("oracle-dims")
    start = time.perf_counter()
    for _ in range(30):
        n = rng.randint(1, 2)
        op = random_operator(rng, n, rng.randint(1, 4), rng.randint(1, 3), max_degree=2)
        for d in range(5):
            assert syzygy_dimension(op, d) == len(dense_syzygy_space(op, d))
    assert time.perf_counter() - start < 60
