from __future__ import annotations

from math import comb

import pytest

from jsk.algebra import Family, Polynomial, monomials_up_to, parse_polynomial
from jsk.diffop import LinearDiffOp, Section, ShapeMismatch, apply
from jsk.jets import (JetSection, is_holonomic, jet_dim, jets_from_params, polynomial_solutions, prolong,
                      restricted_spencer, spencer, spencer_bundle_dims, strict_jet_dim, symbol_prolongation_rank,
                      vector_bracket)
from jsk.sampling import make_rng, random_nonzero_polynomial, random_section
from jsk.scenarios.operators import (MetricSpec, affine_1d, affine_restricted_spencer, conformal_killing,
                                     killing, killing2_restricted_spencer, killing2_spencer_data)


def x(text: str, n: int = 1) -> Polynomial:
    return parse_polynomial(text, Family.POSITION, n)


def jets_1d(*values: str) -> JetSection:
    return JetSection(1, 1, len(values) - 1, {(0, (k,)): x(v) for k, v in enumerate(values)})


# ----- counting -----

@pytest.mark.parametrize("args, expected", [((1, 1, 2), 3), ((2, 2, 2), 12), ((3, 4, 0), 4), ((2, 1, 0), 1)])
def test_jet_dim(args, expected):
    assert jet_dim(*args) == expected


@pytest.mark.parametrize("args", [(0, 1, 1), (1, 0, 1), (1, 1, -1)])
def test_jet_dim_rejects_invalid_sizes(args):
    with pytest.raises(ValueError):
        jet_dim(*args)


def test_strict_jet_dim():
    assert strict_jet_dim(2, 3, 2) == 9


# ----- prolongation and the Spencer operator -----

def test_prolong_cubic():
    assert prolong(Section(1, ["x1^3"]), 2) == jets_1d("x1^3", "3*x1^2", "6*x1")


def test_prolong_constant():
    f = prolong(Section(2, [7]), 3)
    assert all(v.is_zero() for (k, mu), v in f.entries.items() if sum(mu) > 0)


def test_prolong_affine_group_element():
    assert prolong(Section(1, ["3/2*x1 - 5"]), 2) == jets_1d("3/2*x1 - 5", "3/2", "0")


def test_spencer_of_non_holonomic_section():
    img = spencer(jets_1d("x1^3", "3*x1^2", "0"))
    assert (img[(0, 0, (0,))], img[(0, 0, (1,))]) == (x("0"), x("6*x1"))


def test_spencer_measures_wrong_first_derivative():
    img = spencer(jets_1d("x1^2", "0", "0"))
    assert (img[(0, 0, (0,))], img[(0, 0, (1,))]) == (x("2*x1"), x("0"))


def test_spencer_needs_order_one():
    with pytest.raises(ValueError):
        spencer(jets_1d("x1"))


def test_restricted_spencer_affine():
    f = jets_1d("x1^2 + 1", "x1^3")
    img = restricted_spencer(f)
    assert img[(0, 0, (0,))] == x("2*x1 - x1^3")
    assert img[(0, 0, (1,))] == x("3*x1^2")
    # the same map written as an operator on (ξ, ξ_x)
    assert affine_restricted_spencer() == LinearDiffOp(1, [["d1", "-1"], ["0", "d1"]])


def test_restricted_spencer_vanishes_on_group_jets():
    assert restricted_spencer(jets_1d("2/3 - 4*x1", "-4")).is_zero()


def test_restricted_spencer_killing2_components():
    expected = LinearDiffOp(2, [
        ["d1", "0", "0"], ["d2", "0", "-1"], ["0", "d1", "1"], ["0", "d2", "0"], ["0", "0", "d1"], ["0", "0", "d2"],
    ])
    assert killing2_restricted_spencer() == expected
    params, jet_map = killing2_spencer_data()
    u = Section(2, ["x1*x2", "x2^2", "x1"])
    f = jets_from_params(2, 2, 1, u, jet_map)
    img = restricted_spencer(f)
    values = apply(killing2_restricted_spencer(), u).values
    order = [(i, k, mu) for k, mu in params for i in range(2)]
    # rows of the operator are the Spencer components at the parametric jets
    assert [img[key] for key in order] == list(values)


def test_spencer_of_prolongation_vanishes():
    rng = make_rng("spencer-prolong")
    for _ in range(100):
        n, m, q = rng.randint(1, 3), rng.randint(1, 2), rng.randint(1, 3)
        g = random_section(rng, n, m, max_degree=4)
        assert spencer(prolong(g, q)).is_zero()


def test_spencer_kernel_is_holonomic():
    rng = make_rng("spencer-converse")
    for _ in range(100):
        n, m, q = rng.randint(1, 3), rng.randint(1, 2), rng.randint(1, 3)
        f = prolong(random_section(rng, n, m, max_degree=4), q)
        assert spencer(f).is_zero() and f == prolong(f.base(), q)
        # disturb one slot: no longer in the kernel, no longer holonomic
        key = rng.choice(sorted(k for k in f.entries if sum(k[1]) > 0))
        bump = random_nonzero_polynomial(rng, Family.POSITION, n, 2, 2)
        g = JetSection(n, m, q, {**f.entries, key: f[key] + bump})
        assert not spencer(g).is_zero() and not is_holonomic(g)


# ----- symbol prolongation ranks -----

def test_killing2_prolongation_has_one_cc():
    # order-3 ξ-jets (8) against order-2 Ω-jets (9)
    pr = symbol_prolongation_rank(killing(2), 2)
    assert (pr.source_jets, pr.target_jets, pr.rank) == (8, 9, 8)
    assert pr.cc == 1


def test_killing4_prolongation_counts_riemann():
    assert symbol_prolongation_rank(killing(4), 2).cc == 20


def test_conformal4_prolongation_counts_weyl():
    pr = symbol_prolongation_rank(conformal_killing(4, MetricSpec.minkowski()), 2)
    assert pr.cc == 10
    assert pr.independent_target_jets == 9 * comb(5, 2)


def test_no_cc_below_order_two():
    for r in (0, 1):
        assert symbol_prolongation_rank(killing(3), r).cc == 0


# ----- Spencer bundles -----

def test_spencer_bundles_plane_isometries():
    row = spencer_bundle_dims(2, 2, 2)
    assert row.dims == (12, 16, 6) and row.head == 2


def test_spencer_bundles_affine_line():
    row = spencer_bundle_dims(1, 1, 2)
    assert row.dims == (3, 2) and row.full == (1, 3, 2)


def _bundle_oracle(n: int, m: int, q: int) -> list[int]:
    """C_r = C(n,r) dim J_q - dim im δ_r, with im δ_r from exactness of the δ-sequence."""
    def s(k: int) -> int:
        return comb(n + k - 1, k)

    def im(r: int, qq: int) -> int:
        return 0 if r == 0 else comb(n, r - 1) * s(qq + 1) - im(r - 1, qq + 1)

    return [comb(n, r) * jet_dim(n, 1, q) * m - m * im(r, q) for r in range(n + 1)]


def test_spencer_bundles_match_delta_exactness_oracle():
    for n in range(1, 4):
        for m in (1, 2):
            for q in range(0, 4):
                assert list(spencer_bundle_dims(n, m, q).dims) == _bundle_oracle(n, m, q), (n, m, q)


def test_spencer_bundles_at_order_zero():
    # δ maps onto Λ^r ⊗ E for r ≥ 1, so only C_0 = E survives
    assert spencer_bundle_dims(3, 2, 0).dims == (2, 0, 0, 0)


def test_spencer_bundle_euler_sums_vanish():
    for n in range(1, 4):
        for q in range(0, 4):
            assert spencer_bundle_dims(n, 2, q).euler_sum == 0


# ----- polynomial solutions and the bracket -----

def test_affine_solutions():
    sols = polynomial_solutions(affine_1d(), 3)
    assert sols.dim == 2
    assert sols.contains(Section(1, ["1"])) and sols.contains(Section(1, ["x1"]))
    assert not sols.contains(Section(1, ["x1^2"]))


def test_killing_solution_dims():
    assert polynomial_solutions(killing(2), 2).dim == 3
    assert polynomial_solutions(killing(3), 1).dim == 6
    assert polynomial_solutions(killing(3), 2).dim == 6


def test_conformal_killing_minkowski_has_15_parameters():
    assert polynomial_solutions(conformal_killing(4, MetricSpec.minkowski()), 2).dim == 15


def test_conformal_trace_vanishes_n2():
    op = conformal_killing(2)
    trace = [op.entries[0][j] + op.entries[2][j] for j in range(2)]
    assert all(t.is_zero() for t in trace)


def test_conformal_plane_is_not_finite_type():
    dims = [polynomial_solutions(conformal_killing(2), b).dim for b in (2, 3, 4)]
    assert dims[0] < dims[1] < dims[2]


def test_solution_dims_become_stationary():
    assert [polynomial_solutions(affine_1d(), b).dim for b in range(1, 5)] == [2, 2, 2, 2]
    for n in (2, 3):
        assert [polynomial_solutions(killing(n), b).dim for b in (1, 2, 3)] == [n * (n + 1) // 2] * 3
    for n in (3, 4):
        dims = [polynomial_solutions(conformal_killing(n), b).dim for b in (2, 3)]
        assert dims == [(n + 1) * (n + 2) // 2] * 2


def test_bracket_dilatation_translation():
    assert vector_bracket(Section(1, ["x1"]), Section(1, [1])) == Section(1, [-1])


def test_bracket_with_itself_vanishes():
    xi = Section(2, ["x1*x2", "x2^3"])
    assert vector_bracket(xi, xi).is_zero()


def test_bracket_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        vector_bracket(Section(2, ["x1"]), Section(2, ["x1", "x2"]))


def test_rotation_and_translation_stay_in_killing_span():
    sols = polynomial_solutions(killing(2), 2)
    assert sols.contains(vector_bracket(Section(2, ["-x2", "x1"]), Section(2, [1, 0])))


@pytest.mark.parametrize("op, bound", [(affine_1d(), 3), (killing(2), 2), (killing(3), 2)])
def test_solution_space_closed_under_bracket(op, bound):
    sols = polynomial_solutions(op, bound)
    for a in sols.basis:
        for b in sols.basis:
            br = vector_bracket(a, b)
            assert apply(op, br).is_zero()
            assert sols.contains(br)


def test_bracket_jacobi_identity():
    rng = make_rng("jacobi")
    for _ in range(30):
        n = rng.randint(1, 3)
        a, b, c = (random_section(rng, n, n, max_degree=3) for _ in range(3))
        total = (vector_bracket(a, vector_bracket(b, c)) + vector_bracket(b, vector_bracket(c, a))
                 + vector_bracket(c, vector_bracket(a, b)))
        assert total.is_zero()


def test_monomial_enumeration_size():
    assert len(monomials_up_to(3, 2)) == jet_dim(3, 1, 2)
