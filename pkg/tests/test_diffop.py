from __future__ import annotations

import json

import pytest

from jsk.algebra import Family, ParseError, Polynomial, parse_polynomial
from jsk.diffop import LinearDiffOp, Section, ShapeMismatch, adjoint, apply, compose, divergence, greens_identity
from jsk.sampling import make_rng, random_operator, random_section
from jsk.scenarios.operators import affine_1d, affine_restricted_spencer, airy2, divergence_sym2, \
    exterior_derivative, killing


def xs(n: int, *values) -> Section:
    return Section(n, list(values))


def test_affine_operator_on_cubic():
    assert apply(affine_1d(), xs(1, "x1^3")) == xs(1, "6*x1")


def test_killing2_kills_rotation():
    assert apply(killing(2), xs(2, "-x2", "x1")).is_zero()


def test_killing2_on_dilation_along_x1():
    assert apply(killing(2), xs(2, "x1", 0)) == xs(2, 2, 0, 0)


def test_apply_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        apply(killing(2), xs(2, "x1"))


def test_d_squared_vanishes_n2():
    assert compose(exterior_derivative(2, 1), exterior_derivative(2, 0)).is_zero()


def test_identity_composition():
    op = killing(2)
    assert compose(LinearDiffOp.identity(2, 3), op) == op


def test_divergence_after_airy_vanishes():
    assert compose(divergence_sym2(), airy2()).is_zero()


def test_compose_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        compose(killing(2), killing(2))


def test_adjoint_first_order_flips_sign():
    assert adjoint(LinearDiffOp(1, [["d1"]])) == LinearDiffOp(1, [["-d1"]])


def test_adjoint_second_order_keeps_sign():
    assert adjoint(LinearDiffOp(2, [["d1^2"]])) == LinearDiffOp(2, [["d1^2"]])


def test_adjoint_transposes_and_reflects():
    op = LinearDiffOp(2, [["d1 + 1", "d2^2"], ["0", "d1*d2 - d2"]])
    assert adjoint(op) == LinearDiffOp(2, [["-d1 + 1", "0"], ["d2^2", "d1*d2 + d2"]])


def test_adjoint_of_affine_spencer_gives_momenta_equations():
    eqs = adjoint(affine_restricted_spencer()).scale_rows([-1, -1])
    assert eqs == LinearDiffOp(1, [["d1", "0"], ["1", "d1"]])


def test_green_translation_part():
    sigma = parse_polynomial("x1^2 + 3", Family.POSITION, 1)
    xi = parse_polynomial("5*x1 - 1", Family.POSITION, 1)
    cert = greens_identity(LinearDiffOp(1, [["d1"]]), Section(1, [sigma]), Section(1, [xi]))
    assert cert.holds()
    assert cert.boundary_flux == (sigma * xi,)


def test_green_for_killing2_random():
    rng = make_rng("green-killing")
    for _ in range(10):
        cert = greens_identity(killing(2), random_section(rng, 2, 3, 2), random_section(rng, 2, 2, 2))
        assert cert.residual.is_zero()


def test_green_for_zero_operator():
    cert = greens_identity(LinearDiffOp.zero(2, 2, 1), xs(2, "x1*x2"), xs(2, "x1", "x2^2"))
    assert cert.left_pairing.is_zero() and cert.adjoint_pairing.is_zero()
    assert all(f.is_zero() for f in cert.boundary_flux)


def test_divergence_helper():
    flux = [parse_polynomial("x1*x2", Family.POSITION, 2), parse_polynomial("x2^2", Family.POSITION, 2)]
    assert divergence(2, flux) == parse_polynomial("3*x2", Family.POSITION, 2)


def _random_op(rng, n=None, target=None, source=None):
    n = n or rng.randint(1, 3)
    return random_operator(rng, n, target or rng.randint(1, 4), source or rng.randint(1, 4), max_degree=3)


def test_adjoint_is_an_involution():
    rng = make_rng("adjoint-involution")
    for _ in range(100):
        op = _random_op(rng)
        assert adjoint(adjoint(op)) == op


def test_adjoint_is_contravariant():
    rng = make_rng("adjoint-contravariance")
    for _ in range(100):
        n, a, b, c = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3)
        A = random_operator(rng, n, a, b, max_degree=2)
        B = random_operator(rng, n, b, c, max_degree=2)
        assert adjoint(compose(A, B)) == compose(adjoint(B), adjoint(A))


def test_green_residual_vanishes():
    rng = make_rng("green-random")
    for _ in range(100):
        op = _random_op(rng)
        lam = random_section(rng, op.n, op.target_comps, 3)
        xi = random_section(rng, op.n, op.source_comps, 3)
        cert = greens_identity(op, lam, xi)
        assert cert.residual.is_zero()


def test_apply_respects_composition():
    rng = make_rng("apply-compose")
    for _ in range(50):
        n, a, b, c = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3)
        A = random_operator(rng, n, a, b)
        B = random_operator(rng, n, b, c)
        s = random_section(rng, n, c, 4)
        assert apply(compose(A, B), s) == apply(A, apply(B, s))


# ----- serialization -----

def test_killing2_record():
    rec = killing(2).to_record()
    assert rec["entries"] == [["2*d1", "0"], ["d2", "d1"], ["0", "2*d2"]]
    assert (rec["n"], rec["sourceComps"], rec["targetComps"]) == (2, 2, 3)


def test_zero_operator_record():
    rec = LinearDiffOp.zero(3, 2, 2).to_record()
    assert rec["entries"] == [["0", "0"], ["0", "0"]]


def test_record_round_trip_random():
    rng = make_rng("record-roundtrip")
    for _ in range(100):
        op = _random_op(rng)
        text = json.dumps(op.to_record())
        back = LinearDiffOp.from_record(json.loads(text))
        assert back == op and back.label == op.label


def test_record_with_wrong_row_count():
    rec = killing(2).to_record()
    rec["targetComps"] = 2
    with pytest.raises(ShapeMismatch):
        LinearDiffOp.from_record(rec)


def test_operator_entries_are_derivative_polynomials():
    with pytest.raises(ParseError):
        LinearDiffOp(2, [["x1"]])
    op = LinearDiffOp(2, [[Polynomial.var(Family.DERIVATIVE, 2, 1)]])
    assert op.order == 1
