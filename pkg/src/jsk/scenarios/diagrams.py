"""The two commutative diagrams: 1D affine group and plane isometries."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from ..algebra import monomials_of_degree, monomials_up_to, rank_exact
from ..diffop import LinearDiffOp
from ..jets import SequenceDims, jet_dim, polynomial_solutions, spencer_bundle_dims, strict_jet_dim
from ..syzygy import check_exactness, compatibility_conditions, first_order_cc, is_complex
from .operators import affine_1d, affine_restricted_spencer, killing, killing2_restricted_spencer, \
    killing_with_christoffel


@dataclass
class DiagramReport:
    name: str
    spencer: SequenceDims
    middle: SequenceDims
    janet: SequenceDims
    theta_dim: int
    column_sums: list[bool]
    compositions_zero: dict[str, bool]
    checks: dict[str, bool] = field(default_factory=dict)
    operators: dict[str, LinearDiffOp] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())


def _prolonged_rows(op: LinearDiffOp, q: int):
    """Every derivative ``∂^nu`` of every row that stays within jet order ``q``."""
    for a in range(op.target_comps):
        s = op.row_order(a)
        if s < 0:
            continue
        for nu in monomials_up_to(op.n, q - s) if q >= s else []:
            yield a, nu


def system_jet_dim(op: LinearDiffOp, q: int) -> int:
    """``dim R_q``: order-``q`` jets satisfying the system and its prolongations up to order ``q``."""
    n, m = op.n, op.source_comps
    cols = [(b, beta) for b in range(m) for beta in monomials_up_to(n, q)]
    cidx = {c: t for t, c in enumerate(cols)}
    mat = []
    for a, nu in _prolonged_rows(op, q):
        row = [Fraction(0)] * len(cols)
        for b, entry in enumerate(op.entries[a]):
            for alpha, c in entry.terms.items():
                row[cidx[(b, tuple(x + y for x, y in zip(alpha, nu)))]] += c
        mat.append(row)
    return len(cols) - (rank_exact(mat) if mat else 0)


def symbol_dim(op: LinearDiffOp, q: int) -> int:
    """``dim g_q``: strict order-``q`` jets killed by the symbols of all prolongations."""
    n, m = op.n, op.source_comps
    cols = [(b, beta) for b in range(m) for beta in monomials_of_degree(n, q)]
    cidx = {c: t for t, c in enumerate(cols)}
    mat = []
    for a in range(op.target_comps):
        s = op.row_order(a)
        if s < 0 or s > q:
            continue
        for nu in monomials_of_degree(n, q - s):
            row = [Fraction(0)] * len(cols)
            for b, entry in enumerate(op.entries[a]):
                for alpha, c in entry.homogeneous_part(s).terms.items():
                    row[cidx[(b, tuple(x + y for x, y in zip(alpha, nu)))]] += c
            mat.append(row)
    return len(cols) - (rank_exact(mat) if mat else 0)


def janet_chain(op: LinearDiffOp, max_steps: int = 6) -> list[LinearDiffOp]:
    """``[D, D1, D2, ...]``: each next operator collects all first-order CC of the previous one."""
    chain = [op]
    for _ in range(max_steps):
        nxt = first_order_cc(chain[-1], label=f"D{len(chain)}")
        if nxt.target_comps == 0:
            break
        chain.append(nxt)
    return chain


def _spencer_chain(d1: LinearDiffOp, max_steps: int = 6) -> list[LinearDiffOp]:
    chain = [d1]
    for _ in range(max_steps):
        cc = compatibility_conditions(chain[-1], label=f"D{len(chain) + 1}").cc_op
        if cc.target_comps == 0:
            break
        chain.append(cc)
    return chain


def build_diagram(name: str, lie_op: LinearDiffOp, janet_op: LinearDiffOp, q: int,
                  restricted_d1: LinearDiffOp, theta_bound: int) -> DiagramReport:
    """Assemble the three rows from the engine.

    ``lie_op`` is the Lie operator, ``janet_op`` its involutive form of order
    ``q`` (same solutions), ``restricted_d1`` the restricted Spencer operator
    on the parametric jets of ``R_q``.
    """
    n, m = lie_op.n, lie_op.source_comps
    checks: dict[str, bool] = {}
    theta = polynomial_solutions(lie_op, theta_bound).dim
    theta_janet = polynomial_solutions(janet_op, theta_bound).dim
    checks["theta: Lie and involutive operators agree"] = theta == theta_janet

    # Janet row: F0 from the involutive operator, then first-order CC until exhausted
    r_q = system_jet_dim(janet_op, q)
    chain = janet_chain(janet_op)
    janet = SequenceDims(tuple(op.target_comps for op in chain), head=m)
    checks["janet: F0 = dim J_q - dim R_q"] = janet.dims[0] == jet_dim(n, m, q) - r_q
    for a, b in zip(chain, chain[1:]):
        checks[f"janet: {b.label} generates every CC of {a.label}"] = check_exactness(a, b).exact
    checks[f"janet: {chain[-1].label} has no CC"] = compatibility_conditions(chain[-1]).count == 0

    # Spencer row: tensor-product count, cross-checked with the restricted operator
    g_next = symbol_dim(janet_op, q + 1)
    checks["spencer: finite type (g_{q+1} = 0)"] = g_next == 0
    checks["spencer: dim R_q = dim Θ"] = r_q == theta
    spencer = SequenceDims(tuple(comb(n, r) * r_q for r in range(n + 1)))
    schain = _spencer_chain(restricted_d1)
    engine_row = (restricted_d1.source_comps,) + tuple(op.target_comps for op in schain)
    checks["spencer: restricted operator reproduces the row"] = engine_row == spencer.dims
    checks["spencer: restricted D1 kernel = Θ"] = polynomial_solutions(restricted_d1, theta_bound).dim == theta

    middle = spencer_bundle_dims(n, m, q)

    compositions: dict[str, bool] = {}
    for a, b in zip(chain, chain[1:]):
        compositions[f"{b.label}∘{a.label}"] = is_complex(b, a)
    for a, b in zip(schain, schain[1:]):
        compositions[f"{b.label}∘{a.label} (Spencer)"] = is_complex(b, a)
    for k, v in compositions.items():
        checks[f"composition zero: {k}"] = v

    padded = janet.dims + (0,) * (len(middle.dims) - len(janet.dims))
    column_sums = [mid == sp + ja for mid, sp, ja in zip(middle.dims, spencer.dims, padded)]
    checks["columns: middle = spencer + janet"] = all(column_sums) and len(middle.dims) == len(spencer.dims)
    checks["columns: middle head = janet head"] = middle.head == janet.head
    for label, row in (("spencer", spencer), ("middle", middle), ("janet", janet)):
        checks[f"euler: {label} row"] = row.euler_sum == 0

    operators = {"lie": lie_op, "janet_D": janet_op}
    for k, op in enumerate(chain[1:], start=1):
        operators[f"janet_D{k}"] = op
    for k, op in enumerate(schain, start=1):
        operators[f"restrictedSpencerD{k}"] = op
    return DiagramReport(name, spencer, middle, janet, theta, column_sums, compositions, checks, operators)


def affine_diagram() -> DiagramReport:
    lie = affine_1d()
    return build_diagram("affine", lie, lie, 2, affine_restricted_spencer(), theta_bound=3)


def killing_n2_diagram() -> DiagramReport:
    return build_diagram("killing2", killing(2), killing_with_christoffel(2), 2,
                         killing2_restricted_spencer(), theta_bound=2)
