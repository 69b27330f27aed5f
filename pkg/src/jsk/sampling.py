"""Seeded random objects for property checks; ``JSK_SEED`` fixes the stream."""
from __future__ import annotations

import os
import random
from fractions import Fraction

from .algebra import Family, Polynomial, RationalFunction, monomials_up_to
from .diffop import LinearDiffOp, Section

DEFAULT_SEED = 20240601


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("JSK_SEED")
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"JSK_SEED must be an integer, got {raw!r}") from exc


def make_rng(salt: str = "", default: int = DEFAULT_SEED) -> random.Random:
    """Independent stream per ``salt`` so adding one check never shifts another's samples."""
    return random.Random(f"{seed_from_env(default)}:{salt}")


def random_coefficient(rng: random.Random, bound: int = 5, fractions: bool = True) -> Fraction:
    num = rng.choice([k for k in range(-bound, bound + 1) if k])
    den = rng.randint(1, 3) if fractions else 1
    return Fraction(num, den)


def random_polynomial(rng: random.Random, family: Family, n: int, max_degree: int = 2,
                      terms: int = 3, fractions: bool = True) -> Polynomial:
    monos = monomials_up_to(n, max_degree)
    out = {}
    for _ in range(rng.randint(0, terms)):
        out[rng.choice(monos)] = random_coefficient(rng, fractions=fractions)
    return Polynomial(family, n, out)


def random_nonzero_polynomial(rng: random.Random, family: Family, n: int, max_degree: int = 2,
                              terms: int = 3) -> Polynomial:
    while True:
        p = random_polynomial(rng, family, n, max_degree, terms)
        if not p.is_zero():
            return p


def random_operator(rng: random.Random, n: int, target: int | None = None, source: int | None = None,
                    max_degree: int = 2, terms: int = 2) -> LinearDiffOp:
    target = target if target is not None else rng.randint(1, 3)
    source = source if source is not None else rng.randint(1, 3)
    entries = [[random_polynomial(rng, Family.DERIVATIVE, n, max_degree, terms) for _ in range(source)]
               for _ in range(target)]
    return LinearDiffOp(n, entries, source, "random")


def random_section(rng: random.Random, n: int, comps: int, max_degree: int = 3, terms: int = 3) -> Section:
    return Section(n, [random_polynomial(rng, Family.POSITION, n, max_degree, terms) for _ in range(comps)])


def random_ratfunc(rng: random.Random, n: int, max_degree: int = 2, nonzero: bool = False) -> RationalFunction:
    num = random_nonzero_polynomial(rng, Family.POSITION, n, max_degree) if nonzero else \
        random_polynomial(rng, Family.POSITION, n, max_degree)
    den = random_nonzero_polynomial(rng, Family.POSITION, n, max_degree)
    return RationalFunction(num, den)
