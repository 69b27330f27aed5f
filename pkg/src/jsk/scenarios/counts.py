"""Riemann / Weyl / Ricci compatibility-condition counts."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..jets import symbol_prolongation_rank
from .operators import MetricSpec, conformal_killing, killing


def riemann_closed(n: int) -> int:
    return n * n * (n * n - 1) // 12


def weyl_closed(n: int) -> int:
    return n * (n + 1) * (n + 2) * (n - 3) // 12


def ricci_closed(n: int) -> int:
    return n * (n + 1) // 2


@dataclass
class CountReport:
    n: int
    riemann_closed: int
    weyl_closed: int | None
    ricci_closed: int
    riemann_rank: int
    weyl_rank: int | None
    cc_by_order: dict[str, list[int]] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())


def riemann_weyl_counts(n: int, metric: MetricSpec | None = None) -> CountReport:
    """Closed-form counts against differences of exact prolongation ranks (orders 0, 1, 2)."""
    if n < 2:
        raise ValueError("n must be ≥ 2")
    metric = metric or MetricSpec.euclidean(n)
    kill = [symbol_prolongation_rank(killing(n, metric), r).cc for r in range(3)]
    by_order = {"killing": kill}
    checks = {
        "riemann: no CC at orders 0 and 1": kill[0] == 0 and kill[1] == 0,
        "riemann: rank-derived = n²(n²-1)/12": kill[2] == riemann_closed(n),
    }
    weyl_c = weyl_rank = None
    if n >= 3:
        conf = [symbol_prolongation_rank(conformal_killing(n, metric), r).cc for r in range(3)]
        by_order["conformal_killing"] = conf
        weyl_c, weyl_rank = weyl_closed(n), conf[2]
        checks["weyl: no CC at orders 0 and 1"] = conf[0] == 0 and conf[1] == 0
        checks["weyl: rank-derived = n(n+1)(n+2)(n-3)/12"] = weyl_rank == weyl_c
        checks["ricci = riemann - weyl"] = kill[2] - weyl_rank == ricci_closed(n)
    return CountReport(n, riemann_closed(n), weyl_c, ricci_closed(n), kill[2], weyl_rank, by_order, checks)
