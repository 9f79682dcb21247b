"""Supplier-retailer Cournot model with rationed deliveries.

Retailers order quantities from a supplier holding ``E`` units.  When the
orders exceed the stock, a claims rule decides the deliveries, and each
retailer's payoff is the Cournot profit of what she actually receives.
A rule that keeps the unconstrained Cournot equilibrium an equilibrium of
this composed game removes any incentive to inflate orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .core import AwardVector, ClaimsProblem
from .rules import RuleSpec, allocate

__all__ = [
    "CournotMarket",
    "DeviationReport",
    "best_deviation",
    "best_response_equilibrium",
    "composed_payoff",
    "equilibrium_preservation_report",
    "nash_equilibrium",
    "payoff",
    "preserved",
]

GRID_POINTS = 512


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class CournotMarket:
    """Linear inverse demand ``P(Q) = intercept - slope * Q``."""

    intercept: float
    slope: float
    marginal_costs: tuple

    def __post_init__(self):
        costs = tuple(float(x) for x in self.marginal_costs)
        object.__setattr__(self, "marginal_costs", costs)
        if self.slope <= 0:
            raise ValueError("slope must be positive")
        if any(c < 0 for c in costs):
            raise ValueError("marginal costs must be nonnegative")
        if len(costs) < 2:
            raise ValueError("a market needs at least two retailers")
        if self.intercept <= max(costs):
            raise ValueError("intercept must exceed every marginal cost")

    @property
    def n(self) -> int:
        return len(self.marginal_costs)

    @classmethod
    def parse(cls, text: str) -> "CournotMarket":
        """Parse ``a=12,b=1,costs=0,0,0``."""
        head, _, costs = text.partition("costs=")
        fields = dict(part.split("=") for part in head.strip(",").split(",") if part)
        return cls(float(fields["a"]), float(fields["b"]),
                   tuple(float(x) for x in costs.split(",") if x))

    def to_text(self) -> str:
        return f"a={self.intercept:g},b={self.slope:g},costs=" + ",".join(f"{c:g}" for c in self.marginal_costs)


@dataclass(frozen=True)
class DeviationReport:
    retailer: int
    equilibrium_order: float
    best_order: float
    equilibrium_payoff: float
    best_payoff: float
    gain: float
    received: AwardVector

    def to_dict(self) -> dict:
        return {
            "retailer": self.retailer,
            "equilibriumOrder": self.equilibrium_order,
            "bestOrder": self.best_order,
            "equilibriumPayoff": self.equilibrium_payoff,
            "bestPayoff": self.best_payoff,
            "gain": self.gain,
            "received": self.received.awards.tolist(),
        }


def payoff(m: CournotMarket, q: Sequence[float]) -> np.ndarray:
    """Cournot profits, with the unit margin floored at zero."""
    q = np.asarray(q, dtype=float)
    if q.size != m.n:
        raise ValueError(f"need {m.n} quantities, got {q.size}")
    if np.any(q < 0):
        raise ValueError("quantities must be nonnegative")
    price = m.intercept - m.slope * q.sum()
    return q * np.maximum(0.0, price - np.asarray(m.marginal_costs))


def nash_equilibrium(m: CournotMarket) -> np.ndarray:
    """Closed-form equilibrium, dropping retailers priced out of the market.

    With active set ``A`` each active retailer produces
    ``(a - (|A|+1) c_i + sum_A c) / (b (|A|+1))``; retailers with a
    nonpositive quantity are removed until the set is stable.
    """
    costs = np.asarray(m.marginal_costs)
    active = np.ones(m.n, dtype=bool)
    while True:
        k = int(active.sum())
        q = np.zeros(m.n)
        q[active] = (m.intercept - (k + 1) * costs[active] + costs[active].sum()) / (m.slope * (k + 1))
        drop = active & (q <= 0)
        if not drop.any():
            return q
        active &= ~drop


def best_response_equilibrium(m: CournotMarket, tol: float = 1e-13, max_rounds: int = 10_000) -> np.ndarray:
    """Equilibrium by round-robin best responses (independent of the closed form)."""
    costs = np.asarray(m.marginal_costs)
    q = np.zeros(m.n)
    for _ in range(max_rounds):
        moved = 0.0
        for i in range(m.n):
            others = q.sum() - q[i]
            br = max(0.0, (m.intercept - costs[i] - m.slope * others) / (2 * m.slope))
            moved = max(moved, abs(br - q[i]))
            q[i] = br
        if moved <= tol:
            return q
    raise ConvergenceError(f"best responses did not settle within {max_rounds} rounds")


def composed_payoff(m: CournotMarket, rule: RuleSpec, endowment: float, orders: Sequence[float]) -> np.ndarray:
    """Payoffs when deliveries are the rule's awards for the orders."""
    z = allocate(rule, ClaimsProblem(endowment, orders))
    return payoff(m, z.awards)


def best_deviation(
    m: CournotMarket,
    rule: RuleSpec,
    endowment: float,
    base: Sequence[float],
    retailer: int,
    search_cap: float | None = None,
    tol: float = 1e-9,
) -> DeviationReport:
    """Best unilateral order of one retailer against ``base``.

    A 512-point grid on ``[0, search_cap]`` locates the best region; the
    objective is continuous but kinked wherever rationing starts to bind,
    so the grid winner is refined by bounded Brent search on its two
    neighbouring cells.
    """
    base = np.asarray(base, dtype=float)
    if search_cap is None:
        search_cap = 10.0 * endowment
    if search_cap <= base[retailer]:
        raise ValueError("search_cap must exceed the base order")

    def value(t: float) -> float:
        orders = base.copy()
        orders[retailer] = t
        return float(composed_payoff(m, rule, endowment, orders)[retailer])

    grid = np.linspace(0.0, search_cap, GRID_POINTS)
    grid = np.union1d(grid, [base[retailer]])
    values = np.array([value(t) for t in grid])
    k = int(np.argmax(values))
    best_t, best_v = float(grid[k]), float(values[k])
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    if hi > lo:
        res = minimize_scalar(lambda t: -value(t), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-10 * (1 + search_cap)})
        if -res.fun > best_v:
            best_t, best_v = float(res.x), float(-res.fun)

    eq_v = value(float(base[retailer]))
    gain = best_v - eq_v
    if -tol < gain < 0:
        gain = 0.0
    orders = base.copy()
    orders[retailer] = best_t
    received = allocate(rule, ClaimsProblem(endowment, orders))
    return DeviationReport(retailer, float(base[retailer]), best_t, eq_v, best_v, gain, received)


def equilibrium_preservation_report(
    m: CournotMarket, rule: RuleSpec, endowment: float, search_cap: float | None = None
) -> List[DeviationReport]:
    """Best deviation of every retailer from the unconstrained equilibrium."""
    eq = nash_equilibrium(m)
    if endowment < eq.sum():
        raise ValueError(
            f"endowment {endowment:g} is below the equilibrium total {eq.sum():g}; "
            "preservation is only asked for supplies covering the equilibrium"
        )
    return [best_deviation(m, rule, endowment, eq, i, search_cap) for i in range(m.n)]


def preserved(reports: Sequence[DeviationReport], rel_tol: float = 1e-6) -> bool:
    """No retailer gains more than ``rel_tol`` times her equilibrium payoff."""
    return all(r.gain <= rel_tol * r.equilibrium_payoff for r in reports)
