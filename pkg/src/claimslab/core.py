"""Claims problems, weights, award vectors and the cap-balancing solver.

Every rule in the package maps a :class:`ClaimsProblem` to an
:class:`AwardVector`.  A rule must

1. hand out exactly the endowment when claims exceed it (balance),
2. return the claims untouched when the endowment covers them, and
3. never award a claimant more than she claims.

:func:`check_rule_contract` verifies those three conditions numerically and
:func:`solve_cap_lambda` / :func:`water_fill` compute the balancing level
shared by all separable directional rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "BALANCE_RTOL",
    "CONTRACT_RTOL",
    "PARALLEL_RTOL",
    "AwardVector",
    "ClaimsProblem",
    "ContractReport",
    "SolverError",
    "WeightVector",
    "check_rule_contract",
    "contract_tol",
    "is_parallel",
    "is_wellformed",
    "solve_cap_lambda",
    "water_fill",
]

BALANCE_RTOL = 1e-12
CONTRACT_RTOL = 1e-9
PARALLEL_RTOL = 1e-9

_BISECT_MAX_ITER = 200
_BRACKET_LIMIT = 2.0**64


class SolverError(RuntimeError):
    """Raised when a cap family cannot be balanced against the endowment."""


def _frozen(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {arr.tolist()}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ClaimsProblem:
    """An endowment ``E`` to be divided among claimants with claims ``c``.

    Problems need not be wellformed; rules answer ``c`` whenever the
    endowment covers the total claim.
    """

    endowment: float
    claims: np.ndarray

    def __init__(self, endowment: float, claims: Sequence[float]):
        endowment = float(endowment)
        claims = _frozen(claims, "claims")
        if not np.isfinite(endowment) or endowment < 0:
            raise ValueError(f"endowment must be a finite nonnegative number, got {endowment}")
        if claims.size < 2:
            raise ValueError("a claims problem needs at least two claimants")
        if np.any(claims < 0):
            raise ValueError(f"claims must be nonnegative, got {claims.tolist()}")
        object.__setattr__(self, "endowment", endowment)
        object.__setattr__(self, "claims", claims)

    @property
    def n(self) -> int:
        return int(self.claims.size)

    @property
    def total_claim(self) -> float:
        return float(self.claims.sum())

    def with_claim(self, i: int, value: float) -> "ClaimsProblem":
        claims = self.claims.copy()
        claims[i] = value
        return ClaimsProblem(self.endowment, claims)

    def scaled(self, factor: float) -> "ClaimsProblem":
        return ClaimsProblem(factor * self.endowment, factor * self.claims)

    def to_dict(self) -> dict:
        return {"endowment": self.endowment, "claims": self.claims.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "ClaimsProblem":
        return cls(data["endowment"], data["claims"])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClaimsProblem):
            return NotImplemented
        return self.endowment == other.endowment and np.array_equal(self.claims, other.claims)

    def __hash__(self) -> int:
        return hash((self.endowment, self.claims.tobytes()))

    def __repr__(self) -> str:
        return f"ClaimsProblem(E={self.endowment:g}, c={self.claims.tolist()})"


@dataclass(frozen=True, eq=False)
class WeightVector:
    """A strictly positive point of the unit simplex."""

    weights: np.ndarray

    def __init__(self, weights: Sequence[float]):
        weights = _frozen(weights, "weights")
        if weights.size < 2:
            raise ValueError("a weight needs at least two components")
        if np.any(weights <= 0):
            raise ValueError(f"weights must be strictly positive, got {weights.tolist()}")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 (got sum {weights.sum()!r})")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def normalized(cls, values: Sequence[float]) -> "WeightVector":
        """Project a positive vector onto the simplex by rescaling."""
        arr = np.asarray(values, dtype=float)
        return cls(arr / arr.sum())

    @property
    def n(self) -> int:
        return int(self.weights.size)

    @property
    def is_uniform(self) -> bool:
        return bool(np.allclose(self.weights, 1.0 / self.n, rtol=0, atol=1e-12))

    def permuted(self, perm: Sequence[int]) -> "WeightVector":
        return WeightVector(self.weights[np.asarray(perm)])

    def __getitem__(self, idx):
        return self.weights[idx]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightVector):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    def __hash__(self) -> int:
        return hash(self.weights.tobytes())

    def __repr__(self) -> str:
        return f"WeightVector({[round(x, 6) for x in self.weights.tolist()]})"


@dataclass(frozen=True, eq=False)
class AwardVector:
    """Awards produced by a rule, with the balancing level when one exists."""

    awards: np.ndarray
    lam: Optional[float] = None

    def __init__(self, awards: Sequence[float], lam: Optional[float] = None):
        object.__setattr__(self, "awards", _frozen(awards, "awards"))
        object.__setattr__(self, "lam", None if lam is None else float(lam))

    @property
    def n(self) -> int:
        return int(self.awards.size)

    def __getitem__(self, idx):
        return self.awards[idx]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        lam = "" if self.lam is None else f", lam={self.lam:g}"
        return f"AwardVector({self.awards.tolist()}{lam})"


@dataclass(frozen=True)
class ContractReport:
    passed: bool
    violated_equation: Optional[int] = None
    offending_index: Optional[int] = None
    discrepancy: float = 0.0


def contract_tol(p: ClaimsProblem) -> float:
    return CONTRACT_RTOL * (1.0 + p.endowment)


def is_wellformed(p: ClaimsProblem) -> bool:
    return p.total_claim >= p.endowment


def check_rule_contract(
    rule_output: AwardVector | Sequence[float], p: ClaimsProblem, tol: Optional[float] = None
) -> ContractReport:
    """Report the first breach of claims-boundedness, balance or pass-through.

    The checks run in the order bound, balance, pass-through; the equation
    numbers in the report are 3, 1 and 2 respectively.
    """
    z = rule_output.awards if isinstance(rule_output, AwardVector) else np.asarray(rule_output, float)
    if z.shape != p.claims.shape:
        raise ValueError(f"award vector has {z.size} entries, problem has {p.n} claimants")
    if tol is None:
        tol = contract_tol(p)
    if tol <= 0:
        raise ValueError("tol must be positive")

    excess = z - p.claims
    bad = np.flatnonzero(excess > tol)
    if bad.size:
        k = int(bad[0])
        return ContractReport(False, 3, k, float(excess[k]))
    negative = np.flatnonzero(z < -tol)
    if negative.size:
        k = int(negative[0])
        return ContractReport(False, 3, k, float(-z[k]))

    if p.total_claim > p.endowment:
        gap = abs(float(z.sum()) - p.endowment)
        if gap > tol:
            return ContractReport(False, 1, None, gap)
    else:
        diff = np.abs(z - p.claims)
        bad = np.flatnonzero(diff > tol)
        if bad.size:
            k = int(bad[0])
            return ContractReport(False, 2, k, float(diff[k]))
    return ContractReport(True)


def water_fill(claims: np.ndarray, weights: np.ndarray, endowment: float) -> Tuple[float, np.ndarray]:
    """Closed-form solution of ``sum(min(c_i, lam * w_i)) = E``.

    Claimants are saturated in increasing order of ``c_i / w_i`` until the
    remaining endowment spread over the remaining weight no longer reaches
    the next breakpoint.  ``weights`` need only be positive, not normalized.

    Returns:
        ``(lam, awards)``.  When the endowment covers every claim, ``lam`` is
        the largest breakpoint and ``awards`` equals ``claims``.
    """
    claims = np.asarray(claims, dtype=float)
    weights = np.asarray(weights, dtype=float)
    ratios = claims / weights
    order = np.argsort(ratios, kind="stable")
    remaining_e = float(endowment)
    remaining_w = float(weights.sum())
    lam = float(ratios[order[-1]]) if order.size else 0.0
    for pos, k in enumerate(order):
        level = remaining_e / remaining_w
        if ratios[k] >= level:
            lam = level
            break
        remaining_e -= claims[k]
        # recompute from the tail instead of subtracting to avoid cancellation
        remaining_w = float(weights[order[pos + 1:]].sum()) if pos + 1 < order.size else 0.0
        if remaining_w <= 0.0:
            lam = float(ratios[k])
            break
    awards = np.minimum(claims, lam * weights)
    return lam, awards


def solve_cap_lambda(
    cap_at: Callable[[int, float], float], p: ClaimsProblem
) -> Tuple[float, AwardVector]:
    """Find the level ``lam`` with ``sum_i min(c_i, cap_at(i, lam)) = E``.

    The level is bracketed by doubling from 1 and then bisected; caps must be
    nondecreasing and continuous in ``lam``, vanish at 0 and eventually
    exceed every claim.

    Raises:
        ValueError: the endowment covers the claims, so no level is needed.
        SolverError: the cap family never reaches the endowment.
    """
    claims = p.claims
    e = p.endowment
    if p.total_claim <= e:
        raise ValueError("cap balancing needs total claims above the endowment")
    n = p.n
    tol = BALANCE_RTOL * (1.0 + e)

    def awards_at(lam: float) -> np.ndarray:
        return np.array([min(claims[i], cap_at(i, lam)) for i in range(n)])

    def residual(lam: float) -> float:
        return float(awards_at(lam).sum()) - e

    lo, hi = 0.0, 1.0
    while residual(hi) < 0:
        lo, hi = hi, 2.0 * hi
        if hi > _BRACKET_LIMIT:
            raise SolverError(
                f"cap family does not reach E={e:g} below lambda=2^64; "
                f"cap sum at 2^64 is {residual(_BRACKET_LIMIT) + e:g}"
            )

    best_lam, best_res = hi, residual(hi)
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        r = residual(mid)
        if abs(r) < abs(best_res):
            best_lam, best_res = mid, r
        if abs(r) <= tol:
            break
        if r < 0:
            lo = mid
        else:
            hi = mid
    if abs(best_res) > tol:
        raise SolverError(
            f"bisection stalled with residual {best_res:.3e} > {tol:.3e} at lambda={best_lam:.17g}"
        )
    return best_lam, AwardVector(awards_at(best_lam), best_lam)


def is_parallel(
    x: Sequence[float], y: Sequence[float], rel_tol: float = PARALLEL_RTOL
) -> Tuple[bool, Optional[float]]:
    """Test whether ``x = s * y`` for some ``s >= 0``.

    Empty vectors are parallel with scale 0.  Two zero vectors are parallel
    with scale 0.  The returned scale is the least-squares fit.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("parallelism needs vectors of equal length")
    if x.size == 0:
        return True, 0.0
    yy = float(y @ y)
    if yy == 0.0:
        return (bool(np.all(x == 0.0)), 0.0 if np.all(x == 0.0) else None)
    s = float(x @ y) / yy
    if s < 0:
        return False, None
    bound = rel_tol * (1.0 + float(np.max(np.abs(x))))
    if np.all(np.abs(x - s * y) <= bound):
        return True, s
    return False, None
