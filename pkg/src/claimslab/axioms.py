"""Empirical axiom checkers for catalog rules.

Every checker is a falsifier: it walks a deterministic grid plus seeded
random probes and reports ``"pass"`` when nothing breaks the axiom within
tolerance.  A ``"fail"`` report carries the first violating instance, and
:func:`recheck_witness` re-evaluates the rule there from scratch.

Tolerances are relative to the endowment: a discrepancy counts when it
exceeds ``rtol * (1 + E)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import ClaimsProblem, WeightVector
from .rules import RuleSpec, allocate
from .sampling import SampleConfig, lattice_problems, random_problems, random_weight

__all__ = [
    "AlphaEstimate",
    "AxiomReport",
    "ContinuityEstimate",
    "SFGrid",
    "check_anonymity",
    "check_claims_monotonicity",
    "check_continuous_strategy_free",
    "check_homogeneity",
    "check_strategy_free",
    "cross_check_sf_alpha",
    "estimate_alpha",
    "estimate_continuity_modulus",
    "own_weight",
    "recheck_witness",
    "rule_claimant_count",
]

DEFAULT_RTOL = 1e-9


@dataclass
class AxiomReport:
    axiom: str
    rule: RuleSpec
    verdict: str
    witness: Optional[dict] = None
    samples_tested: int = 0
    seed: int = 0
    tolerance: float = DEFAULT_RTOL
    weight: Optional[WeightVector] = None
    label: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "rule": self.rule.to_text(),
            "verdict": self.verdict,
            "weight": None if self.weight is None else self.weight.weights.tolist(),
            "label": self.label,
            "witness": self.witness,
            "samplesTested": self.samples_tested,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "details": self.details,
        }


@dataclass
class AlphaEstimate:
    lower: np.ndarray
    upper: np.ndarray
    witnesses: List[Optional[dict]]
    responsive_class: str
    bracket_width: float

    def contains(self, w: WeightVector | Sequence[float], slack: float = 0.0) -> bool:
        w = w.weights if isinstance(w, WeightVector) else np.asarray(w, dtype=float)
        return bool(np.all(self.lower - slack <= w) and np.all(w <= self.upper + slack))

    def to_dict(self) -> dict:
        return {
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
            "responsiveClass": self.responsive_class,
            "bracketWidth": self.bracket_width,
            "witnesses": self.witnesses,
        }


@dataclass
class ContinuityEstimate:
    epsilon_grid: List[float]
    delta_at: List[float]
    max_observed_ratio: float
    pairs_tested: int = 0
    witness: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return all(d > 0 for d in self.delta_at)

    def to_dict(self) -> dict:
        return {
            "epsilonGrid": self.epsilon_grid,
            "deltaAt": self.delta_at,
            "maxObservedRatio": self.max_observed_ratio,
            "pairsTested": self.pairs_tested,
            "verdict": "pass" if self.passed else "fail",
            "witness": self.witness,
        }


@dataclass(frozen=True)
class SFGrid:
    """Deviation grid for the strategy-freedom check.

    For each level ``lam`` and endowment between ``lam`` and
    ``e_max_factor * lam``, the deviating claim runs geometrically from
    its smallest admissible value up to ``c_max_factor * E``.  ``probes``
    lists explicit ``(i, lam, E, c_i)`` tuples tried before everything else.
    """

    lambdas: Sequence[float] = (3.0, 0.25, 1.0, 4.0)
    e_steps: int = 5
    e_max_factor: float = 4.0
    c_max_factor: float = 10.0
    random_probes: int = 10_000
    seed: int = 0
    rtol: float = DEFAULT_RTOL
    probes: Sequence[Tuple[int, float, float, float]] = ()


def rule_claimant_count(rule: RuleSpec, default: int = 3) -> int:
    if rule.kind in ("nonCharLiteral", "nonCharRepaired", "responsiveSFLiteral", "responsiveSFRepaired"):
        return 3
    if rule.weight is not None:
        return rule.weight.n
    cf = rule.cap_family
    if cf is not None:
        if cf.weight is not None:
            return cf.weight.n
        if cf.table is not None:
            return len(cf.table)
    if rule.independent_set:
        return rule.independent_set[0].n
    if rule.fallback is not None and rule.fallback.weight is not None:
        return rule.fallback.weight.n
    return default


def own_weight(rule: RuleSpec, n: Optional[int] = None) -> WeightVector:
    """The weight a rule is built around (uniform when it has none)."""
    n = n or rule_claimant_count(rule)
    if rule.kind in ("cea", "ceaKappa"):
        return rule.weight_for(n)
    if rule.kind == "separableDirectional" and rule.cap_family.kind == "powerLaw":
        return rule.cap_family.weight or WeightVector.uniform(n)
    if rule.kind == "patched" and rule.independent_set:
        return rule.independent_set[0]
    return WeightVector.uniform(n)


def _tol(rtol: float, e: float) -> float:
    return rtol * (1.0 + e)


def _problem_dict(p: ClaimsProblem) -> dict:
    return p.to_dict()


# -- standard axioms ------------------------------------------------------------------

def check_homogeneity(rule: RuleSpec, samples: SampleConfig = SampleConfig(),
                      rtol: float = DEFAULT_RTOL) -> AxiomReport:
    """Compare ``z(tE, tc)`` with ``t z(E, c)`` for every sampled scale ``t``."""
    n = rule_claimant_count(rule, samples.n)
    problems = lattice_problems(n) + list(
        random_problems(samples.rng(1), n, samples.count, samples.claim_scale))
    tested = 0
    for p in problems:
        z = allocate(rule, p).awards
        for t in samples.scales:
            tested += 1
            zt = allocate(rule, p.scaled(t)).awards
            gap = float(np.max(np.abs(zt - t * z)))
            if gap > rtol * t * (1.0 + p.endowment):
                return AxiomReport("homogeneity", rule, "fail", {
                    "problem": _problem_dict(p), "scale": t, "awards": z.tolist(),
                    "scaledAwards": zt.tolist(), "discrepancy": gap,
                }, tested, samples.seed, rtol)
    return AxiomReport("homogeneity", rule, "pass", None, tested, samples.seed, rtol)


def check_claims_monotonicity(rule: RuleSpec, samples: SampleConfig = SampleConfig(),
                              rtol: float = DEFAULT_RTOL,
                              probes: Sequence[Tuple[ClaimsProblem, int, float]] = ()) -> AxiomReport:
    """Raise one claim at a time and watch that claimant's award.

    ``probes`` are explicit ``(problem, claimant, raised_claim)`` triples
    checked before the sampled ones.
    """
    n = rule_claimant_count(rule, samples.n)
    rng = samples.rng(2)

    def cases():
        yield from probes
        for p in lattice_problems(n):
            for i in range(n):
                yield p, i, p.claims[i] + 1.0
        for p in random_problems(rng, n, samples.count, samples.claim_scale):
            i = int(rng.integers(n))
            bump = float(rng.choice([1e-6, 1e-3, 0.1, 1.0, 10.0])) * samples.claim_scale * rng.uniform()
            yield p, i, p.claims[i] + max(bump, 1e-9)

    tested = 0
    for p, i, raised in cases():
        tested += 1
        before = allocate(rule, p).awards[i]
        after = allocate(rule, p.with_claim(i, raised)).awards[i]
        drop = float(before - after)
        if drop > _tol(rtol, p.endowment):
            return AxiomReport("claims-monotonicity", rule, "fail", {
                "problem": _problem_dict(p), "claimant": i, "raisedClaim": float(raised),
                "awardBefore": float(before), "awardAfter": float(after), "discrepancy": drop,
            }, tested, samples.seed, rtol)
    return AxiomReport("claims-monotonicity", rule, "pass", None, tested, samples.seed, rtol)


def check_anonymity(rule: RuleSpec, samples: SampleConfig = SampleConfig(),
                    rtol: float = DEFAULT_RTOL) -> AxiomReport:
    """Relabel claimants and compare awards.

    Rules carrying a non-uniform weight are checked with the weight
    relabelled together with the claims; the report's label says which
    variant ran.
    """
    n = rule_claimant_count(rule, samples.n)
    joint = rule.weight_bearing
    label = "joint-permutation" if joint else "plain"
    rng = samples.rng(3)
    perms = [list(s) for s in itertools.permutations(range(n))] if n <= 4 else None
    problems = lattice_problems(n) + list(
        random_problems(rng, n, samples.count, samples.claim_scale))
    tested = 0
    for p in problems:
        z = allocate(rule, p).awards
        sigma = perms[int(rng.integers(len(perms)))] if perms else list(rng.permutation(n))
        permuted_rule = rule.permuted(sigma) if joint else rule
        zs = allocate(permuted_rule, ClaimsProblem(p.endowment, p.claims[sigma])).awards
        tested += 1
        # z_sigma(i)(E, c) must equal z_i(E, c^sigma)
        gap = float(np.max(np.abs(z[sigma] - zs)))
        if gap > _tol(rtol, p.endowment):
            return AxiomReport("anonymity", rule, "fail", {
                "problem": _problem_dict(p), "permutation": [int(s) for s in sigma],
                "awards": z.tolist(), "permutedAwards": zs.tolist(), "discrepancy": gap,
            }, tested, samples.seed, rtol, label=label)
    return AxiomReport("anonymity", rule, "pass", None, tested, samples.seed, rtol, label=label)


# -- strategy-freedom -------------------------------------------------------------------

def _sf_points(w: np.ndarray, grid: SFGrid):
    n = w.size
    for probe in grid.probes:
        yield tuple(probe)
    for lam in grid.lambdas:
        for e in np.linspace(lam, grid.e_max_factor * lam, grid.e_steps):
            for i in range(n):
                lo = e - lam * (1.0 - w[i])
                c_max = grid.c_max_factor * e
                c = lo
                while c < c_max:
                    yield i, lam, float(e), float(c)
                    c *= 2.0
                yield i, lam, float(e), float(c_max)
    rng = np.random.default_rng([grid.seed, 11])
    for _ in range(grid.random_probes):
        lam = float(math.exp(rng.uniform(math.log(0.01), math.log(100.0))))
        i = int(rng.integers(n))
        e = lam if rng.uniform() < 0.3 else lam * rng.uniform(1.0, grid.e_max_factor)
        lo = e - lam * (1.0 - w[i])
        u = rng.uniform()
        if u < 0.1:
            c = lo
        elif u < 0.2:
            c = lo * (1 + 1e-9)
        else:
            c = lo * math.exp(rng.uniform(0.0, math.log(grid.c_max_factor * e / lo)))
        yield i, lam, float(e), float(c)


def check_strategy_free(rule: RuleSpec, w: WeightVector, grid: SFGrid = SFGrid()) -> AxiomReport:
    """Check that a lone deviator never disturbs claims proportional to ``w``.

    At every grid point the others claim ``lam * w_{-i}``, the endowment
    covers ``lam`` in total and the deviator claims at least what keeps the
    problem wellformed; the others' awards must equal their claims.
    """
    wv = w.weights
    n = wv.size
    tested = 0
    for i, lam, e, ci in _sf_points(wv, grid):
        claims = lam * wv
        claims[i] = ci
        p = ClaimsProblem(e, claims)
        z = allocate(rule, p).awards
        tested += 1
        off = np.delete(np.arange(n), i)
        gap = float(np.max(np.abs(z[off] - lam * wv[off])))
        if gap > _tol(grid.rtol, e):
            return AxiomReport("strategy-freedom", rule, "fail", {
                "claimant": int(i), "lambda": lam, "endowment": e, "claim": ci,
                "problem": _problem_dict(p), "awards": z.tolist(), "discrepancy": gap,
            }, tested, grid.seed, grid.rtol, weight=w)
    return AxiomReport("strategy-freedom", rule, "pass", None, tested, grid.seed, grid.rtol, weight=w)


def check_continuous_strategy_free(
    rule: RuleSpec,
    w: WeightVector,
    epsilons: Sequence[float] = (0.1, 0.01),
    probe: SampleConfig = SampleConfig(count=1000),
    delta0: float = 1.0,
    halvings: int = 20,
) -> AxiomReport:
    """Search, per ``epsilon``, for a ``delta`` that keeps near-proportional claims whole.

    Probes put the others' claims within ``delta`` (sup norm) of the
    least-squares multiple ``lam * w_{-i}``, take ``E >= lam`` and a deviating
    claim that keeps the problem wellformed, then require the others' awards
    to stay within ``epsilon`` of their claims.  ``delta`` is halved from
    ``delta0`` until a probe batch passes; the check fails when no ``delta``
    down to ``delta0 / 2**halvings`` works for some ``epsilon``.
    """
    wv = w.weights
    n = wv.size
    tested = 0
    delta_at = []
    for k_eps, eps in enumerate(epsilons):
        found = None
        last_witness = None
        for k in range(halvings + 1):
            delta = delta0 * 2.0**-k
            rng = np.random.default_rng([probe.seed, 21, k_eps, k])
            witness = None
            for _ in range(probe.count):
                lam = float(math.exp(rng.uniform(math.log(0.25), math.log(4.0))))
                i = int(rng.integers(n))
                off = np.delete(np.arange(n), i)
                if rng.uniform() < 0.3:
                    d = np.zeros(n - 1)
                    d[rng.integers(n - 1)] = rng.choice([-1.0, 1.0]) * delta * 0.99
                else:
                    d = rng.uniform(-1.0, 1.0, n - 1) * delta * rng.uniform(0.5, 0.999)
                others = np.maximum(lam * wv[off] + d, 0.0)
                fit = float(others @ wv[off]) / float(wv[off] @ wv[off])
                if fit <= 0 or np.max(np.abs(fit * wv[off] - others)) >= delta:
                    continue
                e = fit if rng.uniform() < 0.5 else fit * rng.uniform(1.0, 3.0)
                floor = max(0.0, e - float(others.sum()))
                slack = float(rng.choice([0.0, 0.01, 1.0, 10.0])) * fit * rng.uniform()
                claims = np.empty(n)
                claims[off] = others
                claims[i] = floor + slack
                p = ClaimsProblem(e, claims)
                if p.total_claim < e:
                    continue
                z = allocate(rule, p).awards
                tested += 1
                gap = float(np.max(np.abs(z[off] - others)))
                if gap >= eps:
                    witness = {
                        "epsilon": eps, "delta": delta, "claimant": i, "lambda": fit,
                        "problem": _problem_dict(p), "awards": z.tolist(), "discrepancy": gap,
                    }
                    break
            if witness is None:
                found = delta
                break
            last_witness = witness
        if found is None:
            delta_at.append(0.0)
            return AxiomReport("continuous-strategy-freedom", rule, "fail", last_witness, tested,
                               probe.seed, eps, weight=w,
                               details={"epsilons": list(epsilons), "deltaAt": delta_at})
        delta_at.append(found)
    return AxiomReport("continuous-strategy-freedom", rule, "pass", None, tested, probe.seed,
                       min(epsilons), weight=w,
                       details={"epsilons": list(epsilons), "deltaAt": delta_at})


# -- continuity ----------------------------------------------------------------------------

def _continuity_pairs(rule: RuleSpec, e: float, n: int, samples: SampleConfig, radii):
    """Pairs ``(c, c + d)`` of claims vectors at each radius.

    Besides random pairs this includes pairs that break an exact tie between
    two claims, cross the thresholds ``E/n`` and ``E/2``, or leave an exactly
    proportional (D-related) profile of a weight attached to the rule; jumps
    of piecewise rules sit on those sets.
    """
    rng = samples.rng(31)
    weights = [own_weight(rule, n)]
    if rule.kind == "patched":
        weights = list(rule.independent_set) or weights
    per_radius = max(samples.count // len(radii), 8)
    for r in radii:
        for _ in range(per_radius):
            kind = rng.integers(5)
            c = rng.uniform(0, 2.0 * e, n)
            if kind == 1:
                a, b = rng.choice(n, 2, replace=False)
                c[a] = c[b]
                d = np.zeros(n)
                d[a] = r * rng.choice([-1.0, 1.0])
            elif kind == 2:
                a = rng.integers(n)
                c[a] = rng.choice([e / n, e / 2.0])
                d = np.zeros(n)
                d[a] = -r
            elif kind == 3:
                w = weights[int(rng.integers(len(weights)))].weights
                i = int(rng.integers(n))
                lam = e * rng.uniform(0.3, 1.0)
                c = lam * w
                c[i] = max(e - lam * (1 - w[i]), lam * w[i]) * rng.uniform(1.01, 3.0)
                d = np.zeros(n)
                j = int(rng.choice(np.delete(np.arange(n), i)))
                d[j] = r * rng.choice([-1.0, 1.0])
            else:
                d = rng.uniform(-1.0, 1.0, n)
                d *= r / np.max(np.abs(d))
            c2 = np.maximum(c + d, 0.0)
            if c.sum() < e or c2.sum() < e or np.max(np.abs(c2 - c)) == 0:
                continue
            yield r, ClaimsProblem(e, c), ClaimsProblem(e, c2)


def estimate_continuity_modulus(
    rule: RuleSpec,
    endowment: float,
    samples: SampleConfig = SampleConfig(count=4000),
    epsilons: Sequence[float] = (0.1, 0.01),
    radii: Sequence[float] = tuple(10.0**-k for k in range(0, 8)),
) -> ContinuityEstimate:
    """Probe uniform claims continuity of ``z(E, .)`` at a fixed endowment.

    ``delta_at[k]`` is the largest radius below which every sampled pair
    moved the awards by less than ``epsilons[k]`` (0 if none).  The ratio
    is the largest award change over claim change seen (sup norms).
    """
    if endowment <= 0:
        raise ValueError("continuity is probed at a positive endowment")
    n = rule_claimant_count(rule, samples.n)
    radii = sorted(radii, reverse=True)
    worst_at = {r: 0.0 for r in radii}
    max_ratio = 0.0
    tested = 0
    witness = None
    for r, p, q in _continuity_pairs(rule, endowment, n, samples, radii):
        dz = float(np.max(np.abs(allocate(rule, p).awards - allocate(rule, q).awards)))
        dc = float(np.max(np.abs(p.claims - q.claims)))
        tested += 1
        worst_at[r] = max(worst_at[r], dz)
        ratio = dz / dc
        if ratio > max_ratio:
            max_ratio = ratio
            witness = {"claims": p.claims.tolist(), "perturbed": q.claims.tolist(),
                       "endowment": endowment, "awardChange": dz, "claimChange": dc}
    delta_at = []
    for eps in epsilons:
        best = 0.0
        # largest radius such that it and every smaller radius stay under eps
        for r in reversed(radii):
            if worst_at[r] >= eps:
                break
            best = r
        delta_at.append(best)
    return ContinuityEstimate(list(epsilons), delta_at, max_ratio, tested, witness)


# -- guarantee levels --------------------------------------------------------------------

def _alpha_structured(n: int, i: int, rho: float, w: np.ndarray, rng: np.random.Generator):
    """Adversarial problems for claimant ``i`` at guarantee level ``rho``."""
    for e in (1.0, 6.0):
        target = rho * e
        claims_i = [target * (1 - eta) for eta in (0.0, 1e-6, 1e-3, 0.05, 0.3, 0.7)]
        claims_i += [target * (1 + eta) for eta in (1e-3, 0.5, 2.0, 10.0)]
        off = np.delete(np.arange(n), i)
        profiles = [np.full(n - 1, 1.0 / (n - 1)), w[off] / w[off].sum()]
        for k in range(n - 1):
            prof = np.full(n - 1, 1e-3)
            prof[k] = 1.0
            profiles.append(prof / prof.sum())
        profiles.append(rng.dirichlet(np.ones(n - 1)))
        for ci in claims_i:
            if ci <= 0:
                continue
            for mult in (1.0, 1.5, 2.0, 10.0, 100.0, 1000.0):
                rest = max(mult * e - ci, 0.0)
                for prof in profiles:
                    c = np.empty(n)
                    c[i] = ci
                    c[off] = rest * prof
                    if c.sum() >= e:
                        yield ClaimsProblem(e, c)
            # deviator-type problems: others proportional to the weight
            for lam in (e, 0.5 * e):
                c = lam * w.copy()
                c[i] = ci
                if c.sum() >= e:
                    yield ClaimsProblem(e, c)


def estimate_alpha(
    rule: RuleSpec,
    bracket_width: float = 1e-3,
    search: SampleConfig = SampleConfig(count=2000),
    rtol: float = DEFAULT_RTOL,
) -> AlphaEstimate:
    """Bracket, per claimant, the largest guaranteed share of the endowment.

    Level ``rho`` is refuted for claimant ``i`` by a wellformed problem with
    ``z_i < min(c_i, rho * E)``.  Bisection on ``rho`` over ``[0, 1]``:
    a refutation lowers ``upper``, an exhausted search raises ``lower``.
    """
    if bracket_width <= 0:
        raise ValueError("bracket_width must be positive")
    n = rule_claimant_count(rule, search.n)
    w = own_weight(rule, n).weights
    fixed = lattice_problems(n) + list(
        random_problems(search.rng(41), n, search.count, search.claim_scale))
    fixed_e = np.array([p.endowment for p in fixed])
    fixed_c = np.array([p.claims for p in fixed])
    fixed_z = np.array([allocate(rule, p).awards for p in fixed])
    fixed_tol = rtol * (1.0 + fixed_e)

    def refute(i: int, rho: float) -> Optional[dict]:
        bound = np.minimum(fixed_c[:, i], rho * fixed_e)
        bad = np.flatnonzero(fixed_z[:, i] < bound - fixed_tol)
        if bad.size:
            k = int(bad[0])
            return {"rho": rho, "claimant": i, "problem": fixed[k].to_dict(),
                    "awards": fixed_z[k].tolist(), "bound": float(bound[k])}
        rng = np.random.default_rng([search.seed, 42, i])
        for p in _alpha_structured(n, i, rho, w, rng):
            z = allocate(rule, p).awards
            bound_p = min(p.claims[i], rho * p.endowment)
            if z[i] < bound_p - _tol(rtol, p.endowment):
                return {"rho": rho, "claimant": i, "problem": p.to_dict(),
                        "awards": z.tolist(), "bound": float(bound_p)}
        return None

    lower = np.zeros(n)
    upper = np.ones(n)
    witnesses: List[Optional[dict]] = [None] * n
    for i in range(n):
        top = refute(i, 1.0)
        if top is None:
            lower[i] = 1.0
            continue
        witnesses[i] = top
        lo, hi = 0.0, 1.0
        while hi - lo > bracket_width:
            mid = 0.5 * (lo + hi)
            found = refute(i, mid)
            if found is None:
                lo = mid
            else:
                hi = mid
                witnesses[i] = found
        lower[i], upper[i] = lo, hi

    margin = 2 * n * bracket_width
    mid_sum = float(((lower + upper) / 2).sum())
    if abs(mid_sum - 1.0) <= margin:
        cls = "individuallyUnresponsive"
    elif float(upper.sum()) < 1.0 - margin:
        cls = "individuallyResponsive"
    else:
        cls = "undetermined"
    return AlphaEstimate(lower, upper, witnesses, cls, bracket_width)


def cross_check_sf_alpha(
    rule: RuleSpec,
    w: WeightVector,
    grid: SFGrid = SFGrid(),
    alpha: Optional[AlphaEstimate] = None,
    bracket_width: float = 1e-3,
) -> AxiomReport:
    """Check that strategy-freedom for ``w`` holds exactly when the guarantee levels equal ``w``.

    Only meaningful for individually unresponsive rules; other rules get an
    ``"inapplicable"`` report.
    """
    if alpha is None:
        alpha = estimate_alpha(rule, bracket_width)
    details = {"alpha": alpha.to_dict()}
    if alpha.responsive_class != "individuallyUnresponsive":
        return AxiomReport("sf-alpha-equivalence", rule, "inapplicable", None, 0, grid.seed,
                           grid.rtol, weight=w, label="precondition unmet: guarantee levels do not sum to one", details=details)
    sf = check_strategy_free(rule, w, grid)
    contains = alpha.contains(w)
    details.update({"strategyFree": sf.verdict, "alphaContainsWeight": contains,
                    "sfWitness": sf.witness})
    verdict = "pass" if sf.passed == contains else "fail"
    return AxiomReport("sf-alpha-equivalence", rule, verdict, None, sf.samples_tested, grid.seed,
                       grid.rtol, weight=w, details=details)


# -- witness re-evaluation -------------------------------------------------------------------

def recheck_witness(report: AxiomReport, factor: float = 10.0) -> bool:
    """Re-evaluate the rule at a fail witness and confirm the violation.

    The violation must reappear with a discrepancy above the report's
    tolerance and within ``factor * tolerance`` of the recorded one.
    """
    if report.verdict != "fail" or report.witness is None:
        raise ValueError("only fail reports carry witnesses")
    wit = report.witness
    rule = report.rule
    rtol = report.tolerance
    if report.axiom == "strategy-freedom":
        p = ClaimsProblem.from_dict(wit["problem"])
        i = wit["claimant"]
        wv = report.weight.weights
        z = allocate(rule, p).awards
        off = np.delete(np.arange(p.n), i)
        gap = float(np.max(np.abs(z[off] - wit["lambda"] * wv[off])))
        limit = _tol(rtol, p.endowment)
    elif report.axiom == "homogeneity":
        p = ClaimsProblem.from_dict(wit["problem"])
        t = wit["scale"]
        gap = float(np.max(np.abs(allocate(rule, p.scaled(t)).awards - t * allocate(rule, p).awards)))
        limit = rtol * t * (1 + p.endowment)
    elif report.axiom == "claims-monotonicity":
        p = ClaimsProblem.from_dict(wit["problem"])
        i = wit["claimant"]
        gap = float(allocate(rule, p).awards[i] - allocate(rule, p.with_claim(i, wit["raisedClaim"])).awards[i])
        limit = _tol(rtol, p.endowment)
    elif report.axiom == "anonymity":
        p = ClaimsProblem.from_dict(wit["problem"])
        sigma = wit["permutation"]
        permuted_rule = rule.permuted(sigma) if report.label == "joint-permutation" else rule
        zs = allocate(permuted_rule, ClaimsProblem(p.endowment, p.claims[sigma])).awards
        gap = float(np.max(np.abs(allocate(rule, p).awards[sigma] - zs)))
        limit = _tol(rtol, p.endowment)
    elif report.axiom == "continuous-strategy-freedom":
        p = ClaimsProblem.from_dict(wit["problem"])
        i = wit["claimant"]
        off = np.delete(np.arange(p.n), i)
        gap = float(np.max(np.abs(allocate(rule, p).awards[off] - p.claims[off])))
        return gap >= wit["epsilon"] and abs(gap - wit["discrepancy"]) <= factor * 1e-9 * (1 + p.endowment)
    else:
        raise ValueError(f"no re-check for axiom {report.axiom!r}")
    return gap > limit and abs(gap - wit["discrepancy"]) <= factor * limit
