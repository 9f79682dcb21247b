"""The rule catalog and a single dispatcher, :func:`allocate`.

Rules are described by a :class:`RuleSpec`, a small immutable value with a
canonical text form such as ``cea:w=0.5,0.3,0.2`` or
``ceaKappa:w=uniform;kappa=1``.  A weight of ``None`` means uniform over
however many claimants the problem has.

Two catalog members are three-claimant constructions taken literally from
their defining formulas; ``responsiveSFLiteral`` can award a claimant more
than she claims.  Their ``*Repaired`` variants pass the literal output
through :func:`feasibility_repair`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .badpairs import d_member_any
from .core import (
    AwardVector,
    ClaimsProblem,
    WeightVector,
    check_rule_contract,
    contract_tol,
    solve_cap_lambda,
    water_fill,
)

__all__ = [
    "CATALOG_KINDS",
    "DOCUMENTED_VIOLATIONS",
    "CapFamily",
    "DocumentedViolation",
    "RuleSpec",
    "allocate",
    "documented_violation",
    "feasibility_repair",
    "patched_allocate",
    "power_law_caps",
]

CATALOG_KINDS = (
    "cea",
    "ceaKappa",
    "proportional",
    "separableDirectional",
    "nonCharLiteral",
    "nonCharRepaired",
    "responsiveSFLiteral",
    "responsiveSFRepaired",
    "patched",
)
_THREE_CLAIMANT_KINDS = {
    "nonCharLiteral",
    "nonCharRepaired",
    "responsiveSFLiteral",
    "responsiveSFRepaired",
}
# claims below this are treated as zero by the power-law caps
_TINY_CLAIM = 1e-300
_HUGE_CAP = 1e300


@dataclass(frozen=True)
class CapFamily:
    """Per-claimant cap functions ``u_i`` of a separable directional rule.

    ``kind`` is ``"powerLaw"`` (``u_i(x) = w_i (x / w_i)^-kappa``),
    ``"identity"`` (``u_i(x) = x``) or ``"explicitTable"`` (piecewise-linear
    interpolation through ``table[i] = (xs, us)``, anchored at ``u_i(0) = 0``
    and held constant past the last knot).
    """

    kind: str = "powerLaw"
    weight: Optional[WeightVector] = None
    kappa: float = 0.0
    table: Optional[Tuple[Tuple[Tuple[float, ...], Tuple[float, ...]], ...]] = None

    def __post_init__(self):
        if self.kind not in ("powerLaw", "identity", "explicitTable"):
            raise ValueError(f"unknown cap family {self.kind!r}")
        if self.kappa < 0:
            raise ValueError("kappa must be nonnegative")
        if self.kind == "explicitTable":
            if not self.table:
                raise ValueError("explicitTable caps need a table")
            for xs, us in self.table:
                if len(xs) != len(us) or not xs:
                    raise ValueError("each table row needs matching nonempty xs and us")
                if any(x <= 0 for x in xs) or any(u <= 0 for u in us):
                    raise ValueError("table knots and values must be strictly positive")
                if list(xs) != sorted(xs):
                    raise ValueError("table knots must be increasing")

    def values(self, claims: np.ndarray) -> np.ndarray:
        """``u_i(c_i)`` for every claimant."""
        claims = np.asarray(claims, dtype=float)
        n = claims.size
        if self.kind == "identity":
            return claims.copy()
        if self.kind == "powerLaw":
            w = (self.weight or WeightVector.uniform(n)).weights
            if w.size != n:
                raise ValueError("cap weight and problem have different claimant counts")
            return power_law_caps(claims, w, self.kappa)
        if len(self.table) != n:
            raise ValueError("cap table and problem have different claimant counts")
        out = np.empty(n)
        for i, (xs, us) in enumerate(self.table):
            out[i] = np.interp(claims[i], (0.0,) + tuple(xs), (0.0,) + tuple(us))
        return out


def power_law_caps(claims: np.ndarray, weights: np.ndarray, kappa: float) -> np.ndarray:
    """``w_i (c_i / w_i)^-kappa``; zero for (numerically) zero claims."""
    claims = np.asarray(claims, dtype=float)
    out = np.zeros_like(claims)
    pos = claims >= _TINY_CLAIM
    if kappa == 0.0:
        out[pos] = weights[pos]
        return out
    with np.errstate(over="ignore"):
        logs = (1.0 + kappa) * np.log(weights[pos]) - kappa * np.log(claims[pos])
        out[pos] = np.minimum(np.exp(np.minimum(logs, 700.0)), _HUGE_CAP)
    return out


@dataclass(frozen=True)
class RuleSpec:
    """Which catalog rule to evaluate, with its parameters."""

    kind: str
    weight: Optional[WeightVector] = None
    kappa: float = 0.0
    cap_family: Optional[CapFamily] = None
    independent_set: Tuple[WeightVector, ...] = ()
    fallback: Optional["RuleSpec"] = None
    weight_file: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in CATALOG_KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}; expected one of {CATALOG_KINDS}")
        if self.kappa < 0:
            raise ValueError("kappa must be nonnegative")
        if self.kind in _THREE_CLAIMANT_KINDS and self.weight is not None:
            if self.weight.n != 3 or not self.weight.is_uniform:
                raise ValueError(f"{self.kind} is defined only for three claimants with uniform weight")
        if self.kind == "separableDirectional" and self.cap_family is None:
            object.__setattr__(self, "cap_family", CapFamily("identity"))
        if self.kind == "patched":
            if self.fallback is None:
                raise ValueError("patched rules need a fallback rule")
            if self.fallback.kind == "patched":
                raise ValueError("a patched rule cannot fall back on another patched rule")
            object.__setattr__(self, "independent_set", tuple(self.independent_set))

    # -- convenience constructors -------------------------------------------------
    @classmethod
    def cea(cls, weight=None) -> "RuleSpec":
        return cls("cea", _as_weight(weight))

    @classmethod
    def cea_kappa(cls, kappa: float, weight=None) -> "RuleSpec":
        return cls("ceaKappa", _as_weight(weight), kappa=float(kappa))

    @classmethod
    def proportional(cls) -> "RuleSpec":
        return cls("proportional")

    @classmethod
    def patched(cls, independent_set: Sequence[WeightVector], fallback: "RuleSpec") -> "RuleSpec":
        return cls("patched", independent_set=tuple(independent_set), fallback=fallback)

    def weight_for(self, n: int) -> WeightVector:
        """The rule's weight resolved for ``n`` claimants."""
        if self.weight is None:
            return WeightVector.uniform(n)
        if self.weight.n != n:
            raise ValueError(f"rule weight has {self.weight.n} entries, problem has {n} claimants")
        return self.weight

    def permuted(self, perm: Sequence[int]) -> "RuleSpec":
        """The same rule with every weight relabelled by ``perm``."""
        perm = list(perm)
        kw = {}
        if self.weight is not None:
            kw["weight"] = self.weight.permuted(perm)
        if self.cap_family is not None and self.cap_family.weight is not None:
            kw["cap_family"] = replace(self.cap_family, weight=self.cap_family.weight.permuted(perm))
        if self.cap_family is not None and self.cap_family.table is not None:
            kw["cap_family"] = replace(
                kw.get("cap_family", self.cap_family),
                table=tuple(self.cap_family.table[k] for k in perm),
            )
        if self.independent_set:
            kw["independent_set"] = tuple(w.permuted(perm) for w in self.independent_set)
        if self.fallback is not None:
            kw["fallback"] = self.fallback.permuted(perm)
        return replace(self, **kw) if kw else self

    @property
    def weight_bearing(self) -> bool:
        """True if relabelling claimants changes the rule (non-uniform weights)."""
        if self.weight is not None and not self.weight.is_uniform:
            return True
        cf = self.cap_family
        if cf is not None and (cf.table is not None or (cf.weight is not None and not cf.weight.is_uniform)):
            return True
        if self.independent_set:
            return True
        return self.fallback.weight_bearing if self.fallback is not None else False

    # -- text form ---------------------------------------------------------------
    def to_text(self) -> str:
        def wtext(w: Optional[WeightVector]) -> str:
            return "uniform" if w is None else ",".join(repr(float(x)) for x in w.weights)

        if self.kind == "cea":
            return f"cea:w={wtext(self.weight)}"
        if self.kind == "ceaKappa":
            return f"ceaKappa:w={wtext(self.weight)};kappa={self.kappa:g}"
        if self.kind == "separableDirectional":
            cf = self.cap_family
            if cf.kind == "powerLaw":
                return f"separableDirectional:caps=powerLaw;w={wtext(cf.weight)};kappa={cf.kappa:g}"
            if cf.kind == "identity":
                return "separableDirectional:caps=identity"
            return "separableDirectional:caps=explicitTable;table=" + json.dumps(
                [[list(xs), list(us)] for xs, us in cf.table], separators=(",", ":")
            )
        if self.kind == "patched":
            src = self.weight_file or f"<{len(self.independent_set)} weights>"
            return f"patched:file={src};fallback={self.fallback.to_text()}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "RuleSpec":
        """Parse the canonical text form.

        Examples: ``cea:w=uniform``, ``ceaKappa:w=0.5,0.3,0.2;kappa=1``,
        ``separableDirectional:caps=powerLaw;w=uniform;kappa=0.5``,
        ``patched:file=W.json;fallback=cea:w=uniform``.
        """
        text = text.strip()
        kind, _, rest = text.partition(":")
        if kind not in CATALOG_KINDS:
            raise ValueError(f"unknown rule kind {kind!r} in {text!r}")
        if kind == "patched":
            head, sep, fb = rest.partition("fallback=")
            if not sep:
                raise ValueError("patched rule needs fallback=...")
            params = _params(head.rstrip(";"))
            if "file" not in params:
                raise ValueError("patched rule needs file=...")
            from .badpairs import load_weight_list

            weights = load_weight_list(params["file"])
            return cls("patched", independent_set=tuple(weights), fallback=cls.parse(fb),
                       weight_file=params["file"])
        params = _params(rest)
        if kind == "cea":
            return cls("cea", _parse_weight(params.get("w", "uniform")))
        if kind == "ceaKappa":
            return cls("ceaKappa", _parse_weight(params.get("w", "uniform")),
                       kappa=float(params.get("kappa", 0.0)))
        if kind == "separableDirectional":
            caps = params.get("caps", "identity")
            if caps == "powerLaw":
                cf = CapFamily("powerLaw", _parse_weight(params.get("w", "uniform")),
                               float(params.get("kappa", 0.0)))
            elif caps == "identity":
                cf = CapFamily("identity")
            elif caps == "explicitTable":
                rows = json.loads(params["table"])
                cf = CapFamily("explicitTable", table=tuple((tuple(x), tuple(u)) for x, u in rows))
            else:
                raise ValueError(f"unknown cap family {caps!r}")
            return cls("separableDirectional", cap_family=cf)
        if params:
            raise ValueError(f"{kind} takes no parameters, got {sorted(params)}")
        return cls(kind)

    def __str__(self) -> str:
        return self.to_text()


def _as_weight(weight) -> Optional[WeightVector]:
    if weight is None or isinstance(weight, WeightVector):
        return weight
    return WeightVector(weight)


def _parse_weight(text: str) -> Optional[WeightVector]:
    if text == "uniform":
        return None
    return WeightVector([float(x) for x in text.split(",")])


def _params(text: str) -> dict:
    out = {}
    if not text:
        return out
    for part in text.split(";"):
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"malformed rule parameter {part!r}")
        out[key.strip()] = value.strip()
    return out


@dataclass(frozen=True)
class DocumentedViolation:
    """A problem where a literal construction breaks the rule contract."""

    rule: RuleSpec
    problem: ClaimsProblem
    violated_equation: int


DOCUMENTED_VIOLATIONS = (
    DocumentedViolation(RuleSpec("responsiveSFLiteral"), ClaimsProblem(5, (10, 1, 0.5)), 3),
)


def documented_violation(spec: RuleSpec, p: ClaimsProblem) -> Optional[int]:
    """Equation the literal construction is known to break at ``p``, if any.

    ``responsiveSFLiteral`` hands the smallest claimant ``E - 2 c_(1)`` in
    its unequal branch, which exceeds her claim exactly when
    ``E > 2 c_(1) + c_(2)`` on the sorted claims.
    """
    if spec.kind != "responsiveSFLiteral" or p.n != 3 or p.total_claim <= p.endowment:
        return None
    s = np.sort(p.claims)[::-1]
    if s[1] != s[2] and p.endowment > 2 * s[1] + s[2]:
        return 3
    return None


# -- rule bodies -------------------------------------------------------------------

def _separable(claims: np.ndarray, caps: np.ndarray, e: float) -> AwardVector:
    """Awards ``min(c_i, lam * caps_i)`` balanced against ``e`` by bisection."""
    n = claims.size
    pos = np.flatnonzero((claims >= _TINY_CLAIM) & (caps > 0))
    awards = np.zeros(n)
    if pos.size == 0:
        # every claim is below the floor, so the endowment is too
        return AwardVector(awards)
    if pos.size == 1:
        awards[pos[0]] = e
        return AwardVector(awards)
    sub_caps = caps[pos]
    lam, sub = solve_cap_lambda(lambda k, lam: lam * sub_caps[k], ClaimsProblem(e, claims[pos]))
    awards[pos] = sub.awards
    return AwardVector(awards, lam)


def _non_char_literal(p: ClaimsProblem) -> np.ndarray:
    c = p.claims
    e = p.endowment
    third = e / 3.0
    low = [k for k in range(3) if c[k] < third]
    if len(low) == 0:
        return np.full(3, third)
    if len(low) == 2:
        z = c.copy()
        (k,) = [m for m in range(3) if m not in low]
        z[k] = e - c[low[0]] - c[low[1]]
        return z
    if len(low) == 1:
        i = low[0]
        others = [k for k in range(3) if k != i]
        top = max(c[k] for k in others)
        j = min(k for k in others if c[k] == top)
        (m,) = [k for k in others if k != j]
        z = np.zeros(3)
        z[i] = c[i]
        z[j] = min(e - c[i], c[j])
        z[m] = e - z[i] - z[j]
        return z
    # all three below E/3 means the claims do not cover E
    raise AssertionError("unreachable: pass-through handles total claim below E")


def _responsive_sf_literal(p: ClaimsProblem) -> np.ndarray:
    c = p.claims
    e = p.endowment
    order = np.lexsort((np.arange(3), -c))
    c0, c1, c2 = c[order]
    if c1 == c2:
        sorted_z = (max(e - 2 * c2, e / 3), min(c2, e / 3), min(c2, e / 3))
    else:
        sorted_z = (min(c1, e / 2), min(c1, e / 2), max(e - 2 * c1, 0.0))
    z = np.empty(3)
    z[order] = sorted_z
    return z


def feasibility_repair(raw: AwardVector | Sequence[float], p: ClaimsProblem,
                       tol: Optional[float] = None) -> AwardVector:
    """Clamp awards to claims and hand the clamped excess to claimants with slack.

    Slack claimants are served in decreasing order of claim (ties by index),
    each up to her claim.  Feasible inputs come back unchanged.
    """
    z = np.array(raw.awards if isinstance(raw, AwardVector) else raw, dtype=float)
    lam = raw.lam if isinstance(raw, AwardVector) else None
    c = p.claims
    if tol is None:
        tol = contract_tol(p)
    target = min(p.endowment, p.total_claim)
    if abs(float(z.sum()) - target) > tol:
        raise ValueError(f"repair needs balanced input: sum {z.sum():g} vs {target:g}")
    z = np.maximum(z, 0.0)
    excess = float(np.maximum(z - c, 0.0).sum())
    if excess <= 0.0:
        return AwardVector(z, lam)
    z = np.minimum(z, c)
    for k in np.lexsort((np.arange(c.size), -c)):
        if excess <= 0.0:
            break
        give = min(c[k] - z[k], excess)
        if give > 0:
            z[k] += give
            excess -= give
    return AwardVector(z, lam)


def patched_allocate(W: Sequence[WeightVector], fallback: RuleSpec, p: ClaimsProblem) -> AwardVector:
    """Keep every claimant but one whole on D-related problems of ``W``.

    If ``p`` is D-related to some ``w`` in ``W`` through claimant ``i``, the
    award is ``c`` off ``i`` with ``i`` receiving the balance.  Otherwise the
    fallback rule decides.

    Raises:
        AssertionError: two weights of ``W`` are D-related to ``p``, so
            ``W`` was not independent.
    """
    if fallback.kind == "patched":
        raise ValueError("fallback must not be a patched rule")
    if p.total_claim <= p.endowment:
        return AwardVector(p.claims.copy())
    if len(W):
        matrix = np.array([w.weights for w in W])
        hits = d_member_any(p, matrix)
        if len(hits) > 1:
            raise AssertionError(
                f"weights {[W[k] for k, _ in hits]} are all D-related to {p}; set is not independent"
            )
        if hits:
            _, m = hits[0]
            z = p.claims.copy()
            i = m.witness_index
            z[i] = p.endowment - float(np.delete(p.claims, i).sum())
            return AwardVector(z)
    return allocate(fallback, p)


def allocate(spec: RuleSpec, p: ClaimsProblem) -> AwardVector:
    """Evaluate a catalog rule on a problem."""
    n = p.n
    if spec.kind in _THREE_CLAIMANT_KINDS and n != 3:
        raise ValueError(f"{spec.kind} is defined only for three claimants, problem has {n}")
    if p.total_claim <= p.endowment:
        return AwardVector(p.claims.copy())
    c = p.claims
    e = p.endowment
    kind = spec.kind
    if kind == "cea":
        w = spec.weight_for(n).weights
        lam, z = water_fill(c, w, e)
        return AwardVector(z, lam)
    if kind == "ceaKappa":
        w = spec.weight_for(n).weights
        return _separable(c, power_law_caps(c, w, spec.kappa), e)
    if kind == "proportional":
        return AwardVector(e * c / p.total_claim)
    if kind == "separableDirectional":
        return _separable(c, spec.cap_family.values(c), e)
    if kind in ("nonCharLiteral", "nonCharRepaired"):
        z = _non_char_literal(p)
        return AwardVector(z) if kind == "nonCharLiteral" else feasibility_repair(z, p)
    if kind in ("responsiveSFLiteral", "responsiveSFRepaired"):
        z = _responsive_sf_literal(p)
        return AwardVector(z) if kind == "responsiveSFLiteral" else feasibility_repair(z, p)
    if kind == "patched":
        return patched_allocate(spec.independent_set, spec.fallback, p)
    raise AssertionError(f"unhandled rule kind {kind}")


def contract_holds(spec: RuleSpec, p: ClaimsProblem) -> bool:
    return check_rule_contract(allocate(spec, p), p).passed
