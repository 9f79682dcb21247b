"""Relations between weights that make simultaneous strategy-freedom impossible.

A problem ``(E, c)`` is *D-related* to a weight ``w`` when lowering a single
claim ``c_i`` to some ``c'_i < c_i`` makes the claims vector a positive
multiple of ``w`` while the endowment still covers it.  A rule is
strategy-free for ``w`` exactly when it leaves the other claimants whole on
every D-related problem, so two weights sharing a D-related problem can
force contradictory awards.

Two weight-to-weight relations capture when that happens:

* ``B`` (bad pairs): some ``u_{-i-j}`` is parallel to ``v_{-i-j}`` and the
  cross ratios at ``i`` and ``j`` point in opposite directions;
* ``B'``: some ``u_{-i}`` is parallel to ``v_{-i}``.

``B ∪ B'`` is exactly the set of weight pairs with a common D-related
problem; :func:`common_d_witness` builds that problem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    PARALLEL_RTOL,
    AwardVector,
    ClaimsProblem,
    WeightVector,
    check_rule_contract,
    is_parallel,
)

__all__ = [
    "DMembership",
    "WitnessProblem",
    "common_d_witness",
    "d_member",
    "d_member_any",
    "greedy_independent_set",
    "impossibility_witness",
    "is_b_prime",
    "is_bad_pair",
    "line_intersection_probe",
    "load_weight_list",
    "related",
    "save_weight_list",
]

# strictness margin for "c'_i < c_i" and the bad-pair inequalities
_STRICT_RTOL = 1e-12


@dataclass(frozen=True)
class DMembership:
    member: bool
    witness_index: Optional[int] = None
    reduced_claim: Optional[float] = None
    scale: Optional[float] = None


@dataclass(frozen=True)
class WitnessProblem:
    problem: ClaimsProblem
    pair: Tuple[WeightVector, WeightVector]
    indices: Tuple[int, int]
    forced_award_u: AwardVector
    forced_award_v: AwardVector
    thresholds: Tuple[float, float]

    def refuted(self, awards: AwardVector | Sequence[float], tol: float = 1e-9) -> Tuple[bool, bool]:
        """Which of the two strategy-freedom demands an award vector breaks.

        Returns ``(breaks_u, breaks_v)``; at least one is true for any
        vector because the two forced awards differ.
        """
        z = awards.awards if isinstance(awards, AwardVector) else np.asarray(awards, float)
        i, j = self.indices
        c = self.problem.claims
        off_i = np.delete(np.arange(c.size), i)
        off_j = np.delete(np.arange(c.size), j)
        breaks_u = bool(np.max(np.abs(z[off_i] - c[off_i])) > tol)
        breaks_v = bool(np.max(np.abs(z[off_j] - c[off_j])) > tol)
        return breaks_u, breaks_v


def _weights(w) -> np.ndarray:
    return w.weights if isinstance(w, WeightVector) else np.asarray(w, dtype=float)


def d_member(p: ClaimsProblem, w: WeightVector | Sequence[float]) -> DMembership:
    """Decide whether ``(p, w)`` belongs to the relation D.

    For each claimant ``i`` the remaining claims are fitted to ``w_{-i}``;
    a positive fit ``lam`` gives the reduced claim ``lam * w_i``, which must
    be strictly below ``c_i`` and leave the endowment covering the reduced
    profile.  The first such claimant is returned.
    """
    wv = _weights(w)
    c = p.claims
    if wv.size != c.size:
        raise ValueError("weight and problem have different claimant counts")
    if p.total_claim < p.endowment:
        return DMembership(False)
    n = c.size
    margin = _STRICT_RTOL * (1.0 + float(np.max(c)))
    for i in range(n):
        rest = np.delete(np.arange(n), i)
        ok, lam = is_parallel(c[rest], wv[rest])
        if not ok or lam is None or lam <= 0:
            continue
        reduced = lam * wv[i]
        if c[i] - reduced <= margin:
            continue
        if p.endowment < float(c[rest].sum()) + reduced - margin:
            continue
        return DMembership(True, i, float(reduced), float(lam))
    return DMembership(False)


def d_member_any(p: ClaimsProblem, weight_matrix: np.ndarray) -> List[Tuple[int, DMembership]]:
    """All rows of ``weight_matrix`` D-related to ``p``, vectorized over rows.

    Equivalent to calling :func:`d_member` per row, which stays the
    reference implementation; this path exists because the patched rule
    scans many weights per allocation.
    """
    W = np.atleast_2d(np.asarray(weight_matrix, dtype=float))
    c = p.claims
    n = c.size
    hits: List[Tuple[int, DMembership]] = []
    if W.shape[0] == 0 or p.total_claim < p.endowment:
        return hits
    margin = _STRICT_RTOL * (1.0 + float(np.max(c)))
    found = np.zeros(W.shape[0], dtype=bool)
    for i in range(n):
        rest = np.delete(np.arange(n), i)
        x = c[rest]
        Y = W[:, rest]
        lam = (Y @ x) / np.einsum("ij,ij->i", Y, Y)
        bound = PARALLEL_RTOL * (1.0 + float(np.max(np.abs(x))))
        fit = np.all(np.abs(x[None, :] - lam[:, None] * Y) <= bound, axis=1)
        reduced = lam * W[:, i]
        ok = (
            fit
            & (lam > 0)
            & (c[i] - reduced > margin)
            & (p.endowment >= float(x.sum()) + reduced - margin)
            & ~found
        )
        for k in np.flatnonzero(ok):
            hits.append((int(k), DMembership(True, i, float(reduced[k]), float(lam[k]))))
        found |= ok
    hits.sort(key=lambda t: t[0])
    return hits


def is_b_prime(u: WeightVector, v: WeightVector) -> Tuple[bool, Optional[int]]:
    """Whether deleting one coordinate makes ``u`` and ``v`` parallel."""
    uu, vv = _weights(u), _weights(v)
    if uu.size != vv.size:
        raise ValueError("weights have different lengths")
    n = uu.size
    for i in range(n):
        rest = np.delete(np.arange(n), i)
        if is_parallel(uu[rest], vv[rest])[0]:
            return True, i
    return False, None


def _bad_at(uu: np.ndarray, vv: np.ndarray, i: int, j: int) -> bool:
    n = uu.size
    rest = [k for k in range(n) if k != i and k != j]
    if not rest:
        return False
    if not is_parallel(uu[rest], vv[rest])[0]:
        return False
    su, sv = float(uu[rest].sum()), float(vv[rest].sum())
    margin = _STRICT_RTOL
    return (uu[i] * sv < vv[i] * su - margin) and (uu[j] * sv > vv[j] * su + margin)


def is_bad_pair(u: WeightVector, v: WeightVector) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """Find the lexicographically first ``(i, j)`` making ``(u, v)`` bad.

    ``(u, v)`` is ``(i, j)``-bad exactly when ``(v, u)`` is ``(j, i)``-bad,
    so the relation is symmetric even though each witness is oriented.
    """
    uu, vv = _weights(u), _weights(v)
    if uu.size != vv.size:
        raise ValueError("weights have different lengths")
    if np.array_equal(uu, vv):
        raise ValueError("bad pairs are defined for distinct weights only")
    for i, j in itertools.permutations(range(uu.size), 2):
        if _bad_at(uu, vv, i, j):
            return True, (i, j)
    return False, None


def related(u: WeightVector, v: WeightVector) -> bool:
    """Membership in ``B ∪ B'`` (symmetric)."""
    if np.array_equal(_weights(u), _weights(v)):
        return True
    return is_bad_pair(u, v)[0] or is_b_prime(u, v)[0]


def impossibility_witness(
    u: WeightVector, v: WeightVector, indices: Tuple[int, int]
) -> WitnessProblem:
    """Build the problem on which strategy-freedom for ``u`` and ``v`` collide.

    The claims outside ``{i, j}`` copy ``u``; claimant ``i`` claims what
    ``v``'s direction assigns her and claimant ``j`` what ``u``'s direction
    assigns him.  With ``E`` the larger of the two D-thresholds, demanding
    strategy-freedom for ``u`` pins ``z_{-i}`` to ``c_{-i}`` while demanding
    it for ``v`` pins ``z_{-j}`` to ``c_{-j}``; the two disagree at ``i``.
    """
    uu, vv = _weights(u), _weights(v)
    i, j = indices
    if not _bad_at(uu, vv, i, j):
        raise ValueError(f"({u}, {v}) is not ({i},{j})-bad")
    n = uu.size
    rest = [k for k in range(n) if k != i and k != j]
    c = np.zeros(n)
    c[rest] = uu[rest]
    base = float(c[rest].sum())
    c[i] = vv[i] * base / float(vv[rest].sum())
    c[j] = uu[j] * base / float(uu[rest].sum())

    # threshold for u uses deletion of i, threshold for v deletion of j
    thresholds = []
    for k, wk in ((i, uu), (j, vv)):
        off = np.delete(np.arange(n), k)
        lam = float(c[off] @ wk[off]) / float(wk[off] @ wk[off])
        thresholds.append(float(c[off].sum()) + lam * wk[k])
    e = max(thresholds)
    problem = ClaimsProblem(e, c)
    if not e < problem.total_claim:
        raise AssertionError("witness endowment must stay below the total claim")

    forced_u = c.copy()
    forced_u[i] = e - float(np.delete(c, i).sum())
    forced_v = c.copy()
    forced_v[j] = e - float(np.delete(c, j).sum())
    if np.allclose(forced_u, forced_v, rtol=0, atol=1e-15):
        raise AssertionError("forced awards coincide; construction is degenerate")
    fu, fv = AwardVector(forced_u), AwardVector(forced_v)
    for award in (fu, fv):
        report = check_rule_contract(award, problem)
        if not report.passed:
            raise AssertionError(f"forced award {award} breaks the rule contract: {report}")
    return WitnessProblem(problem, (u, v), (i, j), fu, fv, (float(thresholds[0]), float(thresholds[1])))


def common_d_witness(u: WeightVector, v: WeightVector) -> Optional[ClaimsProblem]:
    """A problem D-related to both ``u`` and ``v``, or ``None`` if none exists."""
    uu, vv = _weights(u), _weights(v)
    if np.array_equal(uu, vv):
        raise ValueError("common witnesses are defined for distinct weights only")
    bad, idx = is_bad_pair(u, v)
    if bad:
        return impossibility_witness(u, v, idx).problem
    bprime, i = is_b_prime(u, v)
    if bprime:
        n = uu.size
        rest = np.delete(np.arange(n), i)
        _, s = is_parallel(uu[rest], vv[rest])
        top = max(uu[i], s * vv[i])
        c = uu.copy()
        c[i] = 2.0 * top
        return ClaimsProblem(float(uu[rest].sum()) + top, c)
    return None


def greedy_independent_set(candidates: Iterable[WeightVector]) -> List[WeightVector]:
    """Keep each candidate unrelated (under ``B ∪ B'``) to everything kept so far."""
    kept: List[WeightVector] = []
    for w in candidates:
        if any(np.array_equal(w.weights, k.weights) for k in kept):
            raise ValueError(f"duplicate candidate {w}")
        if not any(related(w, k) for k in kept):
            kept.append(w)
    return kept


def line_intersection_probe(
    S: Iterable[WeightVector], i: int, j: int, direction: Sequence[float]
) -> int:
    """Count weights whose coordinates outside ``{i, j}`` are parallel to ``direction``."""
    direction = np.asarray(direction, dtype=float)
    count = 0
    for w in S:
        rest = [k for k in range(w.n) if k != i and k != j]
        if len(rest) != direction.size:
            raise ValueError("direction length must be n - 2")
        ok, s = is_parallel(w.weights[rest], direction)
        if ok and s is not None and s > 0:
            count += 1
    return count


def save_weight_list(path, weights: Sequence[WeightVector]) -> None:
    import json

    with open(path, "w") as fh:
        json.dump({"weights": [w.weights.tolist() for w in weights]}, fh, indent=2)


def load_weight_list(path) -> List[WeightVector]:
    import json

    with open(path) as fh:
        data = json.load(fh)
    return [WeightVector(row) for row in data["weights"]]
