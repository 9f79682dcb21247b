"""Seeded generators for weights and claims problems."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, List, Sequence

import numpy as np

from .core import ClaimsProblem, WeightVector

__all__ = [
    "SampleConfig",
    "lattice_problems",
    "random_problems",
    "random_weight",
    "random_weights",
]


@dataclass(frozen=True)
class SampleConfig:
    """Budget and seed for an empirical check.

    ``n`` is used only when the rule itself does not fix the claimant count.
    """

    seed: int = 0
    count: int = 10_000
    n: int = 3
    scales: Sequence[float] = (0.5, 2.0, 10.0)
    claim_scale: float = 10.0

    def rng(self, stream: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, stream])


def random_weight(rng: np.random.Generator, n: int, floor: float = 1e-3) -> WeightVector:
    """Dirichlet(1) draw kept away from the simplex boundary."""
    x = rng.dirichlet(np.ones(n))
    x = np.maximum(x, floor)
    return WeightVector(x / x.sum())


def random_weights(seed: int, n: int, count: int) -> List[WeightVector]:
    rng = np.random.default_rng(seed)
    return [random_weight(rng, n) for _ in range(count)]


def random_problems(
    rng: np.random.Generator, n: int, count: int, claim_scale: float = 10.0
) -> Iterator[ClaimsProblem]:
    """Wellformed problems with a mix of spread, clustered and zero claims."""
    for _ in range(count):
        style = rng.integers(4)
        if style == 0:
            c = rng.uniform(0, claim_scale, n)
        elif style == 1:
            c = rng.exponential(claim_scale / 3, n)
        elif style == 2:
            base = rng.uniform(0.1, claim_scale)
            c = base * (1 + 0.05 * rng.standard_normal(n))
        else:
            c = rng.uniform(0, claim_scale, n)
            c[rng.integers(n)] = 0.0
        c = np.abs(c)
        total = c.sum()
        if total == 0:
            c[0] = 1.0
            total = 1.0
        # endpoints of [0, total] are drawn now and then
        u = rng.uniform()
        e = total * (0.0 if u < 0.01 else 1.0 if u > 0.99 else rng.uniform())
        yield ClaimsProblem(e, c)


def lattice_problems(n: int, endowment: float = 6.0) -> List[ClaimsProblem]:
    """Small integer grid of wellformed problems (claims up to ``endowment``)."""
    top = int(endowment)
    if n <= 3:
        values = range(top + 1)
    elif n <= 5:
        values = (0, 1, 2, 3, 6)
    else:
        values = (0, 1, 3, 6)
    out = []
    for c in itertools.product(values, repeat=n):
        if sum(c) >= endowment:
            out.append(ClaimsProblem(endowment, c))
    return out


def weight_pair_mix(seed: int, n: int, count: int) -> List[tuple]:
    """Weight pairs cycling through four shapes.

    ``random``: independent draws.  ``bad``: the two weights share a
    direction off two coordinates and their ratios there point in opposite
    directions.  ``near``: as ``bad`` but with both ratios moving the same
    way.  ``bprime``: the weights share a direction off one coordinate.
    Returns ``(shape, u, v)`` triples.
    """
    rng = np.random.default_rng([seed, 51])
    shapes = ("random", "bad", "bprime", "near")
    out = []
    for k in range(count):
        shape = shapes[k % len(shapes)]
        u = random_weight(rng, n, floor=0.02)
        if shape == "random":
            v = random_weight(rng, n, floor=0.02)
        elif shape == "bprime":
            i = int(rng.integers(n))
            v = u.weights.copy()
            v[i] *= rng.uniform(0.2, 3.0)
            v = WeightVector(v / v.sum())
        else:
            i, j = (int(x) for x in rng.choice(n, 2, replace=False))
            a = rng.uniform(0.1, 1.5)
            b = rng.uniform(0.1, 0.9)
            v = u.weights.copy()
            v[i] *= 1.0 + a
            v[j] *= (1.0 - b) if shape == "bad" else (1.0 + rng.uniform(0.1, 1.5))
            v = WeightVector(v / v.sum())
        out.append((shape, u, v))
    return out
