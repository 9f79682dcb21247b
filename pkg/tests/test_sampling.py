import numpy as np

from claimslab.core import is_wellformed
from claimslab.sampling import SampleConfig, lattice_problems, random_problems, random_weights, weight_pair_mix


def test_random_problems_wellformed_and_seeded():
    a = list(random_problems(SampleConfig(seed=3).rng(), 4, 200))
    b = list(random_problems(SampleConfig(seed=3).rng(), 4, 200))
    assert a == b
    assert all(is_wellformed(p) for p in a)


def test_random_weights_on_simplex():
    for w in random_weights(0, 5, 100):
        assert abs(w.weights.sum() - 1) < 1e-12 and np.all(w.weights > 0)


def test_lattice():
    ps = lattice_problems(3)
    assert all(p.total_claim >= p.endowment for p in ps)
    assert len(ps) > 100


def test_pair_mix_shapes():
    shapes = [s for s, _, _ in weight_pair_mix(0, 4, 40)]
    assert {s: shapes.count(s) for s in set(shapes)} == {"random": 10, "bad": 10, "bprime": 10, "near": 10}
