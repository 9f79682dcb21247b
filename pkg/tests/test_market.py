import numpy as np
import pytest

from claimslab.core import WeightVector
from claimslab.market import (
    CournotMarket,
    best_deviation,
    best_response_equilibrium,
    composed_payoff,
    equilibrium_preservation_report,
    nash_equilibrium,
    payoff,
    preserved,
)
from claimslab.rules import RuleSpec

M = CournotMarket(12.0, 1.0, (0.0, 0.0, 0.0))


def test_payoff_examples():
    np.testing.assert_allclose(payoff(M, [3, 3, 3]), [9, 9, 9])
    assert payoff(M, [81 / 11, 9 / 11, 9 / 11])[0] == pytest.approx(22.09, abs=0.01)
    with pytest.raises(ValueError):
        payoff(M, [1, 1])


def test_equilibrium_examples():
    np.testing.assert_allclose(nash_equilibrium(M), [3, 3, 3])
    np.testing.assert_allclose(nash_equilibrium(CournotMarket(10, 1, (0, 0))), [10 / 3, 10 / 3])
    m = CournotMarket(12, 1, (0, 0, 6))
    q = nash_equilibrium(m)
    assert q[2] < q[0]
    np.testing.assert_allclose(q, best_response_equilibrium(m), atol=1e-8)


def test_closed_form_matches_best_responses():
    rng = np.random.default_rng(100)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        a = rng.uniform(5, 20)
        m = CournotMarket(a, rng.uniform(0.2, 3), tuple(rng.uniform(0, 0.9 * a, n)))
        np.testing.assert_allclose(nash_equilibrium(m), best_response_equilibrium(m), atol=1e-8)


def test_market_parse():
    m = CournotMarket.parse("a=12,b=1,costs=0,0,0")
    assert m == M and CournotMarket.parse(m.to_text()) == m
    with pytest.raises(ValueError):
        CournotMarket(1, 1, (2, 0))


def test_composed_payoff_examples():
    np.testing.assert_allclose(composed_payoff(M, RuleSpec.cea(), 9, [3, 3, 3]), [9, 9, 9])
    np.testing.assert_allclose(composed_payoff(M, RuleSpec.cea(), 9, [27, 3, 3]), [9, 9, 9])
    assert composed_payoff(M, RuleSpec.proportional(), 9, [27, 3, 3])[0] == pytest.approx(22.09, abs=0.01)


def test_composed_payoff_passes_through_when_supply_suffices():
    rng = np.random.default_rng(7)
    for _ in range(50):
        q = rng.uniform(0, 4, 3)
        e = q.sum() * rng.uniform(1, 2)
        for rule in (RuleSpec.cea(), RuleSpec.proportional()):
            np.testing.assert_allclose(composed_payoff(M, rule, e, q), payoff(M, q))


def test_best_deviation_examples():
    dev = best_deviation(M, RuleSpec.proportional(), 9, [3, 3, 3], 0, search_cap=27)
    assert dev.best_order == pytest.approx(27, abs=1e-6)
    # pi_0(t) = 3 * 9t / (t + 6) rises in t, so the cap is optimal
    assert dev.gain == pytest.approx(3 * 9 * 27 / 33 - 9, abs=1e-6)
    dev = best_deviation(M, RuleSpec.cea(), 9, [3, 3, 3], 0)
    assert dev.gain <= 1e-6 and dev.best_payoff == pytest.approx(9)


def test_preservation_verdicts():
    assert preserved(equilibrium_preservation_report(M, RuleSpec.cea(), 9))
    assert not preserved(equilibrium_preservation_report(M, RuleSpec.proportional(), 9))
    assert not preserved(equilibrium_preservation_report(M, RuleSpec.cea(WeightVector([0.5, 0.3, 0.2])), 9))
    with pytest.raises(ValueError):
        equilibrium_preservation_report(M, RuleSpec.cea(), 5)


@pytest.mark.parametrize("seed", range(5))
def test_cea_at_equilibrium_direction_preserves(seed):
    rng = np.random.default_rng(seed)
    m = CournotMarket(rng.uniform(10, 20), rng.uniform(0.5, 2), tuple(rng.uniform(0, 4, 3)))
    q = nash_equilibrium(m)
    rule = RuleSpec.cea(WeightVector.normalized(q))
    reports = equilibrium_preservation_report(m, rule, q.sum() * rng.uniform(1, 2))
    assert all(r.gain <= 1e-6 for r in reports)
