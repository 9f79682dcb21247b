import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from claimslab.core import ClaimsProblem, WeightVector, check_rule_contract
from claimslab.rules import (
    CapFamily,
    RuleSpec,
    allocate,
    documented_violation,
    feasibility_repair,
    patched_allocate,
    power_law_caps,
)
from claimslab.sampling import SampleConfig, random_problems

SKEW = WeightVector([0.5, 0.3, 0.2])


@pytest.mark.parametrize("rule, problem, expected", [
    (RuleSpec.cea(), (6, (1, 4, 4)), (1, 2.5, 2.5)),
    (RuleSpec.cea(SKEW), (6, (4, 4, 4)), (3, 1.8, 1.2)),
    (RuleSpec.cea_kappa(1.0), (6, (1, 4, 5)), (1, 25 / 9, 20 / 9)),
    (RuleSpec.cea_kappa(1.0), (6, (1, 4, 4)), (1, 2.5, 2.5)),
    (RuleSpec("nonCharLiteral"), (6, (1, 3, 5)), (1, 0, 5)),
    (RuleSpec("nonCharLiteral"), (6, (1, 1, 5)), (1, 1, 4)),
    (RuleSpec("responsiveSFLiteral"), (6, (5, 3, 1)), (3, 3, 0)),
    (RuleSpec("responsiveSFLiteral"), (6, (4, 1, 1)), (4, 1, 1)),
    (RuleSpec("responsiveSFLiteral"), (6, (3, 5, 1)), (3, 3, 0)),
    (RuleSpec("responsiveSFLiteral"), (5, (10, 1, 0.5)), (1, 1, 3)),
    (RuleSpec("responsiveSFRepaired"), (5, (10, 1, 0.5)), (3.5, 1, 0.5)),
    (RuleSpec.proportional(), (9, (27, 3, 3)), (81 / 11, 9 / 11, 9 / 11)),
    (RuleSpec.patched([SKEW], RuleSpec.cea()), (12, (9, 3, 2)), (7, 3, 2)),
    (RuleSpec.patched([SKEW], RuleSpec.cea()), (6, (1, 4, 4)), (1, 2.5, 2.5)),
])
def test_worked_examples(rule, problem, expected):
    z = allocate(rule, ClaimsProblem(*problem))
    np.testing.assert_allclose(z.awards, expected, atol=1e-9)


def test_cea_lambda_exposed():
    assert allocate(RuleSpec.cea(), ClaimsProblem(6, (1, 4, 4))).lam == pytest.approx(7.5)


def test_repair_example():
    p = ClaimsProblem(5, (10, 1, 0.5))
    np.testing.assert_allclose(feasibility_repair([1, 1, 3], p).awards, [3.5, 1, 0.5])


def test_documented_violation_predicate():
    lit = RuleSpec("responsiveSFLiteral")
    assert documented_violation(lit, ClaimsProblem(5, (10, 1, 0.5))) == 3
    assert documented_violation(lit, ClaimsProblem(6, (5, 3, 1))) is None
    assert documented_violation(RuleSpec.cea(), ClaimsProblem(5, (10, 1, 0.5))) is None


def test_patched_rejects_dependent_set():
    # (0.2,0.5,0.3) and (0.4,0.2,0.4) share the witness problem (1,(0.3,0.5,0.3))
    W = [WeightVector([0.2, 0.5, 0.3]), WeightVector([0.4, 0.2, 0.4])]
    with pytest.raises(AssertionError):
        patched_allocate(W, RuleSpec.cea(), ClaimsProblem(1.0, (0.3, 0.5, 0.3)))


def test_three_claimant_rules_reject_other_sizes():
    with pytest.raises(ValueError):
        allocate(RuleSpec("nonCharLiteral"), ClaimsProblem(6, (1, 2, 3, 4)))


@pytest.mark.parametrize("text", [
    "cea:w=uniform",
    "cea:w=0.5,0.3,0.2",
    "ceaKappa:w=uniform;kappa=1",
    "proportional",
    "nonCharLiteral",
    "responsiveSFRepaired",
    "separableDirectional:caps=identity",
    "separableDirectional:caps=powerLaw;w=uniform;kappa=0.5",
])
def test_text_roundtrip(text):
    spec = RuleSpec.parse(text)
    assert RuleSpec.parse(spec.to_text()) == spec


def test_patched_text_reads_weight_file(tmp_path):
    path = tmp_path / "W.json"
    path.write_text(json.dumps({"weights": [[0.5, 0.3, 0.2]]}))
    spec = RuleSpec.parse(f"patched:file={path};fallback=cea:w=uniform")
    assert spec.independent_set == (SKEW,)
    assert spec.fallback == RuleSpec.cea()


@pytest.mark.parametrize("text", ["nope", "cea:w=0.5,0.6", "proportional:x=1", "patched:file=x.json"])
def test_parse_errors(text):
    with pytest.raises((ValueError, OSError)):
        RuleSpec.parse(text)


def test_power_law_kappa_zero_is_weight():
    c = np.array([1.0, 4.0, 0.5])
    np.testing.assert_allclose(power_law_caps(c, SKEW.weights, 0.0), SKEW.weights)


def test_identity_caps_give_proportional():
    p = ClaimsProblem(9, (27, 3, 3))
    np.testing.assert_allclose(allocate(RuleSpec("separableDirectional"), p).awards,
                               allocate(RuleSpec.proportional(), p).awards, atol=1e-9)


def test_explicit_table_family():
    cf = CapFamily("explicitTable", table=(((1, 10), (1, 1)), ((1, 9), (1, 5)), ((2,), (4,))))
    np.testing.assert_allclose(cf.values(np.array([0.5, 5.0, 3.0])), [0.5, 3, 4])


def test_kappa_zero_equals_cea():
    for p in random_problems(SampleConfig(seed=3).rng(), 3, 500):
        for w in (None, SKEW):
            a = allocate(RuleSpec.cea(w), p).awards
            b = allocate(RuleSpec.cea_kappa(0.0, w), p).awards
            np.testing.assert_allclose(a, b, atol=1e-9 * (1 + p.endowment))


SOUND = [RuleSpec.cea(), RuleSpec.cea(SKEW), RuleSpec.cea_kappa(1.0), RuleSpec.cea_kappa(0.5, SKEW),
         RuleSpec.proportional(), RuleSpec("separableDirectional"), RuleSpec("nonCharLiteral"),
         RuleSpec("nonCharRepaired"), RuleSpec("responsiveSFRepaired"),
         RuleSpec.patched([SKEW], RuleSpec.cea())]


@st.composite
def problems3(draw):
    c = np.array(draw(st.lists(st.floats(0, 50), min_size=3, max_size=3)))
    if c.sum() == 0:
        c[0] = 1.0
    return ClaimsProblem(draw(st.floats(0, 1)) * c.sum(), c)


@settings(max_examples=200, deadline=None)
@given(problems3())
def test_sound_rules_meet_contract(p):
    for rule in SOUND:
        assert check_rule_contract(allocate(rule, p), p).passed, rule


@settings(max_examples=100, deadline=None)
@given(problems3(), st.permutations([0, 1, 2]))
def test_weighted_cea_joint_permutation(p, sigma):
    z = allocate(RuleSpec.cea(SKEW), p).awards
    zs = allocate(RuleSpec.cea(SKEW).permuted(sigma), ClaimsProblem(p.endowment, p.claims[sigma])).awards
    np.testing.assert_allclose(z[sigma], zs, atol=1e-9 * (1 + p.endowment))


@settings(max_examples=100, deadline=None)
@given(problems3(), st.floats(0.01, 100))
def test_homogeneous_rules(p, t):
    for rule in (RuleSpec.cea(SKEW), RuleSpec.cea_kappa(1.0), RuleSpec.proportional()):
        np.testing.assert_allclose(allocate(rule, p.scaled(t)).awards, t * allocate(rule, p).awards,
                                   atol=1e-8 * t * (1 + p.endowment))
