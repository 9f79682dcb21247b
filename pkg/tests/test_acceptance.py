"""One block of tests per acceptance criterion; the summary prints PASS/FAIL per criterion."""

import numpy as np
import pytest

from claimslab.axioms import (
    SFGrid,
    check_claims_monotonicity,
    check_continuous_strategy_free,
    check_homogeneity,
    check_strategy_free,
    cross_check_sf_alpha,
    estimate_alpha,
    estimate_continuity_modulus,
    own_weight,
    recheck_witness,
)
from claimslab.badpairs import (
    common_d_witness,
    d_member,
    greedy_independent_set,
    impossibility_witness,
    is_b_prime,
    is_bad_pair,
)
from claimslab.core import ClaimsProblem, WeightVector, check_rule_contract, water_fill
from claimslab.market import (
    CournotMarket,
    best_deviation,
    composed_payoff,
    equilibrium_preservation_report,
    nash_equilibrium,
    preserved,
)
from claimslab.rules import RuleSpec, allocate, documented_violation
from claimslab.sampling import SampleConfig, random_problems, random_weights, weight_pair_mix
from oracles import brute_water_fill, lp_common_d_problem

SKEW = WeightVector([0.5, 0.3, 0.2])
UNIFORM3 = WeightVector.uniform(3)


def criterion(number, title):
    return pytest.mark.criterion(number, title)


# -- 1 ---------------------------------------------------------------------------------

C1 = criterion(1, "CEA correctness and water-filling vs bisection")


@C1
def test_c1_cea_examples():
    z = allocate(RuleSpec.cea(), ClaimsProblem(6, (1, 4, 4)))
    np.testing.assert_allclose(z.awards, [1, 2.5, 2.5], atol=1e-9)
    z = allocate(RuleSpec.cea(SKEW), ClaimsProblem(6, (4, 4, 4)))
    np.testing.assert_allclose(z.awards, [3, 1.8, 1.2], atol=1e-9)


@C1
@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_c1_closed_form_matches_bisection(n):
    rng = np.random.default_rng([1, n])
    for p in random_problems(rng, n, 1000):
        w = rng.dirichlet(np.ones(n)) + 1e-3
        _, z = water_fill(p.claims, w, p.endowment)
        _, z_ref = brute_water_fill(p.claims, w, p.endowment)
        np.testing.assert_allclose(z, z_ref, atol=1e-9)


# -- 2 ---------------------------------------------------------------------------------

C2 = criterion(2, "strategy-freedom of CEA^w at its own weight; uniform CEA fails at a skewed weight")


@C2
@pytest.mark.parametrize("w", [UNIFORM3, SKEW, random_weights(2, 3, 1)[0]], ids=["uniform", "skew", "random"])
def test_c2_cea_strategy_free_at_own_weight(w):
    rep = check_strategy_free(RuleSpec.cea(w), w, SFGrid(random_probes=10_000, rtol=1e-9))
    assert rep.passed, rep.witness
    assert rep.samples_tested > 10_000


@C2
def test_c2_uniform_cea_fails_at_skew_with_known_witness():
    grid = SFGrid(probes=((2, 1.0, 1.0, 0.6),))
    rep = check_strategy_free(RuleSpec.cea(), SKEW, grid)
    assert rep.verdict == "fail"
    wit = rep.witness
    assert (wit["lambda"], wit["endowment"], wit["claimant"], wit["claim"]) == (1.0, 1.0, 2, 0.6)
    np.testing.assert_allclose(wit["awards"], [0.35, 0.3, 0.35], atol=1e-12)
    assert recheck_witness(rep)


# -- 3 ---------------------------------------------------------------------------------

C3 = criterion(3, "guarantee-level brackets of CEA^w and proportional")


@C3
def test_c3_alpha_of_weighted_cea():
    est = estimate_alpha(RuleSpec.cea(SKEW), bracket_width=1e-3)
    assert np.all(est.upper - est.lower <= 1e-3)
    assert est.contains(SKEW)
    assert est.responsive_class == "individuallyUnresponsive"


@C3
def test_c3_alpha_of_proportional():
    est = estimate_alpha(RuleSpec.proportional(), bracket_width=1e-3)
    assert np.all(est.upper <= 0.01)
    assert est.responsive_class == "individuallyResponsive"


# -- 4 ---------------------------------------------------------------------------------

C4 = criterion(4, "strategy-freedom iff guarantee levels equal the weight, for CEA^w")


@C4
@pytest.mark.parametrize("k", range(5))
def test_c4_sf_alpha_biconditional(k):
    w, other = random_weights(40 + k, 3, 2)
    rule = RuleSpec.cea(w)
    alpha = estimate_alpha(rule)
    own = cross_check_sf_alpha(rule, w, SFGrid(random_probes=2000), alpha)
    assert own.verdict == "pass"
    assert own.details["strategyFree"] == "pass" and own.details["alphaContainsWeight"]
    off = cross_check_sf_alpha(rule, other, SFGrid(random_probes=2000), alpha)
    assert off.verdict == "pass"
    assert off.details["strategyFree"] == "fail" and not off.details["alphaContainsWeight"]


# -- 5 ---------------------------------------------------------------------------------

C5 = criterion(5, "CEA^w_kappa (kappa=1): strategy-free and homogeneous but not claims monotonic")


@C5
def test_c5_kappa_family():
    rule = RuleSpec.cea_kappa(1.0)
    assert check_strategy_free(rule, UNIFORM3, SFGrid(random_probes=2000)).passed
    assert check_homogeneity(rule, SampleConfig(count=1000)).passed
    rep = check_claims_monotonicity(rule, SampleConfig(count=1000),
                                    probes=((ClaimsProblem(6, (1, 4, 4)), 2, 5.0),))
    assert rep.verdict == "fail"
    assert rep.witness["awardBefore"] == pytest.approx(2.5, abs=1e-3)
    assert rep.witness["awardAfter"] == pytest.approx(20 / 9, abs=1e-3)
    assert rep.witness["discrepancy"] >= 0.277


# -- 6 ---------------------------------------------------------------------------------

C6 = criterion(6, "bad-pair impossibility witness")
U6, V6 = WeightVector([0.2, 0.5, 0.3]), WeightVector([0.4, 0.2, 0.4])


@C6
def test_c6_witness_values():
    wp = impossibility_witness(U6, V6, (0, 1))
    assert wp.problem.endowment == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(wp.problem.claims, [0.3, 0.5, 0.3], atol=1e-12)
    np.testing.assert_allclose(wp.forced_award_u.awards, [0.2, 0.5, 0.3], atol=1e-12)
    np.testing.assert_allclose(wp.forced_award_v.awards, [0.3, 0.4, 0.3], atol=1e-12)


def _catalog3():
    return [RuleSpec.cea(), RuleSpec.cea(SKEW), RuleSpec.cea(U6), RuleSpec.cea(V6),
            RuleSpec.cea_kappa(1.0), RuleSpec.proportional(), RuleSpec("separableDirectional"),
            RuleSpec.parse("separableDirectional:caps=powerLaw;w=uniform;kappa=0.5"),
            RuleSpec("nonCharLiteral"), RuleSpec("nonCharRepaired"),
            RuleSpec("responsiveSFLiteral"), RuleSpec("responsiveSFRepaired"),
            RuleSpec.patched([U6], RuleSpec.cea()), RuleSpec.patched([V6], RuleSpec.cea())]


@C6
@pytest.mark.parametrize("rule", _catalog3(), ids=str)
def test_c6_every_rule_breaks_one_side(rule):
    wp = impossibility_witness(U6, V6, (0, 1))
    breaks_u, breaks_v = wp.refuted(allocate(rule, wp.problem))
    assert breaks_u or breaks_v


# -- 7 ---------------------------------------------------------------------------------

C7 = criterion(7, "composite identity: common D-witness exists iff bad or B'")


@C7
@pytest.mark.parametrize("n", [3, 4, 5])
def test_c7_composite_identity(n):
    agree = 0
    for _, u, v in weight_pair_mix(0, n, 200):
        rel = is_bad_pair(u, v)[0] or is_b_prime(u, v)[0]
        p = common_d_witness(u, v)
        ok = (p is not None) == rel
        if p is not None:
            ok = ok and d_member(p, u).member and d_member(p, v).member
        agree += ok
    assert agree == 200


@C7
@pytest.mark.parametrize("n", [3, 4, 5])
def test_c7_existence_matches_lp_oracle(n):
    for _, u, v in weight_pair_mix(0, n, 200):
        found = common_d_witness(u, v) is not None
        assert found == (lp_common_d_problem(u.weights, v.weights) is not None), (u, v)


# -- 8 ---------------------------------------------------------------------------------

C8 = criterion(8, "patched rule over a greedy independent set is strategy-free for every kept weight")
KEPT = greedy_independent_set(random_weights(8, 4, 50))


@C8
def test_c8_independent_set_size():
    assert len(KEPT) >= 2


@C8
@pytest.mark.parametrize("k", range(len(KEPT)))
def test_c8_patched_strategy_free(k):
    rule = RuleSpec.patched(KEPT, RuleSpec.cea())
    rep = check_strategy_free(rule, KEPT[k], SFGrid(rtol=1e-9))
    assert rep.passed, rep.witness


# -- 9 ---------------------------------------------------------------------------------

C9 = criterion(9, "rationed Cournot market: CEA preserves the equilibrium, proportional does not")
MARKET = CournotMarket(12.0, 1.0, (0.0, 0.0, 0.0))


@C9
def test_c9_cea_preserves():
    reports = equilibrium_preservation_report(MARKET, RuleSpec.cea(), 9.0)
    assert all(r.gain <= 1e-6 for r in reports)
    assert preserved(reports)


@C9
def test_c9_proportional_does_not():
    eq = nash_equilibrium(MARKET)
    pay = composed_payoff(MARKET, RuleSpec.proportional(), 9.0, [27.0, eq[1], eq[2]])[0]
    assert pay == pytest.approx(22.09, abs=0.1)
    dev = best_deviation(MARKET, RuleSpec.proportional(), 9.0, eq, 0, search_cap=27.0)
    assert dev.equilibrium_payoff == pytest.approx(9.0)
    assert dev.gain >= 13.0
    assert not preserved(equilibrium_preservation_report(MARKET, RuleSpec.proportional(), 9.0))


# -- 10 --------------------------------------------------------------------------------

C10 = criterion(10, "continuous strategy-freedom equals strategy-freedom plus uniform continuity")


@C10
@pytest.mark.parametrize("w", [UNIFORM3, SKEW], ids=["uniform", "skew"])
def test_c10_cea_continuously_strategy_free(w):
    rep = check_continuous_strategy_free(RuleSpec.cea(w), w, epsilons=(0.1, 0.01))
    assert rep.passed
    assert all(d > 0 for d in rep.details["deltaAt"])


def _catalog_for_continuity():
    return _catalog3()[:2] + [RuleSpec.cea_kappa(1.0), RuleSpec.proportional(),
                              RuleSpec("separableDirectional"),
                              RuleSpec.parse("separableDirectional:caps=powerLaw;w=uniform;kappa=0.5"),
                              RuleSpec("nonCharLiteral"), RuleSpec("nonCharRepaired"),
                              RuleSpec("responsiveSFLiteral"), RuleSpec("responsiveSFRepaired"),
                              RuleSpec.patched(KEPT[:5], RuleSpec.cea())]


@C10
@pytest.mark.parametrize("rule", _catalog_for_continuity(), ids=str)
def test_c10_equivalence_per_rule(rule):
    w = own_weight(rule)
    sf = check_strategy_free(rule, w, SFGrid(random_probes=2000))
    csf = check_continuous_strategy_free(rule, w)
    uc = estimate_continuity_modulus(rule, 6.0)
    assert csf.passed == (sf.passed and uc.passed), {
        "sf": sf.verdict, "csf": csf.verdict, "ucDeltaAt": uc.delta_at, "ucWitness": uc.witness}


# -- 11 --------------------------------------------------------------------------------

C11 = criterion(11, "contract audit of the literal constructions and their repairs")


@C11
def test_c11_documented_violation():
    p = ClaimsProblem(5, (10, 1, 0.5))
    rep = check_rule_contract(allocate(RuleSpec("responsiveSFLiteral"), p), p)
    assert (rep.violated_equation, rep.offending_index) == (3, 2)
    assert rep.discrepancy == pytest.approx(2.5, abs=1e-12)
    assert documented_violation(RuleSpec("responsiveSFLiteral"), p) == 3


@C11
def test_c11_literal_violations_exactly_where_documented():
    rule = RuleSpec("responsiveSFLiteral")
    seen = 0
    for p in random_problems(SampleConfig(seed=11).rng(), 3, 10_000):
        rep = check_rule_contract(allocate(rule, p), p)
        predicted = documented_violation(rule, p)
        assert (None if rep.passed else rep.violated_equation) == predicted, p
        seen += predicted is not None
    assert seen > 0


@C11
@pytest.mark.parametrize("kind", ["nonCharRepaired", "responsiveSFRepaired"])
def test_c11_repaired_variants_pass_contract(kind):
    rule = RuleSpec(kind)
    for p in random_problems(SampleConfig(seed=12).rng(), 3, 10_000):
        rep = check_rule_contract(allocate(rule, p), p)
        assert rep.passed, (p, rep)


@C11
def test_c11_non_char_alpha_excludes_uniform():
    rule = RuleSpec("nonCharLiteral")
    est = estimate_alpha(rule)
    assert not est.contains(UNIFORM3)
    p = ClaimsProblem(6, (1, 3, 5))
    z = allocate(rule, p).awards
    np.testing.assert_allclose(z, [1, 0, 5], atol=1e-12)
    # claimant 1 gets nothing although min(c_1, E/3) = 2
    assert z[1] < min(p.claims[1], p.endowment / 3)
    assert est.upper[1] < 1 / 3
