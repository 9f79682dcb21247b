"""
A rule strategy-free for many weights at once
=============================================

With four or more claimants, random weights are rarely related, so a
greedy pass keeps a large independent set. The patched rule serves every
kept weight on its D-related problems and falls back on CEA elsewhere.
"""

# %%
from claimslab import ClaimsProblem, RuleSpec, allocate
from claimslab.axioms import SFGrid, check_strategy_free
from claimslab.badpairs import greedy_independent_set
from claimslab.sampling import random_weights

kept = greedy_independent_set(random_weights(8, 4, 50))
print(len(kept), "of 50 kept")
rule = RuleSpec.patched(kept, RuleSpec.cea())

# %%
for w in kept[:3]:
    print(w, check_strategy_free(rule, w, SFGrid(random_probes=500)).verdict)

# %%
# On a problem D-related to kept[0], the others get exactly their claims.
w = kept[0].weights
c = 10 * w
c[0] = 20.0
p = ClaimsProblem(10 * (1 - w[0]) + 10 * w[0] + 1, c)
print(p.claims, allocate(rule, p).awards)
