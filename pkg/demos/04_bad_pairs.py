"""
Weights that cannot share a rule
================================

Two weights that share a D-related problem demand contradictory awards
there, so no rule is strategy-free for both.
"""

# %%
from claimslab import RuleSpec, WeightVector, allocate
from claimslab.badpairs import common_d_witness, impossibility_witness, is_b_prime, is_bad_pair

u = WeightVector([0.2, 0.5, 0.3])
v = WeightVector([0.4, 0.2, 0.4])
bad, idx = is_bad_pair(u, v)
print("bad pair:", bad, idx)

# %%
wp = impossibility_witness(u, v, idx)
print("problem", wp.problem)
print("forced by u", wp.forced_award_u.awards)
print("forced by v", wp.forced_award_v.awards)

# %%
# Whatever a rule does here, it breaks strategy-freedom for u or for v.
for text in ("cea:w=0.2,0.5,0.3", "cea:w=0.4,0.2,0.4", "proportional"):
    print(text, wp.refuted(allocate(RuleSpec.parse(text), wp.problem)))

# %%
# Pairs sharing a direction off one coordinate also collide.
a, b = WeightVector([0.4, 0.36, 0.24]), WeightVector([0.2, 0.48, 0.32])
print(is_b_prime(a, b), common_d_witness(a, b))
