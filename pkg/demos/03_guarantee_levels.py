"""
Guarantee levels
================

alpha_i is the largest share rho such that claimant i always gets at least
min(c_i, rho E). For weighted CEA it equals the weight; for proportional
division it is zero.
"""

# %%
import numpy as np

from claimslab import RuleSpec, WeightVector
from claimslab.axioms import SFGrid, cross_check_sf_alpha, estimate_alpha

for text in ("cea:w=0.5,0.3,0.2", "proportional", "responsiveSFRepaired"):
    est = estimate_alpha(RuleSpec.parse(text))
    print(f"{text:20s}", np.round(est.lower, 4), np.round(est.upper, 4), est.responsive_class)

# %%
# For rules whose levels sum to one, strategy-freedom for w holds exactly
# when the levels equal w.
rule = RuleSpec.cea(WeightVector([0.5, 0.3, 0.2]))
for w in ([0.5, 0.3, 0.2], [0.2, 0.3, 0.5]):
    rep = cross_check_sf_alpha(rule, WeightVector(w), SFGrid(random_probes=1000))
    print(w, rep.verdict, rep.details["strategyFree"], rep.details["alphaContainsWeight"])
