"""
Auditing axioms
===============

Each checker walks a grid plus seeded random probes and returns the first
violation it finds. A pass means nothing broke at that budget.
"""

# %%
from claimslab import RuleSpec, WeightVector
from claimslab.axioms import (
    SFGrid,
    check_claims_monotonicity,
    check_homogeneity,
    check_strategy_free,
    recheck_witness,
)
from claimslab.sampling import SampleConfig

skew = WeightVector([0.5, 0.3, 0.2])
grid = SFGrid(random_probes=2000)

# %%
# CEA with weight w leaves everyone else whole when one claimant inflates.
print(check_strategy_free(RuleSpec.cea(skew), skew, grid).verdict)

# %%
# Proportional division does not.
rep = check_strategy_free(RuleSpec.proportional(), WeightVector.uniform(3), grid)
print(rep.verdict, rep.witness["problem"], rep.witness["awards"])
print("witness reproduces:", recheck_witness(rep))

# %%
# The power-law family keeps homogeneity but loses claims monotonicity.
kappa = RuleSpec.cea_kappa(1.0)
print("homogeneity", check_homogeneity(kappa, SampleConfig(count=500)).verdict)
rep = check_claims_monotonicity(kappa, SampleConfig(count=500))
print("monotonicity", rep.verdict, rep.witness)
