"""
Dividing a short supply
=======================

A supplier holds E units and claimants ask for c. When the claims exceed
E, a rule decides who gets what. This walks through the catalog.
"""

# %%
import numpy as np

from claimslab import ClaimsProblem, RuleSpec, allocate

p = ClaimsProblem(6, (1, 4, 4))

# %%
# Equal awards with caps: everyone gets the same level until their claim binds.
z = allocate(RuleSpec.cea(), p)
print("cea uniform   ", z.awards, "level", z.lam)

# %%
# A weight tilts the level: claimant i is capped at lam * w_i.
z = allocate(RuleSpec.parse("cea:w=0.5,0.3,0.2"), ClaimsProblem(6, (4, 4, 4)))
print("cea weighted  ", z.awards)

# %%
# Power-law caps shrink as a claim grows, so asking for more can hurt.
rule = RuleSpec.parse("ceaKappa:w=uniform;kappa=1")
for c2 in (4.0, 5.0):
    print(f"ceaKappa c2={c2}", np.round(allocate(rule, ClaimsProblem(6, (1, 4, c2))).awards, 4))

# %%
# Proportional division, and the literal three-claimant constructions.
for text in ("proportional", "nonCharLiteral", "responsiveSFLiteral", "responsiveSFRepaired"):
    print(f"{text:22s}", np.round(allocate(RuleSpec.parse(text), ClaimsProblem(5, (10, 1, 0.5))).awards, 4))
