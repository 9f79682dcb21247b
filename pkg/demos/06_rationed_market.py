"""
Order inflation in a rationed market
====================================

Three retailers order from a supplier with 9 units and compete a la
Cournot in P = 12 - Q. Without rationing each orders 3. Under
proportional rationing, inflating one's order pays; under CEA it does not.
"""

# %%
from claimslab import RuleSpec
from claimslab.market import CournotMarket, equilibrium_preservation_report, nash_equilibrium, preserved

m = CournotMarket.parse("a=12,b=1,costs=0,0,0")
print("equilibrium", nash_equilibrium(m))

# %%
for text in ("cea:w=uniform", "proportional", "cea:w=0.5,0.3,0.2"):
    reports = equilibrium_preservation_report(m, RuleSpec.parse(text), 9.0)
    gains = [round(r.gain, 4) for r in reports]
    print(f"{text:20s} preserved={preserved(reports)} gains={gains}")
