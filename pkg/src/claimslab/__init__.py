"""Claims problems, strategy-free division rules and their empirical audits."""

__version__ = "0.1.0"

from .core import AwardVector, ClaimsProblem, WeightVector, check_rule_contract, water_fill
from .rules import RuleSpec, allocate

__all__ = [
    "AwardVector",
    "ClaimsProblem",
    "RuleSpec",
    "WeightVector",
    "__version__",
    "allocate",
    "check_rule_contract",
    "water_fill",
]
