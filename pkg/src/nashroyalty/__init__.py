"""Royalty determination through the normalized asymmetric Nash bargaining solution.

Library layers:

* :mod:`nashroyalty.core` — financial types and the closed-form share.
* :mod:`nashroyalty.weights` — bargaining-weight estimation.
* :mod:`nashroyalty.analysis` — Pareto scans and solution families.
* :mod:`nashroyalty.oracles` — independent numeric verification.
* :mod:`nashroyalty.nomograph` — the straight-edge alignment chart.
* :mod:`nashroyalty.cli` / :mod:`nashroyalty.service` — command line and HTTP front ends.
"""

from .core import (
    BargainOutcome,
    DisagreementPoint,
    FinancialProfile,
    normalize_disagreement,
    partition_profits,
    solve_classic,
    solve_royalty_share,
)
from .errors import (
    DegenerateLineError,
    DegenerateOriginError,
    DegenerateOriginWarning,
    InfeasibleError,
    InvalidCanvasError,
    InvalidInputError,
    InvalidWeightError,
    NashRoyaltyError,
    NegativePayoffError,
    NoDealError,
    NormalizedOutOfRangeError,
    ScenarioParseError,
    ScenarioValidationError,
)
from .weights import (
    CaseWeight,
    CompositeWeight,
    ConstantWeight,
    PerceptionMatrix,
    PerceptionWeight,
    StrengthInputs,
    ViolatingDemoWeight,
    WeightModel,
    alpha_from_perceptions,
    case_alpha,
    case_royalty,
    example_alpha,
    model_from_descriptor,
    strength_competitors,
    strength_market_share,
    strength_patent_life,
    violating_demo_alpha,
)

__version__ = "0.1.0"
