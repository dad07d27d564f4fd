"""Semantic exception hierarchy for the royalty engine.

Every predictable failure mode has its own class so callers (CLI, service,
tests) can branch on type instead of string-matching messages. ``code``
carries the stable machine-readable identifier used on the wire.
"""

from __future__ import annotations


class NashRoyaltyError(Exception):
    """Base class for all engine errors."""

    code = "error"


class InvalidInputError(NashRoyaltyError, ValueError):
    """An argument violates its documented domain."""

    code = "invalid_input"


class NegativePayoffError(InvalidInputError):
    """A raw disagreement payoff is negative."""

    code = "negative_payoff"


class NormalizedOutOfRangeError(InvalidInputError):
    """A normalized disagreement payoff falls outside [0, 1]."""

    code = "normalized_out_of_range"


class NoDealError(NashRoyaltyError):
    """Disagreement payoffs exceed total profit; no bargain exists."""

    code = "no_deal"


class InvalidWeightError(InvalidInputError):
    """A bargaining weight falls outside [0, 1]."""

    code = "invalid_weight"


class DegenerateOriginError(NashRoyaltyError):
    """A ratio-based weight is undefined at d1 = d2 = 0."""

    code = "degenerate_origin"


class InfeasibleError(NashRoyaltyError):
    """Raw disagreement payoffs exceed the divisible operating income."""

    code = "infeasible"


class InvalidCanvasError(InvalidInputError):
    """Nomograph canvas dimensions or tick steps are unusable."""

    code = "invalid_canvas"


class DegenerateLineError(NashRoyaltyError):
    """Isopleth cannot be read: the grid point sits on the result scale."""

    code = "degenerate_line"


class ScenarioParseError(NashRoyaltyError):
    """A scenario file is not valid JSON."""

    code = "parse_error"


class ScenarioValidationError(NashRoyaltyError):
    """A scenario file parses but violates the schema.

    ``problems`` lists every violated invariant, not just the first.
    """

    code = "validation_error"

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DegenerateOriginWarning(UserWarning):
    """Symmetric-limit convention applied at d1 = d2 = 0."""
