"""Financial domain types and the closed-form normalized asymmetric NBS.

The model splits a licensed product's operating income between licensor
(party 1) and licensee (party 2). All bargaining arithmetic happens on
income-normalized quantities: each disagreement payoff is divided by
operating income, so the royalty share ``r/O_M`` is party 1's fraction of
total profit and lives in [0, 1] regardless of deal size. Multiplying the
share by the operating margin converts it back into a royalty rate on
revenue.

Everything here is an immutable value type or a pure function; concurrent
use needs no coordination.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    InvalidInputError,
    InvalidWeightError,
    NegativePayoffError,
    NoDealError,
    NormalizedOutOfRangeError,
)

__all__ = [
    "FinancialProfile",
    "DisagreementPoint",
    "BargainOutcome",
    "normalize_disagreement",
    "solve_royalty_share",
    "solve_classic",
    "partition_profits",
]


@dataclass(frozen=True)
class FinancialProfile:
    """Operating financials of the licensed product.

    Rejects non-positive operating income: a royalty carved out of a
    loss-making product is outside the model.
    """

    operating_revenue: float
    operating_cost: float

    def __post_init__(self) -> None:
        if self.operating_revenue < 0:
            raise InvalidInputError("operating_revenue must be >= 0")
        if self.operating_cost < 0:
            raise InvalidInputError("operating_cost must be >= 0")
        if self.operating_revenue <= 0 or self.operating_income <= 0:
            raise InvalidInputError(
                "operating income and revenue must be positive "
                f"(revenue={self.operating_revenue}, cost={self.operating_cost})"
            )

    @property
    def operating_income(self) -> float:
        return self.operating_revenue - self.operating_cost

    @property
    def operating_margin(self) -> float:
        """Operating income over revenue; in (0, 1] by construction."""
        return self.operating_income / self.operating_revenue


@dataclass(frozen=True)
class DisagreementPoint:
    """Income-normalized disagreement payoffs (d1, d2).

    Each coordinate must lie in [0, 1]. The joint feasibility constraint
    d1 + d2 <= 1 is deliberately *not* enforced here: it is checked at
    solve time, where a violation raises :class:`NoDealError`. This lets
    callers build and inspect infeasible points (e.g. UI sliders).
    """

    d1_norm: float
    d2_norm: float

    def __post_init__(self) -> None:
        for name, value in (("d1_norm", self.d1_norm), ("d2_norm", self.d2_norm)):
            if not 0.0 <= value <= 1.0:
                raise NormalizedOutOfRangeError(
                    f"{name}={value!r} outside [0, 1]"
                )

    @property
    def total(self) -> float:
        return self.d1_norm + self.d2_norm

    @property
    def surplus_fraction(self) -> float:
        """Fraction of operating income left after both opportunity costs."""
        return 1.0 - self.d1_norm - self.d2_norm

    def is_feasible(self) -> bool:
        return self.total <= 1.0

    def require_feasible(self) -> None:
        if self.total > 1.0:
            raise NoDealError(
                f"no deal: d1 + d2 = {self.total:.6g} > 1; "
                "the parties' opportunity costs exceed total profit"
            )


@dataclass(frozen=True)
class BargainOutcome:
    """Solved bargain: royalty share/rate and the profit partition.

    ``royalty_share`` is party 1's fraction of operating income (r/O_M),
    ``royalty_rate`` the corresponding fraction of revenue (r). Profits are
    in money units and conserve operating income exactly.
    """

    royalty_share: float
    royalty_rate: float
    profit_1: float
    profit_2: float
    surplus: float


def normalize_disagreement(
    d1: float, d2: float, fin: FinancialProfile
) -> DisagreementPoint:
    """Divide raw money disagreement payoffs by operating income.

    Raises :class:`NegativePayoffError` for negative payoffs and
    :class:`NormalizedOutOfRangeError` when a payoff exceeds the whole
    operating income (quotient > 1).
    """
    if d1 < 0 or d2 < 0:
        raise NegativePayoffError(f"disagreement payoffs must be >= 0, got ({d1}, {d2})")
    income = fin.operating_income
    q1 = d1 / income
    q2 = d2 / income
    if q1 > 1.0 or q2 > 1.0:
        raise NormalizedOutOfRangeError(
            f"normalized payoffs ({q1:.6g}, {q2:.6g}) exceed 1: "
            "a payoff larger than operating income cannot be normalized"
        )
    return DisagreementPoint(q1, q2)


def _check_weight(alpha: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise InvalidWeightError(f"bargaining weight {alpha!r} outside [0, 1]")


def solve_royalty_share(d: DisagreementPoint, alpha: float) -> float:
    """Royalty share of the asymmetric NBS: d1 + alpha * (1 - d1 - d2).

    Party 1 keeps its opportunity cost plus a weight-alpha slice of the
    surplus. Strictly increasing in alpha with slope (1 - d1 - d2); bounded
    by d1 below and 1 - d2 above. Feasibility is non-strict: d1 + d2 = 1
    is a legal zero-surplus bargain returning exactly d1.
    """
    _check_weight(alpha)
    d.require_feasible()
    return d.d1_norm + alpha * (1.0 - d.d1_norm - d.d2_norm)


def solve_classic(d: DisagreementPoint) -> float:
    """Royalty share of the classic symmetric NBS: (1 + d1 - d2) / 2.

    Identical to ``solve_royalty_share(d, 0.5)``.
    """
    d.require_feasible()
    return (1.0 + d.d1_norm - d.d2_norm) / 2.0


def partition_profits(
    fin: FinancialProfile, d: DisagreementPoint, alpha: float
) -> BargainOutcome:
    """Solve the bargain and scale it back into money.

    profit_1 = share * O_I and profit_2 = O_I - profit_1, so conservation
    holds to the last bit. The royalty rate is share * operating margin.
    """
    share = solve_royalty_share(d, alpha)
    income = fin.operating_income
    profit_1 = share * income
    return BargainOutcome(
        royalty_share=share,
        royalty_rate=share * fin.operating_margin,
        profit_1=profit_1,
        profit_2=income - profit_1,
        surplus=income * d.surplus_fraction,
    )
