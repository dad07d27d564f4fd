"""Independent numeric verification of the closed forms.

Two oracles, both deliberately ignorant of the closed-form partition:

* ``maximize_nash_product`` solves the constrained weighted-gains product
  max (pi1 - d1)^a (pi2 - d2)^(1-a) numerically: the budget constraint is
  tight at any maximum, so the problem collapses to one dimension; a
  coarse grid locates the mode and golden-section refinement narrows it.
  Maximization happens in log space, where the objective is concave, so
  golden section is safe.

* ``rubinstein_limit_share`` plays the alternating-offers game whose
  vanishing-interval limit reproduces the ratio split d1/(d1 + d2). Party
  discount rates are set from the *opponent's* normalized disagreement
  payoff (d1/d2 = r_B/r_A), party 1 proposes first, and the first-proposer
  subgame-perfect share (1 - delta_B) / (1 - delta_A delta_B) is reported.
  Proposer advantage vanishes linearly as the offer interval shrinks.

``run_verification`` bundles the seeded random agreement suites behind the
CLI ``verify`` subcommand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DisagreementPoint, FinancialProfile, partition_profits
from .errors import DegenerateOriginError, InfeasibleError, InvalidInputError, InvalidWeightError

__all__ = [
    "MaximizerResult",
    "RubinsteinParams",
    "maximize_nash_product",
    "rubinstein_limit_share",
    "rubinstein_share",
    "run_verification",
]

COARSE_GRID_POINTS = 10_001          # >= 1e4 samples over [d1, O_I - d2]
REFINE_WIDTH_FACTOR = 1e-10          # golden section stops at 1e-10 * O_I
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MaximizerResult:
    pi1_star: float
    pi2_star: float
    nash_product_value: float
    iterations: int


@dataclass(frozen=True)
class RubinsteinParams:
    """Alternating-offers discounting: per-time rates and the offer interval."""

    discount_rate_1: float
    discount_rate_2: float
    offer_interval: float

    def __post_init__(self) -> None:
        if self.discount_rate_1 <= 0 or self.discount_rate_2 <= 0:
            raise InvalidInputError("discount rates must be > 0")
        if self.offer_interval <= 0:
            raise InvalidInputError("offer interval must be > 0")


def _log_nash_product(pi1: np.ndarray, O_I: float, d1: float, d2: float, alpha: float):
    with np.errstate(divide="ignore", invalid="ignore"):
        return alpha * np.log(pi1 - d1) + (1.0 - alpha) * np.log(O_I - pi1 - d2)


def maximize_nash_product(
    O_I: float, d1: float, d2: float, alpha: float
) -> MaximizerResult:
    """Numerically maximize the weighted-gains product on the profit frontier.

    Searches pi1 in [d1, O_I - d2] with pi2 = O_I - pi1. Boundary weights
    are special-cased (the whole surplus goes to the weighted party);
    otherwise a ``COARSE_GRID_POINTS`` grid bounds the mode and golden
    section shrinks the bracket below ``REFINE_WIDTH_FACTOR * O_I``.
    """
    if O_I <= 0:
        raise InvalidInputError("operating income must be > 0")
    if d1 < 0 or d2 < 0:
        raise InvalidInputError("disagreement payoffs must be >= 0")
    if not 0.0 <= alpha <= 1.0:
        raise InvalidWeightError(f"bargaining weight {alpha!r} outside [0, 1]")
    if d1 + d2 > O_I:
        raise InfeasibleError(
            f"d1 + d2 = {d1 + d2:.6g} exceeds operating income {O_I:.6g}"
        )

    lo, hi = d1, O_I - d2
    if hi - lo == 0.0 or alpha == 0.0 or alpha == 1.0:
        # Zero surplus, or a boundary weight: the optimum sits at an endpoint
        # where the log objective diverges; evaluate the limit directly.
        pi1 = lo if alpha == 0.0 else (hi if alpha == 1.0 else lo)
        return _finish(pi1, O_I, d1, d2, alpha, iterations=0)

    grid = np.linspace(lo, hi, COARSE_GRID_POINTS)
    values = _log_nash_product(grid, O_I, d1, d2, alpha)
    values[~np.isfinite(values)] = -np.inf
    k = int(np.argmax(values))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, COARSE_GRID_POINTS - 1)]

    # Golden-section refinement of the bracket [a, b].
    def f(x: float) -> float:
        if x <= d1 or x >= O_I - d2:
            return -math.inf
        return alpha * math.log(x - d1) + (1.0 - alpha) * math.log(O_I - x - d2)

    target = REFINE_WIDTH_FACTOR * O_I
    c = b - INV_PHI * (b - a)
    e = a + INV_PHI * (b - a)
    fc, fe = f(c), f(e)
    iterations = 0
    while b - a > target:
        iterations += 1
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + INV_PHI * (b - a)
            fe = f(e)
        if iterations > 200:  # 0.618^200 underflows any sane interval
            break
    return _finish((a + b) / 2.0, O_I, d1, d2, alpha, iterations)


def _finish(
    pi1: float, O_I: float, d1: float, d2: float, alpha: float, iterations: int
) -> MaximizerResult:
    pi1 = float(pi1)  # keep numpy scalars out of results (they poison json.dumps)
    pi2 = O_I - pi1
    value = max(pi1 - d1, 0.0) ** alpha * max(pi2 - d2, 0.0) ** (1.0 - alpha)
    return MaximizerResult(
        pi1_star=pi1, pi2_star=pi2, nash_product_value=value, iterations=iterations
    )


def rubinstein_share(params: RubinsteinParams) -> float:
    """First-proposer share (1 - delta_2) / (1 - delta_1 delta_2), delta_i = exp(-r_i * dt)."""
    dt = params.offer_interval
    delta_1 = math.exp(-params.discount_rate_1 * dt)
    num = -math.expm1(-params.discount_rate_2 * dt)  # 1 - delta_2, stable for tiny x
    den = 1.0 - delta_1 * math.exp(-params.discount_rate_2 * dt)
    return num / den


def rubinstein_limit_share(
    d: DisagreementPoint, delta: float, rate_scale: float = 1.0
) -> float:
    """Alternating-offers share whose delta -> 0 limit is d1 / (d1 + d2).

    The opponent-impatience mapping sets party 1's rate to d2 and party 2's
    to d1 (times any common positive ``rate_scale``; the limit is invariant
    to it). Either payoff may be zero — the formula then returns exactly 0
    or 1 — but the origin is degenerate.
    """
    if delta <= 0:
        raise InvalidInputError("offer interval must be > 0")
    if rate_scale <= 0:
        raise InvalidInputError("rate_scale must be > 0")
    if d.total == 0.0:
        raise DegenerateOriginError("alternating-offers share undefined at d1 = d2 = 0")
    r_1 = d.d2_norm * rate_scale
    r_2 = d.d1_norm * rate_scale
    num = -math.expm1(-r_2 * delta)
    den = 1.0 - math.exp(-r_1 * delta) * math.exp(-r_2 * delta)
    return num / den


# ---------------------------------------------------------------------------
# Seeded verification suites (CLI `verify`)
# ---------------------------------------------------------------------------

def _random_instances(rng: np.random.Generator, count: int):
    for _ in range(count):
        O_I = rng.uniform(1.0, 1e6)
        d1 = rng.uniform(0.0, O_I)
        d2 = rng.uniform(0.0, O_I - d1)
        alpha = rng.uniform(0.0, 1.0)
        yield O_I, d1, d2, alpha


def run_verification(instances: int = 1000, seed: int = 20_240_001) -> dict:
    """Run the oracle agreement suites; return a JSON-ready report.

    Checks, over ``instances`` seeded random feasible bargains:

    * numeric maximizer vs closed-form partition within 1e-6 * O_I;
    * the first-order optimality condition within 1e-6 * O_I;
    * alternating-offers share at delta = 1e-6 within 1e-4 of the ratio
      split, including a rate_scale = 10 rerun (scale invariance).
    """
    rng = np.random.default_rng(seed)
    checks: list[dict] = []

    agree_worst = 0.0
    foc_worst = 0.0
    for O_I, d1, d2, alpha in _random_instances(rng, instances):
        result = maximize_nash_product(O_I, d1, d2, alpha)
        fin = FinancialProfile(operating_revenue=2.0 * O_I, operating_cost=O_I)
        point = DisagreementPoint(min(d1 / O_I, 1.0), min(d2 / O_I, 1.0))
        closed = partition_profits(fin, point, alpha)
        agree_worst = max(agree_worst, abs(result.pi1_star - closed.profit_1) / O_I)
        foc = abs(
            (1.0 - alpha) * (result.pi1_star - d1) - alpha * (result.pi2_star - d2)
        )
        foc_worst = max(foc_worst, foc / O_I)
    checks.append(
        {
            "name": "nash_product_maximizer_agrees_with_closed_form",
            "instances": instances,
            "worst_relative_error": agree_worst,
            "tolerance": 1e-6,
            "pass": agree_worst <= 1e-6,
        }
    )
    checks.append(
        {
            "name": "first_order_condition",
            "instances": instances,
            "worst_relative_error": foc_worst,
            "tolerance": 1e-6,
            "pass": foc_worst <= 1e-6,
        }
    )

    rub_worst = 0.0
    for _ in range(100):
        d1 = rng.uniform(0.01, 0.95)
        d2 = rng.uniform(0.01, 1.0 - d1 - 0.01)
        point = DisagreementPoint(d1, d2)
        expected = d1 / (d1 + d2)
        for scale in (1.0, 10.0):
            got = rubinstein_limit_share(point, delta=1e-6, rate_scale=scale)
            rub_worst = max(rub_worst, abs(got - expected))
    checks.append(
        {
            "name": "alternating_offers_limit",
            "instances": 100,
            "worst_absolute_error": rub_worst,
            "tolerance": 1e-4,
            "pass": rub_worst <= 1e-4,
        }
    )

    return {
        "seed": seed,
        "pass": all(c["pass"] for c in checks),
        "checks": checks,
    }
