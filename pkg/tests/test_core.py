import math

import pytest
from hypothesis import given, strategies as st

from nashroyalty.core import (
    BargainOutcome,
    DisagreementPoint,
    FinancialProfile,
    normalize_disagreement,
    partition_profits,
    solve_classic,
    solve_royalty_share,
)
from nashroyalty.errors import (
    InvalidInputError,
    InvalidWeightError,
    NegativePayoffError,
    NoDealError,
    NormalizedOutOfRangeError,
)

# O_I = 100 with margin 0.25
FIN = FinancialProfile(operating_revenue=400.0, operating_cost=300.0)


def feasible_points(max_total=1.0):
    """Strategy for feasible disagreement points (d1 + d2 <= max_total)."""
    return st.tuples(
        st.floats(0.0, 1.0, allow_nan=False), st.floats(0.0, 1.0, allow_nan=False)
    ).map(
        lambda t: DisagreementPoint(
            t[0] * max_total, (1.0 - t[0]) * t[1] * max_total
        )
    )


class TestFinancialProfile:
    def test_income_and_margin_are_derived_exactly(self):
        assert FIN.operating_income == 100.0
        assert FIN.operating_margin == 0.25

    def test_rejects_loss_making_product(self):
        with pytest.raises(InvalidInputError):
            FinancialProfile(operating_revenue=100.0, operating_cost=100.0)
        with pytest.raises(InvalidInputError):
            FinancialProfile(operating_revenue=100.0, operating_cost=150.0)

    def test_rejects_negative_inputs(self):
        with pytest.raises(InvalidInputError):
            FinancialProfile(operating_revenue=-1.0, operating_cost=0.0)
        with pytest.raises(InvalidInputError):
            FinancialProfile(operating_revenue=10.0, operating_cost=-1.0)

    def test_margin_in_unit_interval(self):
        fin = FinancialProfile(operating_revenue=50.0, operating_cost=0.0)
        assert fin.operating_margin == 1.0


class TestDisagreementPoint:
    def test_coordinates_must_be_in_unit_interval(self):
        with pytest.raises(NormalizedOutOfRangeError):
            DisagreementPoint(-0.1, 0.2)
        with pytest.raises(NormalizedOutOfRangeError):
            DisagreementPoint(0.1, 1.2)

    def test_infeasible_sum_is_constructible_but_not_solvable(self):
        # Feasibility is a solve-time check, not a construction-time one.
        point = DisagreementPoint(0.7, 0.4)
        assert not point.is_feasible()
        with pytest.raises(NoDealError):
            point.require_feasible()

    def test_boundary_sum_is_feasible(self):
        DisagreementPoint(0.6, 0.4).require_feasible()


class TestNormalizeDisagreement:
    def test_divides_by_operating_income(self):
        point = normalize_disagreement(20.0, 30.0, FIN)
        assert point == DisagreementPoint(0.2, 0.3)

    def test_zero_payoffs(self):
        assert normalize_disagreement(0.0, 0.0, FIN) == DisagreementPoint(0.0, 0.0)

    def test_quotient_above_one_is_rejected(self):
        with pytest.raises(NormalizedOutOfRangeError):
            normalize_disagreement(150.0, 0.0, FIN)

    def test_negative_payoff_is_rejected(self):
        with pytest.raises(NegativePayoffError):
            normalize_disagreement(-1.0, 0.0, FIN)


class TestSolveRoyaltyShare:
    def test_worked_example(self):
        # d1 + alpha * surplus = 0.2 + 0.4 * 0.5
        assert solve_royalty_share(DisagreementPoint(0.2, 0.3), 0.4) == pytest.approx(
            0.40, abs=1e-12
        )

    def test_symmetric_split_of_full_surplus(self):
        assert solve_royalty_share(DisagreementPoint(0.0, 0.0), 0.5) == 0.5

    def test_zero_surplus_returns_d1(self):
        assert solve_royalty_share(DisagreementPoint(0.6, 0.4), 0.9) == pytest.approx(
            0.6, abs=1e-15
        )

    def test_no_deal(self):
        with pytest.raises(NoDealError):
            solve_royalty_share(DisagreementPoint(0.7, 0.4), 0.5)

    @pytest.mark.parametrize("alpha", [-0.1, 1.1, math.nan])
    def test_invalid_weight(self, alpha):
        with pytest.raises(InvalidWeightError):
            solve_royalty_share(DisagreementPoint(0.2, 0.3), alpha)

    @given(feasible_points(), st.floats(0.0, 1.0))
    def test_bounds(self, d, alpha):
        share = solve_royalty_share(d, alpha)
        assert d.d1_norm - 1e-12 <= share <= 1.0 - d.d2_norm + 1e-12

    @given(feasible_points(max_total=0.999), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_monotone_in_alpha_with_exact_slope(self, d, a1, a2):
        lo, hi = sorted((a1, a2))
        r_lo = solve_royalty_share(d, lo)
        r_hi = solve_royalty_share(d, hi)
        slope_gap = (r_hi - r_lo) - (hi - lo) * d.surplus_fraction
        assert abs(slope_gap) <= 1e-12
        if hi > lo:
            assert r_hi > r_lo - 1e-15


class TestSolveClassic:
    def test_worked_example(self):
        # 0.45 cross-checked against the numeric product maximizer
        # (see test_oracles.test_agrees_with_classic_share).
        assert solve_classic(DisagreementPoint(0.2, 0.3)) == pytest.approx(0.45, abs=1e-12)

    def test_origin_symmetry(self):
        assert solve_classic(DisagreementPoint(0.0, 0.0)) == 0.5

    @given(st.floats(0.0, 0.5))
    def test_equal_payoffs_split_equally(self, x):
        assert solve_classic(DisagreementPoint(x, x)) == pytest.approx(0.5, abs=1e-15)

    @given(feasible_points())
    def test_swap_symmetry_sums_to_one(self, d):
        swapped = DisagreementPoint(d.d2_norm, d.d1_norm)
        assert solve_classic(d) + solve_classic(swapped) == pytest.approx(1.0, abs=1e-12)

    @given(feasible_points())
    def test_equals_half_weight_solution(self, d):
        assert solve_classic(d) == pytest.approx(
            solve_royalty_share(d, 0.5), abs=1e-15
        )


class TestPartitionProfits:
    def test_worked_example(self):
        out = partition_profits(FIN, DisagreementPoint(0.2, 0.3), 0.5)
        assert out.profit_1 == pytest.approx(45.0, abs=1e-9)
        assert out.profit_2 == pytest.approx(55.0, abs=1e-9)
        assert out.royalty_rate == pytest.approx(0.45 * 0.25, abs=1e-12)
        assert out.surplus == pytest.approx(50.0, abs=1e-9)

    def test_symmetric_origin(self):
        out = partition_profits(FIN, DisagreementPoint(0.0, 0.0), 0.5)
        assert (out.profit_1, out.profit_2) == (50.0, 50.0)

    def test_full_weight_gives_party_1_all_surplus(self):
        out = partition_profits(FIN, DisagreementPoint(0.2, 0.3), 1.0)
        assert out.profit_1 == pytest.approx(70.0, abs=1e-9)
        assert out.profit_2 == pytest.approx(30.0, abs=1e-9)

    @given(feasible_points(), st.floats(0.0, 1.0))
    def test_conservation(self, d, alpha):
        out = partition_profits(FIN, d, alpha)
        total = out.profit_1 + out.profit_2
        assert abs(total - FIN.operating_income) <= 1e-12 * FIN.operating_income

    @given(
        feasible_points(),
        st.floats(0.0, 1.0),
        st.floats(1e-3, 1e6),
    )
    def test_scale_consistency(self, d, alpha, k):
        # Affine invariance: scaling income by k scales profits by k and
        # leaves the share untouched.
        base = partition_profits(FinancialProfile(2.0, 1.0), d, alpha)
        scaled = partition_profits(FinancialProfile(2.0 * k, k), d, alpha)
        assert scaled.royalty_share == base.royalty_share
        # Tolerances are relative to the income scale k * O_I (profits near a
        # boundary cancel to a tiny residual that cannot carry 1e-12 of its
        # own relative precision).
        assert scaled.profit_1 == pytest.approx(base.profit_1 * k, abs=1e-12 * k)
        assert scaled.profit_2 == pytest.approx(base.profit_2 * k, abs=1e-12 * k)

    def test_outcome_is_plain_record(self):
        out = BargainOutcome(0.4, 0.1, 40.0, 60.0, 50.0)
        assert out.royalty_share == 0.4
