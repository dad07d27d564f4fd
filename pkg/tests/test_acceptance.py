"""Acceptance suite.

One test per acceptance criterion, each pinned to its stated tolerance and
printing a PASS/FAIL line (run with ``pytest tests/test_acceptance.py -s``
to watch them stream).
"""

import contextlib
import json
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from nashroyalty.analysis import pareto_scan, solution_family
from nashroyalty.cli import run
from nashroyalty.core import DisagreementPoint, FinancialProfile, partition_profits, solve_royalty_share
from nashroyalty.nomograph import (
    build_layout,
    read_isopleth,
    render_svg,
    unit_alpha_point,
    unit_grid_point,
    unit_result_point,
)
from nashroyalty.oracles import maximize_nash_product, rubinstein_limit_share
from nashroyalty.service import create_app
from nashroyalty.weights import (
    CaseWeight,
    ConstantWeight,
    ViolatingDemoWeight,
    case_royalty,
    case_royalty_closed_form,
)

D = DisagreementPoint

GRID_STEP = 0.01
FD_STEP = 1e-4
TOL = 1e-6


@contextlib.contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"FAIL  {name}")
        raise
    print(f"PASS  {name}")


def feasible_grid(step=GRID_STEP):
    n = round(1.0 / step)
    for i in range(n + 1):
        for j in range(n + 1 - i):
            yield i * step, j * step


@pytest.fixture(scope="module")
def maximizer_runs():
    """1000 seeded random feasible bargains, solved numerically once."""
    rng = np.random.default_rng(20_240_001)
    runs = []
    started = time.monotonic()
    for _ in range(1000):
        O_I = rng.uniform(1.0, 1e6)
        d1 = rng.uniform(0.0, O_I)
        d2 = rng.uniform(0.0, O_I - d1)
        alpha = rng.uniform(0.0, 1.0)
        runs.append((O_I, d1, d2, alpha, maximize_nash_product(O_I, d1, d2, alpha)))
    return runs, time.monotonic() - started


def test_worked_example_share_everywhere(capsys):
    with criterion("worked-example share 0.40 from library, CLI and service"):
        share = solve_royalty_share(D(0.20, 0.30), 0.40)
        assert abs(share - 0.40) <= 1e-12

        code = run(["solve", "--d1", "0.2", "--d2", "0.3", "--alpha", "0.4", "--json"])
        cli_payload = json.loads(capsys.readouterr().out)
        assert code == 0
        assert cli_payload["royalty_share"] == share

        client = TestClient(create_app())
        response = client.post("/api/solve", json={"d1": 0.2, "d2": 0.3, "alpha": 0.4})
        assert response.status_code == 200
        assert response.json()["royalty_share"] == share


def test_oracle_equivalence(maximizer_runs):
    with criterion("numeric maximizer agrees with the closed-form partition (1000 seeded)"):
        runs, elapsed = maximizer_runs
        worst = 0.0
        for O_I, d1, d2, alpha, result in runs:
            fin = FinancialProfile(operating_revenue=2.0 * O_I, operating_cost=O_I)
            closed = partition_profits(fin, D(d1 / O_I, d2 / O_I), alpha)
            worst = max(worst, abs(result.pi1_star - closed.profit_1) / O_I)
        assert worst <= 1e-6, f"worst relative error {worst}"
        assert elapsed < 60.0, f"suite took {elapsed:.1f}s"


def test_first_order_condition(maximizer_runs):
    with criterion("first-order optimality holds at every numeric maximum"):
        runs, _ = maximizer_runs
        for O_I, d1, d2, alpha, result in runs:
            residual = abs(
                (1.0 - alpha) * (result.pi1_star - d1)
                - alpha * (result.pi2_star - d2)
            )
            assert residual <= 1e-6 * O_I


def test_case_closed_forms():
    with criterion("case 1/2 pipeline equals closed forms on the 0.01 grid; case 3 discrepancy"):
        worst = 0.0
        for case in (1, 2):
            for d1, d2 in feasible_grid():
                if case == 2 and d1 + d2 == 0.0:
                    continue
                diff = abs(
                    case_royalty(case, D(d1, d2))
                    - case_royalty_closed_form(case, D(d1, d2))
                )
                worst = max(worst, diff)
        assert worst <= 1e-12, f"worst pipeline/closed-form gap {worst}"

        pipeline = case_royalty(3, D(0.2, 0.3))
        printed = case_royalty(3, D(0.2, 0.3), printed_form=True)
        assert pipeline == pytest.approx(0.41667, abs=5e-6)
        assert printed == pytest.approx(0.43333, abs=5e-6)
        assert pipeline == pytest.approx(5.0 / 12.0, abs=1e-12)
        assert printed == pytest.approx(13.0 / 30.0, abs=1e-12)


def test_alternating_offers_limit():
    with criterion("alternating-offers share at dt=1e-6 within 1e-4 of the ratio split (100 random)"):
        rng = np.random.default_rng(8_675_309)
        for _ in range(100):
            d1 = rng.uniform(0.01, 0.95)
            d2 = rng.uniform(0.01, 1.0 - d1 - 0.005)
            share = rubinstein_limit_share(D(d1, d2), delta=1e-6)
            assert abs(share - d1 / (d1 + d2)) <= 1e-4


def test_pareto_scans():
    with criterion("cases 1-3 and constant weights pass the scan; demo model violates near origin"):
        for case in (1, 2, 3):
            report = pareto_scan(CaseWeight(case), GRID_STEP, FD_STEP, TOL)
            assert report.passed and not report.violations, f"case {case}"
        for alpha in [round(0.05 * k, 2) for k in range(1, 20)]:
            report = pareto_scan(ConstantWeight(alpha), GRID_STEP, FD_STEP, TOL)
            assert report.passed and not report.violations, f"alpha {alpha}"
        demo = pareto_scan(ViolatingDemoWeight(), GRID_STEP, FD_STEP, TOL)
        assert not demo.passed
        assert len(demo.violations) > 0
        assert (0.01, 0.01) in {(v.d1, v.d2) for v in demo.violations}


def test_classic_family_linear_and_equidistant():
    with criterion("classic family curves are linear with constant vertical spacing"):
        levels = [round(0.1 * k, 1) for k in range(10)]
        curves = solution_family(ConstantWeight(0.5), levels, d1_step=GRID_STEP)
        for curve in curves:
            xs = np.array([p[0] for p in curve.points])
            ys = np.array([p[1] for p in curve.points])
            coeffs = np.polyfit(xs, ys, 1)
            residual = np.max(np.abs(np.polyval(coeffs, xs) - ys))
            assert residual <= 1e-12, f"level {curve.d2_level}: residual {residual}"
        for lower, upper in zip(curves, curves[1:]):
            upper_by_d1 = dict(upper.points)
            gaps = [
                r - upper_by_d1[d1] for d1, r in lower.points if d1 in upper_by_d1
            ]
            assert gaps, "adjacent levels share no sample points"
            assert max(abs(g - 0.05) for g in gaps) <= 1e-12


def test_nomograph_geometry_and_determinism():
    with criterion("nomograph collinearity and straight-edge reads within 1e-9; SVG byte-stable"):
        layout = build_layout()
        rng = np.random.default_rng(314_159)
        worst_det = 0.0
        worst_read = 0.0
        for _ in range(500):
            d1 = rng.uniform(0.0, 0.999)
            d2 = rng.uniform(0.0, 0.999 - d1)
            alpha = rng.uniform(0.0, 1.0)
            share = solve_royalty_share(D(d1, d2), alpha)
            p = unit_alpha_point(alpha)
            q = unit_grid_point(d1, d2)
            r = unit_result_point(share)
            det = p[0] * (q[1] - r[1]) - p[1] * (q[0] - r[0]) + (q[0] * r[1] - r[0] * q[1])
            worst_det = max(worst_det, abs(det))
            worst_read = max(
                worst_read, abs(read_isopleth(layout, alpha, D(d1, d2)) - share)
            )
        assert worst_det <= 1e-9, f"worst determinant {worst_det}"
        assert worst_read <= 1e-9, f"worst read error {worst_read}"
        assert render_svg(layout).encode() == render_svg(layout).encode()
