import numpy as np
import pytest

from nashroyalty.core import DisagreementPoint, solve_royalty_share
from nashroyalty.errors import DegenerateLineError, InvalidCanvasError
from nashroyalty.nomograph import (
    build_layout,
    make_isopleth,
    read_isopleth,
    render_chart,
    render_svg,
    unit_alpha_point,
    unit_grid_point,
    unit_result_point,
)

D = DisagreementPoint


def random_feasible_triples(count, seed, margin=1e-3):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        d1 = rng.uniform(0.0, 1.0 - margin)
        d2 = rng.uniform(0.0, 1.0 - margin - d1)
        alpha = rng.uniform(0.0, 1.0)
        yield alpha, d1, d2


def collinearity_det(p, q, r):
    return (
        p[0] * (q[1] - r[1])
        - p[1] * (q[0] - r[0])
        + (q[0] * r[1] - r[0] * q[1])
    )


class TestUnitGeometry:
    def test_grid_point_worked_example(self):
        x, y = unit_grid_point(0.2, 0.3)
        assert x == pytest.approx(2.0 / 3.0, abs=1e-15)
        assert y == pytest.approx(2.0 / 15.0, abs=1e-15)

    def test_grid_corner_at_origin_payoffs(self):
        assert unit_grid_point(0.0, 0.0) == (1.0, 0.0)

    @pytest.mark.parametrize("d1", [0.0, 0.3, 1.0])
    def test_zero_surplus_meets_result_scale(self, d1):
        x, _ = unit_grid_point(d1, 1.0 - d1)
        assert x == pytest.approx(0.5, abs=1e-15)

    def test_worked_example_is_collinear(self):
        det = collinearity_det(
            unit_alpha_point(0.40), unit_grid_point(0.2, 0.3), unit_result_point(0.40)
        )
        assert abs(det) <= 1e-15

    def test_collinearity_over_random_triples(self):
        worst = 0.0
        for alpha, d1, d2 in random_feasible_triples(500, seed=2024):
            share = solve_royalty_share(D(d1, d2), alpha)
            det = collinearity_det(
                unit_alpha_point(alpha), unit_grid_point(d1, d2), unit_result_point(share)
            )
            worst = max(worst, abs(det))
        assert worst <= 1e-9

    def test_grid_rulings_are_straight(self):
        # Constant-d1 samples lie on the ray y = d1 * x; constant-d2 samples
        # on the line x (1 + d2) + y = 1.
        for d1 in (0.0, 0.2, 0.7):
            for d2 in np.linspace(0.0, 1.0 - d1, 23):
                x, y = unit_grid_point(d1, float(d2))
                assert abs(y - d1 * x) <= 1e-12
        for d2 in (0.0, 0.4, 0.9):
            for d1 in np.linspace(0.0, 1.0 - d2, 23):
                x, y = unit_grid_point(float(d1), d2)
                assert abs(x * (1.0 + d2) + y - 1.0) <= 1e-12


class TestLayout:
    def test_canvas_validation(self):
        with pytest.raises(InvalidCanvasError):
            build_layout(canvas_width=0.0)
        with pytest.raises(InvalidCanvasError):
            build_layout(canvas_height=-5.0)
        with pytest.raises(InvalidCanvasError):
            build_layout(margin=400.0)  # eats the whole default canvas

    def test_tick_steps_must_divide_one(self):
        with pytest.raises(InvalidCanvasError):
            build_layout(alpha_tick=0.3)
        build_layout(alpha_tick=0.25, result_tick=0.05, grid_tick=0.2)

    def test_tick_counts(self):
        layout = build_layout(alpha_tick=0.1, result_tick=0.25)
        assert len(layout.alpha_scale.ticks) == 11
        assert len(layout.result_scale.ticks) == 5
        # d1 = 1 and d2 = 1 rulings degenerate to points and are dropped.
        assert len(layout.iso_d1) == 10
        assert len(layout.iso_d2) == 10

    def test_everything_lands_on_canvas(self):
        layout = build_layout(canvas_width=320.0, canvas_height=200.0, margin=20.0)
        points = [t[1] for t in layout.alpha_scale.ticks]
        points += [t[1] for t in layout.result_scale.ticks]
        for ruling in layout.iso_d1 + layout.iso_d2:
            points += [ruling.start, ruling.end]
        for alpha, d1, d2 in random_feasible_triples(100, seed=5):
            points.append(layout.map_grid(D(d1, d2)))
        for x, y in points:
            assert 0.0 <= x <= 320.0
            assert 0.0 <= y <= 200.0

    def test_affine_fit_keeps_collinearity(self):
        layout = build_layout(canvas_width=987.0, canvas_height=123.0, margin=7.0)
        for alpha, d1, d2 in random_feasible_triples(100, seed=9):
            share = solve_royalty_share(D(d1, d2), alpha)
            det = collinearity_det(
                layout.map_alpha(alpha), layout.map_grid(D(d1, d2)), layout.map_result(share)
            )
            # Canvas determinants scale with area; normalize by it.
            assert abs(det) / (987.0 * 123.0) <= 1e-9


class TestReadIsopleth:
    def test_worked_example(self):
        layout = build_layout()
        assert read_isopleth(layout, 0.40, D(0.2, 0.3)) == pytest.approx(0.40, abs=1e-9)

    def test_symmetric_read(self):
        layout = build_layout()
        assert read_isopleth(layout, 0.5, D(0.0, 0.0)) == pytest.approx(0.5, abs=1e-12)

    def test_matches_closed_form_everywhere(self):
        layout = build_layout(canvas_width=777.0, canvas_height=555.0, margin=33.0)
        worst = 0.0
        for alpha, d1, d2 in random_feasible_triples(500, seed=77):
            geometric = read_isopleth(layout, alpha, D(d1, d2))
            algebraic = solve_royalty_share(D(d1, d2), alpha)
            worst = max(worst, abs(geometric - algebraic))
        assert worst <= 1e-9

    def test_zero_surplus_is_degenerate(self):
        layout = build_layout()
        with pytest.raises(DegenerateLineError):
            read_isopleth(layout, 0.4, D(0.6, 0.4))

    def test_make_isopleth_consistency(self):
        layout = build_layout()
        iso = make_isopleth(layout, 0.40, D(0.2, 0.3))
        assert iso.read_result == pytest.approx(
            solve_royalty_share(D(0.2, 0.3), 0.40), abs=1e-9
        )


class TestRenderSvg:
    def test_blank_chart_tick_label_counts(self):
        layout = build_layout(alpha_tick=0.1, result_tick=0.1)
        svg = render_svg(layout)
        assert svg.count('class="tick-alpha"') == 11
        assert svg.count('class="tick-result"') == 11

    def test_byte_determinism(self):
        layout = build_layout()
        iso = make_isopleth(layout, 0.40, D(0.2, 0.3))
        assert render_svg(layout, iso).encode() == render_svg(layout, iso).encode()
        assert render_svg(layout).encode() == render_svg(layout).encode()

    def test_overlay_geometry_is_drawn(self):
        layout = build_layout()
        iso = make_isopleth(layout, 0.40, D(0.2, 0.3))
        svg = render_svg(layout, iso)
        assert svg.count('class="isopleth"') == 1
        # The straight edge runs from the weight point to the grid point.
        ax, ay = layout.map_alpha(0.40)
        gx, gy = layout.map_grid(D(0.2, 0.3))
        assert f'x1="{ax:.4f}" y1="{ay:.4f}"' in svg
        assert f'x2="{gx:.4f}" y2="{gy:.4f}"' in svg
        # The marked crossing sits where the scale reads 0.40.
        rx, ry = layout.map_result(iso.read_result)
        assert f'cx="{rx:.4f}" cy="{ry:.4f}"' in svg
        assert "share = 0.4000" in svg

    def test_blank_chart_has_no_overlay(self):
        svg = render_svg(build_layout())
        assert 'class="isopleth"' not in svg
        assert svg.startswith("<?xml")
        assert svg.rstrip().endswith("</svg>")

    def test_render_chart_wrapper(self):
        with_overlay = render_chart(alpha=0.4, d=D(0.2, 0.3))
        assert 'class="isopleth"' in with_overlay
        assert render_chart() == render_svg(build_layout())
        with pytest.raises(InvalidCanvasError):
            render_chart(alpha=0.4)  # overlay requires the pair too
