"""Alignment chart for the share equation r = d1 + alpha * (1 - d1 - d2).

A straight edge laid across three calibrated scales solves the equation:
pick the bargaining weight on the left scale and the disagreement pair on
the grid; the line crosses the middle scale at the royalty share.

Geometry (normalized coordinates, before the canvas fit):

* weight scale   — the segment x = 0, y = alpha;
* result scale   — the segment x = 1/2, y = share / 2;
* grid point     — (1, d1) / (1 + s) with s = d1 + d2.

The construction starts from the naive layout that puts the pair point at
(1/s, d1/s) — collinear with (0, alpha) and (1, share) but unbounded — and
applies the projective map (x, y) -> (x, y) / (x + 1) to all three scales
at once. Projective maps preserve collinearity, and this one lands the
grid in x in [1/2, 1] while keeping both rulings straight: constant-d1
curves are rays y = d1 * x and constant-d2 curves are lines
x * (1 + d2) + y = 1. A final affine fit onto the canvas cannot bend
lines, so the collinearity property survives to the rendered output.

At s = 1 (zero surplus) the grid meets the result scale; reading there is
refused as degenerate and the chart carries an annotation instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DisagreementPoint
from .errors import DegenerateLineError, InvalidCanvasError

__all__ = [
    "Point",
    "ScaleSegment",
    "GridRuling",
    "NomographLayout",
    "Isopleth",
    "build_layout",
    "read_isopleth",
    "make_isopleth",
    "render_svg",
    "render_chart",
    "unit_alpha_point",
    "unit_grid_point",
    "unit_result_point",
]

ZERO_SURPLUS_EPS = 1e-12


Point = tuple[float, float]


def unit_alpha_point(alpha: float) -> Point:
    return (0.0, alpha)


def unit_grid_point(d1: float, d2: float) -> Point:
    s = d1 + d2
    return (1.0 / (1.0 + s), d1 / (1.0 + s))


def unit_result_point(share: float) -> Point:
    return (0.5, share / 2.0)


@dataclass(frozen=True)
class ScaleSegment:
    """A straight scale: canvas endpoints plus (value, canvas point) ticks."""

    start: Point
    end: Point
    ticks: tuple[tuple[float, Point], ...]


@dataclass(frozen=True)
class GridRuling:
    """One straight grid line of constant d1 or constant d2."""

    value: float
    start: Point
    end: Point


@dataclass(frozen=True)
class NomographLayout:
    canvas_width: float
    canvas_height: float
    margin: float
    alpha_tick: float
    result_tick: float
    grid_tick: float
    alpha_scale: ScaleSegment
    result_scale: ScaleSegment
    iso_d1: tuple[GridRuling, ...]
    iso_d2: tuple[GridRuling, ...]

    # Unit square -> canvas affine coefficients (y flipped for SVG).
    sx: float
    ox: float
    sy: float
    oy: float

    def to_canvas(self, p: Point) -> Point:
        return (self.sx * p[0] + self.ox, self.sy * p[1] + self.oy)

    def map_alpha(self, alpha: float) -> Point:
        return self.to_canvas(unit_alpha_point(alpha))

    def map_grid(self, d: DisagreementPoint) -> Point:
        return self.to_canvas(unit_grid_point(d.d1_norm, d.d2_norm))

    def map_result(self, share: float) -> Point:
        return self.to_canvas(unit_result_point(share))

    def invert_result(self, canvas_y: float) -> float:
        """Result-scale value at a canvas height (linear parameterization)."""
        y0 = self.map_result(0.0)[1]
        y1 = self.map_result(1.0)[1]
        return (canvas_y - y0) / (y1 - y0)


@dataclass(frozen=True)
class Isopleth:
    """A straight-edge reading: inputs plus the share recovered geometrically."""

    alpha: float
    d: DisagreementPoint
    read_result: float


def _tick_values(step: float) -> list[float]:
    count = round(1.0 / step)
    return [i * step for i in range(count + 1)]


def _check_tick(name: str, step: float) -> None:
    if step <= 0 or step > 1:
        raise InvalidCanvasError(f"{name} tick step {step!r} outside (0, 1]")
    if abs(round(1.0 / step) * step - 1.0) > 1e-9:
        raise InvalidCanvasError(f"{name} tick step {step!r} does not divide 1")


def build_layout(
    canvas_width: float = 640.0,
    canvas_height: float = 640.0,
    alpha_tick: float = 0.1,
    result_tick: float = 0.1,
    grid_tick: float = 0.1,
    margin: float = 60.0,
) -> NomographLayout:
    """Lay the three scales out on a canvas.

    Tick steps must divide 1. The normalized geometry occupies the unit
    square; the affine fit maps it into the canvas minus margins with the
    y axis flipped (SVG grows downward).
    """
    if canvas_width <= 0 or canvas_height <= 0:
        raise InvalidCanvasError(
            f"canvas must be positive, got {canvas_width} x {canvas_height}"
        )
    if margin < 0 or 2 * margin >= min(canvas_width, canvas_height):
        raise InvalidCanvasError(f"margin {margin!r} leaves no drawable area")
    for name, step in (
        ("alpha", alpha_tick),
        ("result", result_tick),
        ("grid", grid_tick),
    ):
        _check_tick(name, step)

    sx = canvas_width - 2.0 * margin
    ox = margin
    sy = -(canvas_height - 2.0 * margin)
    oy = canvas_height - margin

    def to_canvas(p: Point) -> Point:
        return (sx * p[0] + ox, sy * p[1] + oy)

    alpha_scale = ScaleSegment(
        start=to_canvas(unit_alpha_point(0.0)),
        end=to_canvas(unit_alpha_point(1.0)),
        ticks=tuple(
            (v, to_canvas(unit_alpha_point(v))) for v in _tick_values(alpha_tick)
        ),
    )
    result_scale = ScaleSegment(
        start=to_canvas(unit_result_point(0.0)),
        end=to_canvas(unit_result_point(1.0)),
        ticks=tuple(
            (v, to_canvas(unit_result_point(v))) for v in _tick_values(result_tick)
        ),
    )

    iso_d1 = []
    for d1 in _tick_values(grid_tick):
        a = unit_grid_point(d1, 0.0)
        b = unit_grid_point(d1, 1.0 - d1)
        if math.dist(a, b) > 0:
            iso_d1.append(GridRuling(d1, to_canvas(a), to_canvas(b)))
    iso_d2 = []
    for d2 in _tick_values(grid_tick):
        a = unit_grid_point(0.0, d2)
        b = unit_grid_point(1.0 - d2, d2)
        if math.dist(a, b) > 0:
            iso_d2.append(GridRuling(d2, to_canvas(a), to_canvas(b)))

    return NomographLayout(
        canvas_width=canvas_width,
        canvas_height=canvas_height,
        margin=margin,
        alpha_tick=alpha_tick,
        result_tick=result_tick,
        grid_tick=grid_tick,
        alpha_scale=alpha_scale,
        result_scale=result_scale,
        iso_d1=tuple(iso_d1),
        iso_d2=tuple(iso_d2),
        sx=sx,
        ox=ox,
        sy=sy,
        oy=oy,
    )


def read_isopleth(layout: NomographLayout, alpha: float, d: DisagreementPoint) -> float:
    """Recover the share purely geometrically.

    Intersects the line through the mapped weight point and grid point
    with the result scale, then inverts the scale parameterization. No
    call into the closed-form solver; agreement with it is a property of
    the construction, verified in tests.
    """
    d.require_feasible()
    if not 0.0 <= alpha <= 1.0:
        raise InvalidCanvasError(f"alpha {alpha!r} outside [0, 1]")
    if 1.0 - d.total <= ZERO_SURPLUS_EPS:
        raise DegenerateLineError(
            "zero-surplus point: the grid meets the result scale, "
            "so the straight edge cannot be read"
        )
    p_alpha = layout.map_alpha(alpha)
    p_grid = layout.map_grid(d)
    x_scale = layout.result_scale.start[0]
    dx = p_grid[0] - p_alpha[0]
    if dx == 0.0:
        raise DegenerateLineError("isopleth is parallel to the result scale")
    t = (x_scale - p_alpha[0]) / dx
    y = p_alpha[1] + t * (p_grid[1] - p_alpha[1])
    return layout.invert_result(y)


def make_isopleth(layout: NomographLayout, alpha: float, d: DisagreementPoint) -> Isopleth:
    return Isopleth(alpha=alpha, d=d, read_result=read_isopleth(layout, alpha, d))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def _f(x: float) -> str:
    """Fixed-precision coordinate formatting keeps the output byte-stable."""
    return f"{x:.4f}"


def _tick_label(value: float) -> str:
    return f"{value:.2f}".rstrip("0").rstrip(".") or "0"


def _line(p: Point, q: Point, **attrs: str) -> str:
    parts = "".join(f' {k.replace("_", "-")}="{v}"' for k, v in attrs.items())
    return (
        f'<line x1="{_f(p[0])}" y1="{_f(p[1])}" '
        f'x2="{_f(q[0])}" y2="{_f(q[1])}"{parts}/>'
    )


def _text(p: Point, s: str, cls: str, anchor: str = "middle") -> str:
    return (
        f'<text class="{cls}" x="{_f(p[0])}" y="{_f(p[1])}" '
        f'text-anchor="{anchor}">{s}</text>'
    )


def render_svg(layout: NomographLayout, overlay: Isopleth | None = None) -> str:
    """Deterministic SVG 1.1 document for the chart.

    Same layout and overlay give byte-identical output. Tick labels carry
    the classes ``tick-alpha`` / ``tick-result`` / ``tick-grid`` so they
    can be counted and styled; the optional overlay is a red straight edge
    through the three solution points.
    """
    lines: list[str] = []
    w, h = layout.canvas_width, layout.canvas_height
    lines.append('<?xml version="1.0" encoding="UTF-8"?>')
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(w)}" height="{_f(h)}" viewBox="0 0 {_f(w)} {_f(h)}">'
    )
    lines.append(
        "<style>"
        "text{font-family:Helvetica,Arial,sans-serif;font-size:11px;fill:#222}"
        ".scale{stroke:#222;stroke-width:1.5}"
        ".tickmark{stroke:#222;stroke-width:1}"
        ".grid{stroke:#888;stroke-width:0.6}"
        ".isopleth{stroke:#cc2222;stroke-width:1.4}"
        ".title{font-size:13px;font-weight:bold}"
        ".note{font-size:9px;fill:#666}"
        "</style>"
    )

    # Straight scales with tick marks and labels.
    for seg, cls, dx, anchor, title in (
        (layout.alpha_scale, "tick-alpha", -8.0, "end", "bargaining weight"),
        (layout.result_scale, "tick-result", -8.0, "end", "royalty share of profit"),
    ):
        lines.append(_line(seg.start, seg.end, **{"class": "scale"}))
        for value, p in seg.ticks:
            lines.append(_line((p[0] - 4.0, p[1]), (p[0] + 4.0, p[1]), **{"class": "tickmark"}))
            lines.append(_text((p[0] + dx, p[1] + 3.5), _tick_label(value), cls, anchor))
        top = min(seg.start[1], seg.end[1])
        lines.append(_text((seg.start[0], top - 14.0), title, "title"))

    # Grid rulings: rays of constant d1, lines of constant d2.
    for ruling in layout.iso_d1:
        lines.append(_line(ruling.start, ruling.end, **{"class": "grid"}))
        label_at = ruling.start  # d2 = 0 edge
        lines.append(
            _text((label_at[0] + 10.0, label_at[1] + 3.5), _tick_label(ruling.value), "tick-grid", "start")
        )
    for ruling in layout.iso_d2:
        lines.append(_line(ruling.start, ruling.end, **{"class": "grid"}))
        label_at = ruling.start  # d1 = 0 edge
        lines.append(
            _text((label_at[0], label_at[1] - 5.0), _tick_label(ruling.value), "tick-grid")
        )
    grid_corner = layout.to_canvas(unit_grid_point(0.0, 0.0))
    lines.append(
        _text((grid_corner[0], grid_corner[1] + 24.0), "disagreement grid (d1 rays, d2 lines)", "title")
    )
    touch = layout.to_canvas((0.5, 0.5))
    lines.append(
        _text((touch[0], touch[1] - 26.0), "grid meets the share scale at zero surplus", "note")
    )

    if overlay is not None:
        p_a = layout.map_alpha(overlay.alpha)
        p_g = layout.map_grid(overlay.d)
        p_r = layout.map_result(overlay.read_result)
        lines.append(_line(p_a, p_g, **{"class": "isopleth"}))
        for p in (p_a, p_g, p_r):
            lines.append(
                f'<circle cx="{_f(p[0])}" cy="{_f(p[1])}" r="2.5" fill="#cc2222"/>'
            )
        lines.append(
            _text(
                (p_r[0] + 10.0, p_r[1] - 6.0),
                f"share = {overlay.read_result:.4f}",
                "readout",
                "start",
            )
        )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_chart(
    alpha: float | None = None,
    d: DisagreementPoint | None = None,
    **layout_kwargs,
) -> str:
    """Convenience wrapper: build a default layout and optionally overlay one reading."""
    layout = build_layout(**layout_kwargs)
    overlay = None
    if alpha is not None or d is not None:
        if alpha is None or d is None:
            raise InvalidCanvasError("overlay needs both a weight and a disagreement pair")
        overlay = make_isopleth(layout, alpha, d)
    return render_svg(layout, overlay)
