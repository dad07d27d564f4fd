"""Pareto-efficiency scanning and solution-family data.

A weight rule is Pareto-efficient where the royalty share rises with
party 1's disagreement payoff and falls with party 2's. ``pareto_scan``
checks both signs by central finite differences at every interior node of
a triangular grid and classifies each node as pass / violation /
degenerate. ``solution_family`` samples the share along lines of constant
d2, the raw material for family-of-solutions plots.

Numerics: central differences with a configurable probe step (default
1e-4) and classification tolerance (default 1e-6). Nodes within one probe
step of the zero-surplus hypotenuse are excluded rather than switching to
one-sided stencils; that boundary is analytically degenerate anyway.
Weight rules that are merely *weakly* monotone at a node (derivative
within tolerance of zero, e.g. constant alpha = 0 or 1) are reported as
degenerate, not as violations.

Scans are deterministic: identical inputs produce identical reports,
node order included.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

from .core import DisagreementPoint
from .errors import InvalidInputError, NashRoyaltyError
from .weights import WeightModel

__all__ = [
    "GridNode",
    "ParetoReport",
    "FamilyCurve",
    "pareto_scan",
    "solution_family",
    "feasibility_region",
    "report_to_csv",
    "family_to_csv",
    "family_to_json_dict",
]

DEFAULT_GRID_STEP = 0.01
DEFAULT_FD_STEP = 1e-4
DEFAULT_TOL = 1e-6

CSV_COLUMNS = ("d1", "d2", "r_share", "dr_dd1", "dr_dd2", "class")

PASS = "pass"
VIOLATION = "violation"
DEGENERATE = "degenerate"
ERROR = "error"


@dataclass(frozen=True)
class GridNode:
    """One scanned node: share, both derivatives and the classification."""

    d1: float
    d2: float
    r_share: float | None
    dr_dd1: float | None
    dr_dd2: float | None
    classification: str
    message: str = ""


@dataclass(frozen=True)
class ParetoReport:
    grid_step: float
    fd_step: float
    tol: float
    model_kind: str
    nodes: tuple[GridNode, ...]
    passed: bool

    @property
    def violations(self) -> tuple[GridNode, ...]:
        return tuple(n for n in self.nodes if n.classification == VIOLATION)

    @property
    def degenerate_points(self) -> tuple[GridNode, ...]:
        return tuple(n for n in self.nodes if n.classification == DEGENERATE)

    @property
    def errors(self) -> tuple[GridNode, ...]:
        return tuple(n for n in self.nodes if n.classification == ERROR)

    def to_json_dict(self) -> dict:
        def row(n: GridNode) -> dict:
            out = {
                "d1": n.d1,
                "d2": n.d2,
                "r_share": n.r_share,
                "dr_dd1": n.dr_dd1,
                "dr_dd2": n.dr_dd2,
                "class": n.classification,
            }
            if n.message:
                out["message"] = n.message
            return out

        return {
            "grid_step": self.grid_step,
            "fd_step": self.fd_step,
            "tol": self.tol,
            "model_kind": self.model_kind,
            "pass": self.passed,
            "node_count": len(self.nodes),
            "violations": [row(n) for n in self.violations],
            "degenerate_points": [row(n) for n in self.degenerate_points],
            "errors": [row(n) for n in self.errors],
            "nodes": [row(n) for n in self.nodes],
        }


@dataclass(frozen=True)
class FamilyCurve:
    """Samples of the royalty share along one line of constant d2."""

    d2_level: float
    points: tuple[tuple[float, float], ...]  # (d1, r_share), increasing d1


def _grid_values(step: float, upper: float = 1.0) -> list[float]:
    """Multiples of ``step`` from 0 to ``upper`` inclusive (1e-9 slack)."""
    count = int(math.floor(upper / step + 1e-9))
    return [i * step for i in range(count + 1)]


def feasibility_region(step: float) -> list[tuple[float, float]]:
    """All nodes of the closed triangle d1, d2 >= 0, d1 + d2 <= 1.

    Row-major in d1 then d2; for step = 1/n the count is the triangular
    number (n+1)(n+2)/2.
    """
    if step <= 0:
        raise InvalidInputError("step must be > 0")
    nodes: list[tuple[float, float]] = []
    for d1 in _grid_values(step):
        for d2 in _grid_values(step, upper=1.0 - d1):
            nodes.append((d1, d2))
    return nodes


def _share_at(model: WeightModel, d1: float, d2: float) -> float:
    return model.royalty_share(DisagreementPoint(d1, d2))


def pareto_scan(
    model: WeightModel,
    grid_step: float = DEFAULT_GRID_STEP,
    fd_step: float = DEFAULT_FD_STEP,
    tol: float = DEFAULT_TOL,
) -> ParetoReport:
    """Finite-difference sign check of the efficiency conditions.

    Scans interior grid nodes (d1, d2 > 0, d1 + d2 <= 1 - 2*fd_step). At
    each node the share's central differences in both coordinates decide:

    * violation — dr/dd1 < -tol or dr/dd2 > +tol (wrong sign, clearly);
    * degenerate — a derivative within tol of zero (weak monotonicity);
    * pass — otherwise.

    Model evaluation errors are recorded on the node and do not abort the
    scan. The report passes iff there are no violations.
    """
    if grid_step <= 0 or fd_step <= 0:
        raise InvalidInputError("grid_step and fd_step must be > 0")
    if not fd_step < grid_step:
        raise InvalidInputError("fd_step must be smaller than grid_step")
    if tol < 0:
        raise InvalidInputError("tol must be >= 0")

    h = fd_step
    limit = 1.0 - 2.0 * h
    nodes: list[GridNode] = []
    for d1 in _grid_values(grid_step):
        if d1 == 0.0:
            continue
        for d2 in _grid_values(grid_step, upper=1.0 - d1):
            if d2 == 0.0 or d1 + d2 > limit:
                continue
            try:
                r = _share_at(model, d1, d2)
                dr1 = (_share_at(model, d1 + h, d2) - _share_at(model, d1 - h, d2)) / (2 * h)
                dr2 = (_share_at(model, d1, d2 + h) - _share_at(model, d1, d2 - h)) / (2 * h)
            except NashRoyaltyError as exc:
                nodes.append(GridNode(d1, d2, None, None, None, ERROR, str(exc)))
                continue
            if dr1 < -tol or dr2 > tol:
                cls = VIOLATION
            elif abs(dr1) <= tol or abs(dr2) <= tol:
                cls = DEGENERATE
            else:
                cls = PASS
            nodes.append(GridNode(d1, d2, r, dr1, dr2, cls))

    passed = not any(n.classification == VIOLATION for n in nodes)
    return ParetoReport(
        grid_step=grid_step,
        fd_step=fd_step,
        tol=tol,
        model_kind=model.kind,
        nodes=tuple(nodes),
        passed=passed,
    )


def solution_family(
    model: WeightModel,
    d2_levels: list[float],
    d1_step: float = DEFAULT_GRID_STEP,
) -> list[FamilyCurve]:
    """Sample the share over d1 in [0, 1 - level] for each constant-d2 level.

    The curves end where feasibility does, so higher levels give shorter
    curves. Evaluation errors abort with the offending point named.
    """
    if d1_step <= 0:
        raise InvalidInputError("d1_step must be > 0")
    curves: list[FamilyCurve] = []
    for level in d2_levels:
        if not 0.0 <= level <= 1.0:
            raise InvalidInputError(f"d2 level {level!r} outside [0, 1]")
        points: list[tuple[float, float]] = []
        for d1 in _grid_values(d1_step, upper=1.0 - level):
            try:
                points.append((d1, _share_at(model, d1, level)))
            except NashRoyaltyError as exc:
                raise type(exc)(
                    f"family curve for model {model.kind!r} failed at "
                    f"(d1={d1:.6g}, d2={level:.6g}): {exc}"
                ) from exc
        curves.append(FamilyCurve(d2_level=level, points=tuple(points)))
    return curves


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _fmt(value: float | None) -> str:
    return "" if value is None else repr(value)


def report_to_csv(report: ParetoReport) -> str:
    """Report rows as CSV with the fixed column order d1,d2,r_share,dr_dd1,dr_dd2,class."""
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for n in report.nodes:
        buf.write(
            f"{_fmt(n.d1)},{_fmt(n.d2)},{_fmt(n.r_share)},"
            f"{_fmt(n.dr_dd1)},{_fmt(n.dr_dd2)},{n.classification}\n"
        )
    return buf.getvalue()


def family_to_csv(curves: list[FamilyCurve]) -> str:
    """Curve samples as CSV (columns d1,d2,r_share; d2 is the curve level)."""
    buf = io.StringIO()
    buf.write("d1,d2,r_share\n")
    for curve in curves:
        for d1, r in curve.points:
            buf.write(f"{_fmt(d1)},{_fmt(curve.d2_level)},{_fmt(r)}\n")
    return buf.getvalue()


def family_to_json_dict(curves: list[FamilyCurve]) -> dict:
    return {
        "curves": [
            {
                "d2_level": c.d2_level,
                "points": [{"d1": d1, "r_share": r} for d1, r in c.points],
            }
            for c in curves
        ]
    }


def report_to_json(report: ParetoReport, indent: int | None = None) -> str:
    return json.dumps(report.to_json_dict(), indent=indent, sort_keys=False)
