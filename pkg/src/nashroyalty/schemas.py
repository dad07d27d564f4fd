"""Scenario files and the shared solve-output schema.

The CLI and the HTTP service must answer identically for identical
inputs, so the one place that assembles a solve payload lives here.

Scenario file format (JSON): a top-level array of scenario objects, or an
object with a "scenarios" array. Each scenario:

    {
      "name": "...",
      "financials": {"operating_revenue": num, "operating_cost": num},   # optional
      "disagreement": {"d1": num, "d2": num, "normalized": bool},
      "model": {"kind": "constant" | "perceptions" | "case1" | "case2" |
                         "case3" | "violating-demo" | "composite", ...params}
    }

Raw (money) disagreement payoffs require financials to normalize against.
Parsing failures raise :class:`ScenarioParseError` with position context;
schema failures raise :class:`ScenarioValidationError` listing *every*
violated invariant, not just the first.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .core import (
    DisagreementPoint,
    FinancialProfile,
    normalize_disagreement,
    partition_profits,
    solve_royalty_share,
)
from .errors import NashRoyaltyError, ScenarioParseError, ScenarioValidationError
from .weights import CASE3_NOTE, WeightModel, model_from_descriptor

__all__ = [
    "Scenario",
    "load_scenarios",
    "parse_scenario",
    "solve_payload",
    "alpha_payload",
    "resolve_alpha",
]


def resolve_alpha(model: WeightModel, d: DisagreementPoint) -> tuple[float, list[str]]:
    """Evaluate a weight model, capturing convention warnings as strings."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        value = model.alpha(d)
    return value, [str(w.message) for w in caught]


@dataclass(frozen=True)
class Scenario:
    name: str
    financials: FinancialProfile | None
    disagreement: DisagreementPoint
    model: WeightModel


def parse_scenario(obj: Mapping) -> Scenario:
    """Validate one scenario object, collecting every violation."""
    problems: list[str] = []
    if not isinstance(obj, Mapping):
        raise ScenarioValidationError([f"scenario must be an object, got {obj!r}"])

    name = obj.get("name")
    if not isinstance(name, str) or not name:
        problems.append("'name' must be a non-empty string")
        name = "<unnamed>"

    fin = None
    fin_obj = obj.get("financials")
    if fin_obj is not None:
        try:
            fin = FinancialProfile(
                operating_revenue=float(fin_obj["operating_revenue"]),
                operating_cost=float(fin_obj["operating_cost"]),
            )
        except (KeyError, TypeError, ValueError, NashRoyaltyError) as exc:
            problems.append(f"financials: {exc}")

    point = None
    dis = obj.get("disagreement")
    if not isinstance(dis, Mapping) or "d1" not in dis or "d2" not in dis:
        problems.append("'disagreement' must be an object with 'd1' and 'd2'")
    else:
        normalized = bool(dis.get("normalized", True))
        try:
            d1, d2 = float(dis["d1"]), float(dis["d2"])
            if normalized:
                point = DisagreementPoint(d1, d2)
            elif fin is None:
                problems.append(
                    "raw (money) disagreement payoffs require 'financials' to normalize"
                )
            else:
                point = normalize_disagreement(d1, d2, fin)
        except (TypeError, ValueError, NashRoyaltyError) as exc:
            problems.append(f"disagreement: {exc}")

    model = None
    try:
        model = model_from_descriptor(obj.get("model", {}))
    except ScenarioValidationError as exc:
        problems.extend(f"model: {p}" for p in exc.problems)

    if problems:
        raise ScenarioValidationError([f"scenario {name!r}: {p}" for p in problems])
    assert point is not None and model is not None
    return Scenario(name=name, financials=fin, disagreement=point, model=model)


def load_scenarios(path: str | Path) -> list[Scenario]:
    """Load and validate every scenario in a file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if isinstance(data, Mapping) and "scenarios" in data:
        data = data["scenarios"]
    if not isinstance(data, list):
        raise ScenarioValidationError(
            [f"{path}: top level must be an array of scenarios (or {{'scenarios': [...]}})"]
        )
    problems: list[str] = []
    scenarios: list[Scenario] = []
    for obj in data:
        try:
            scenarios.append(parse_scenario(obj))
        except ScenarioValidationError as exc:
            problems.extend(exc.problems)
    if problems:
        raise ScenarioValidationError(problems)
    names = [s.name for s in scenarios]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ScenarioValidationError([f"duplicate scenario name {n!r}" for n in dupes])
    return scenarios


def solve_payload(
    d: DisagreementPoint,
    alpha: float,
    operating_margin: float | None = None,
    financials: FinancialProfile | None = None,
    warnings_list: list[str] | None = None,
    model: WeightModel | None = None,
) -> dict:
    """The one solve-output schema shared by CLI --json and POST /api/solve.

    Always present: royalty_share, royalty_rate (null without a margin),
    alpha, d1, d2, surplus_share, warnings. With financials: profit_1,
    profit_2, surplus.
    """
    notes = list(warnings_list or [])
    if model is not None and model.kind == "case3":
        notes.append(CASE3_NOTE)
    share = solve_royalty_share(d, alpha)
    if financials is not None and operating_margin is None:
        operating_margin = financials.operating_margin
    payload: dict = {
        "royalty_share": share,
        "royalty_rate": share * operating_margin if operating_margin is not None else None,
        "alpha": alpha,
        "d1": d.d1_norm,
        "d2": d.d2_norm,
        "surplus_share": d.surplus_fraction,
        "warnings": notes,
    }
    if financials is not None:
        outcome = partition_profits(financials, d, alpha)
        payload["profit_1"] = outcome.profit_1
        payload["profit_2"] = outcome.profit_2
        payload["surplus"] = outcome.surplus
    return payload


def alpha_payload(model: WeightModel, d: DisagreementPoint) -> dict:
    """Weight evaluation with origin-convention warnings captured as strings."""
    value, notes = resolve_alpha(model, d)
    if model.kind == "case3":
        notes.append(CASE3_NOTE)
    return {"alpha": value, "model": model.kind, "d1": d.d1_norm, "d2": d.d2_norm, "warnings": notes}
