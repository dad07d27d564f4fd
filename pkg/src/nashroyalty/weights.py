"""Bargaining-weight estimation.

Three routes to party 1's weight alpha:

1. perception matrix — each party scores its own and the other's strength
   in [0, 1]; averaging the two party-level weight equations gives
   ``alpha = 1/2 + (p11 + p12 - p21 - p22) / 4``, which cannot leave [0, 1].
2. disagreement-driven closed forms — the three symmetric "cases" where
   perceptions are functions of (d1, d2); all reduce to alpha = 1/2 when
   d1 = d2.
3. composites — arbitrary user expressions over constants, d1, d2 and the
   strength sub-models, range-validated by dense sampling.

Strength sub-models (competitor ratio, market share, patent life) map
observable facts into [0, 1] perception entries.

A note on case 3: substituting its tabulated weight into the share
equation does NOT reproduce the widely quoted closed form for the case-3
royalty. The quoted form corresponds to using the licensee-side weight
equation alone (skipping the averaging step). ``case_royalty`` returns the
weight-pipeline value by default and the quoted form under
``printed_form=True``; neither is silently preferred.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, ClassVar, Mapping, Sequence, Union

from .core import DisagreementPoint, solve_royalty_share
from .errors import (
    DegenerateOriginError,
    DegenerateOriginWarning,
    InvalidInputError,
    InvalidWeightError,
    ScenarioValidationError,
)

__all__ = [
    "PerceptionMatrix",
    "StrengthInputs",
    "alpha_from_perceptions",
    "strength_competitors",
    "strength_market_share",
    "strength_patent_life",
    "example_alpha",
    "case_alpha",
    "case_royalty",
    "case_royalty_closed_form",
    "violating_demo_alpha",
    "WeightModel",
    "ConstantWeight",
    "PerceptionWeight",
    "CaseWeight",
    "ViolatingDemoWeight",
    "CompositeWeight",
    "Expr",
    "Const",
    "Var",
    "StrengthTerm",
    "Op",
    "parse_expression",
    "model_from_descriptor",
    "MODEL_KINDS",
]

CASE3_NOTE = (
    "case 3: the quoted closed-form royalty differs from the value obtained by "
    "substituting the case-3 weight into the share equation (it corresponds to "
    "using the licensee-side weight equation alone); case_royalty exposes both "
    "via printed_form"
)


@dataclass(frozen=True)
class PerceptionMatrix:
    """The four perceived strengths p_mn = party m's strength as seen by party n."""

    p11: float
    p12: float
    p21: float
    p22: float

    def __post_init__(self) -> None:
        for name in ("p11", "p12", "p21", "p22"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidInputError(f"perception {name}={value!r} outside [0, 1]")


@dataclass(frozen=True)
class StrengthInputs:
    """Observable facts feeding the three strength sub-models."""

    licensors: int
    licensees: int
    market_share_gain: float
    market_share_desired: float
    patent_age: float
    patent_life: float

    def __post_init__(self) -> None:
        if self.licensors < 0:
            raise InvalidInputError("licensors must be >= 0")
        if self.licensees < 1:
            raise InvalidInputError("licensees must be >= 1")
        if not 0.0 < self.market_share_desired <= 1.0:
            raise InvalidInputError("market_share_desired must be in (0, 1]")
        if not 0.0 <= self.market_share_gain <= self.market_share_desired:
            raise InvalidInputError("market_share_gain must be in [0, desired]")
        if self.patent_life <= 0:
            raise InvalidInputError("patent_life must be > 0")
        if not 0.0 <= self.patent_age <= self.patent_life:
            raise InvalidInputError("patent_age must be in [0, patent_life]")


def alpha_from_perceptions(p: PerceptionMatrix) -> float:
    """Average the two weight equations: 1/2 + (p11 + p12 - p21 - p22) / 4.

    The bracket is bounded in [-2, 2], so the result is guaranteed in [0, 1].
    """
    return 0.5 + 0.25 * (p.p11 + p.p12 - p.p21 - p.p22)


def strength_competitors(licensors: int, licensees: int) -> float:
    """Licensor strength from market structure: 1 - min(1, licensors/licensees).

    Many alternative licensors erode party 1's position; zero competing
    licensors maximize it.
    """
    if licensees < 1:
        raise InvalidInputError("licensees must be >= 1 (division by zero otherwise)")
    if licensors < 0:
        raise InvalidInputError("licensors must be >= 0")
    return 1.0 - min(1.0, licensors / licensees)


def strength_market_share(s: float, S: float) -> float:
    """Licensor strength from the share gain s relative to the desired share S."""
    if S <= 0:
        raise InvalidInputError("desired market share must be > 0")
    if not 0.0 <= s <= S:
        raise InvalidInputError(f"share gain s={s!r} must be in [0, S={S!r}]")
    return s / S


def strength_patent_life(t: float, T: float) -> float:
    """Licensor strength from remaining patent life: 1 - t/T."""
    if T <= 0:
        raise InvalidInputError("patent life must be > 0")
    if not 0.0 <= t <= T:
        raise InvalidInputError(f"patent age t={t!r} must be in [0, T={T!r}]")
    return 1.0 - t / T


def example_alpha(inputs: StrengthInputs, p21: float = 0.5, p22: float = 2.0 / 3.0) -> float:
    """Worked weight: party 1 averages competitor and market-share strength,
    party 2 sees only patent life; party 2's own-side perceptions are fixed
    scalars (defaults 1/2 and 2/3).

    alpha = 1/2 + (1/4) [ (P_L + P_S)/2 + P_T - p21 - p22 ]
    """
    for name, value in (("p21", p21), ("p22", p22)):
        if not 0.0 <= value <= 1.0:
            raise InvalidInputError(f"{name}={value!r} outside [0, 1]")
    p_l = strength_competitors(inputs.licensors, inputs.licensees)
    p_s = strength_market_share(inputs.market_share_gain, inputs.market_share_desired)
    p_t = strength_patent_life(inputs.patent_age, inputs.patent_life)
    return 0.5 + 0.25 * ((p_l + p_s) / 2.0 + p_t - p21 - p22)


def _origin_alpha(case_label: str, strict: bool) -> float:
    """Symmetric-limit convention at d1 = d2 = 0 (warn, or raise in strict mode)."""
    if strict:
        raise DegenerateOriginError(
            f"{case_label} weight is undefined at d1 = d2 = 0"
        )
    warnings.warn(
        f"{case_label} weight undefined at d1 = d2 = 0; "
        "returning 1/2 by the symmetric-limit convention",
        DegenerateOriginWarning,
        stacklevel=3,
    )
    return 0.5


def case_alpha(case: int, d: DisagreementPoint, *, strict: bool = False) -> float:
    """Disagreement-driven symmetric weights, cases 1-3.

    Case 1: each party's strength is its own payoff -> 1/2 + (d1 - d2)/2.
    Case 2: strength is the payoff's fraction of d1 + d2 -> d1/(d1 + d2).
    Case 3: party 2's strength derives from party 1's weakness; the tabulated
    rational expression is used directly (the simplification
    1/2 + (d1 - d2) / (2 (d1+d2) (2 - d1 - d2)) is cross-checked in tests,
    not relied on here).

    All three return exactly 1/2 whenever d1 == d2 > 0. Cases 2 and 3 are
    undefined at the origin; by convention they return 1/2 there with a
    DegenerateOriginWarning (or raise when ``strict``).
    """
    d.require_feasible()
    d1, d2 = d.d1_norm, d.d2_norm
    if case == 1:
        return 0.5 + (d1 - d2) / 2.0
    if case in (2, 3) and d1 + d2 == 0.0:
        return _origin_alpha(f"case {case}", strict)
    if case == 2:
        return d1 / (d1 + d2)
    if case == 3:
        if d1 == d2:
            return 0.5
        num = d1 * d1 + (2.0 * d2 - 3.0) * d1 + d2 * d2 - d2
        den = 2.0 * (d1 + d2) * (-2.0 + d1 + d2)
        return num / den
    raise InvalidInputError(f"case must be 1, 2 or 3, got {case!r}")


def case_royalty(
    case: int,
    d: DisagreementPoint,
    *,
    printed_form: bool = False,
    strict: bool = False,
) -> float:
    """Royalty share for a case weight.

    Default: the weight pipeline, ``solve_royalty_share(d, case_alpha(...))``.
    For cases 1 and 2 this equals the standard closed forms. For case 3 it
    does NOT equal the commonly quoted closed form — pass ``printed_form=True``
    for that value, (d2^2 - d1^2 - 2 d2 + d1 + 1) / (2 - d1 - d2). See the
    module docstring; the two differ (e.g. 5/12 vs 13/30 at (0.2, 0.3)).
    ``printed_form`` is only meaningful for case 3.
    """
    if printed_form:
        if case != 3:
            raise InvalidInputError("printed_form applies to case 3 only")
        d.require_feasible()
        d1, d2 = d.d1_norm, d.d2_norm
        if d1 + d2 == 0.0:
            # Same degeneracy as the weight itself: the quoted form gives
            # 1/2 at the origin, but only via the convention.
            _origin_alpha("case 3", strict)
            return 0.5
        return (d2 * d2 - d1 * d1 - 2.0 * d2 + d1 + 1.0) / (2.0 - d1 - d2)
    return solve_royalty_share(d, case_alpha(case, d, strict=strict))


def case_royalty_closed_form(case: int, d: DisagreementPoint) -> float:
    """Direct closed forms for the case royalties, used as cross-checks.

    Case 1: (d2^2 - d1^2 + 2 (d1 - d2) + 1) / 2
    Case 2: d1 / (d1 + d2)
    Case 3: the quoted form (equal to ``case_royalty(3, d, printed_form=True)``).
    """
    d.require_feasible()
    d1, d2 = d.d1_norm, d.d2_norm
    if case == 1:
        return (d2 * d2 - d1 * d1 + 2.0 * (d1 - d2) + 1.0) / 2.0
    if case == 2:
        if d1 + d2 == 0.0:
            raise DegenerateOriginError("case 2 royalty undefined at d1 = d2 = 0")
        return d1 / (d1 + d2)
    if case == 3:
        return case_royalty(3, d, printed_form=True, strict=True)
    raise InvalidInputError(f"case must be 1, 2 or 3, got {case!r}")


def violating_demo_alpha(d: DisagreementPoint) -> float:
    """Hypothetical mixed weight that breaks Pareto efficiency at small payoffs.

    alpha = 1/2 + (1/4) [ d1 + 1/3 - d1/(d1 + d2) - (1 - d1) ]

    Party 2's perceived strength shrinks with party 1's payoff, so near the
    origin a *larger* d1 can lower the royalty. Undefined at (0, 0). The
    weight itself needs only d1 + d2 > 0; feasibility of the *bargain* is
    checked where the share is solved.
    """
    d1, d2 = d.d1_norm, d.d2_norm
    if d1 + d2 == 0.0:
        raise DegenerateOriginError("demo weight undefined at d1 = d2 = 0")
    return 0.5 + 0.25 * (d1 + 1.0 / 3.0 - d1 / (d1 + d2) - (1.0 - d1))


# ---------------------------------------------------------------------------
# Composite weight expressions
# ---------------------------------------------------------------------------

class Expr:
    """Node of a composite-weight expression tree."""

    def evaluate(self, d1: float, d2: float) -> float:
        raise NotImplementedError

    def to_descriptor(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def evaluate(self, d1: float, d2: float) -> float:
        return self.value

    def to_descriptor(self) -> dict:
        return {"const": self.value}


@dataclass(frozen=True)
class Var(Expr):
    """'d1' or 'd2'."""

    name: str

    def __post_init__(self) -> None:
        if self.name not in ("d1", "d2"):
            raise InvalidInputError(f"unknown variable {self.name!r} (want 'd1' or 'd2')")

    def evaluate(self, d1: float, d2: float) -> float:
        return d1 if self.name == "d1" else d2

    def to_descriptor(self) -> dict:
        return {"var": self.name}


@dataclass(frozen=True)
class StrengthTerm(Expr):
    """A strength sub-model with fixed inputs, as an expression leaf."""

    kind: str
    params: tuple[tuple[str, float], ...]

    _FUNCS: ClassVar[tuple] = (
        ("competitors", ("licensors", "licensees"), strength_competitors),
        ("market-share", ("gain", "desired"), strength_market_share),
        ("patent-life", ("age", "life"), strength_patent_life),
    )

    def __post_init__(self) -> None:
        self._resolve()  # validates kind, params and ranges eagerly

    def _resolve(self) -> float:
        for kind, names, func in self._FUNCS:
            if kind == self.kind:
                given = dict(self.params)
                if set(given) != set(names):
                    raise InvalidInputError(
                        f"strength {kind!r} needs parameters {names}, got {sorted(given)}"
                    )
                return func(*(given[n] for n in names))
        raise InvalidInputError(f"unknown strength kind {self.kind!r}")

    def evaluate(self, d1: float, d2: float) -> float:
        return self._resolve()

    def to_descriptor(self) -> dict:
        out: dict = {"strength": self.kind}
        out.update(dict(self.params))
        return out


_BINARY_OPS: dict[str, Callable[[float, float], float]] = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}
_VARIADIC_OPS: dict[str, Callable[..., float]] = {"min": min, "max": max}


@dataclass(frozen=True)
class Op(Expr):
    op: str
    args: tuple[Expr, ...]

    def __post_init__(self) -> None:
        if self.op in _BINARY_OPS:
            if len(self.args) != 2:
                raise InvalidInputError(f"op {self.op!r} takes exactly 2 arguments")
        elif self.op in _VARIADIC_OPS:
            if len(self.args) < 1:
                raise InvalidInputError(f"op {self.op!r} takes at least 1 argument")
        else:
            raise InvalidInputError(f"unknown op {self.op!r}")

    def evaluate(self, d1: float, d2: float) -> float:
        values = [a.evaluate(d1, d2) for a in self.args]
        if self.op in _BINARY_OPS:
            return _BINARY_OPS[self.op](values[0], values[1])
        return _VARIADIC_OPS[self.op](*values)

    def to_descriptor(self) -> dict:
        return {"op": self.op, "args": [a.to_descriptor() for a in self.args]}


def parse_expression(node: Union[Mapping, float, int]) -> Expr:
    """Build an expression tree from its JSON descriptor.

    Bare numbers are constants; otherwise one of
    ``{"const": x}``, ``{"var": "d1"|"d2"}``,
    ``{"op": "add|sub|mul|div|min|max", "args": [...]}``,
    ``{"strength": "competitors|market-share|patent-life", **params}``.
    """
    if isinstance(node, (int, float)) and not isinstance(node, bool):
        return Const(float(node))
    if not isinstance(node, Mapping):
        raise InvalidInputError(f"expression node must be a number or object, got {node!r}")
    if "const" in node:
        return Const(float(node["const"]))
    if "var" in node:
        return Var(str(node["var"]))
    if "strength" in node:
        params = tuple(
            sorted((k, float(v)) for k, v in node.items() if k != "strength")
        )
        return StrengthTerm(str(node["strength"]), params)
    if "op" in node:
        args = node.get("args")
        if not isinstance(args, Sequence) or isinstance(args, (str, bytes)):
            raise InvalidInputError(f"op node needs an 'args' list: {node!r}")
        return Op(str(node["op"]), tuple(parse_expression(a) for a in args))
    raise InvalidInputError(f"unrecognized expression node: {node!r}")


# ---------------------------------------------------------------------------
# Weight models (named alpha rules with a common call surface)
# ---------------------------------------------------------------------------

class WeightModel:
    """A named rule mapping a disagreement point to a bargaining weight."""

    kind: str = ""

    def alpha(self, d: DisagreementPoint) -> float:
        raise NotImplementedError

    def royalty_share(self, d: DisagreementPoint) -> float:
        return solve_royalty_share(d, self.alpha(d))

    def describe(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class ConstantWeight(WeightModel):
    value: float
    kind: str = field(default="constant", init=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise InvalidWeightError(f"constant weight {self.value!r} outside [0, 1]")

    def alpha(self, d: DisagreementPoint) -> float:
        return self.value

    def describe(self) -> dict:
        return {"kind": self.kind, "alpha": self.value}


@dataclass(frozen=True)
class PerceptionWeight(WeightModel):
    matrix: PerceptionMatrix
    kind: str = field(default="perceptions", init=False)

    def alpha(self, d: DisagreementPoint) -> float:
        return alpha_from_perceptions(self.matrix)

    def describe(self) -> dict:
        m = self.matrix
        return {"kind": self.kind, "p11": m.p11, "p12": m.p12, "p21": m.p21, "p22": m.p22}


@dataclass(frozen=True)
class CaseWeight(WeightModel):
    case: int
    strict: bool = False

    def __post_init__(self) -> None:
        if self.case not in (1, 2, 3):
            raise InvalidInputError(f"case must be 1, 2 or 3, got {self.case!r}")

    @property
    def kind(self) -> str:  # type: ignore[override]
        return f"case{self.case}"

    def alpha(self, d: DisagreementPoint) -> float:
        return case_alpha(self.case, d, strict=self.strict)


@dataclass(frozen=True)
class ViolatingDemoWeight(WeightModel):
    kind: str = field(default="violating-demo", init=False)

    def alpha(self, d: DisagreementPoint) -> float:
        return violating_demo_alpha(d)


class CompositeWeight(WeightModel):
    """User-assembled weight expression, range-checked on construction.

    The feasible triangle is sampled at ``validation_step`` (default 0.005);
    any sample outside [0, 1] fails construction with every offender class
    reported. Sample points where the expression is undefined (e.g. a
    d1/(d1+d2) term at the origin) are tolerated and recorded in
    ``degenerate_samples``; evaluating the model *at* such a point still
    raises.
    """

    kind = "composite"

    def __init__(self, expr: Expr, validation_step: float = 0.005):
        self.expr = expr
        self.validation_step = validation_step
        self.degenerate_samples: list[tuple[float, float]] = []
        self._validate(validation_step)

    def _validate(self, step: float) -> None:
        if step <= 0:
            raise InvalidInputError("validation_step must be > 0")
        out_of_range: list[str] = []
        max_i = int(1.0 / step + 1e-9)
        for i in range(max_i + 1):
            d1 = i * step
            max_j = int((1.0 - d1) / step + 1e-9)
            for j in range(max_j + 1):
                d2 = j * step
                try:
                    value = self.expr.evaluate(d1, d2)
                except ZeroDivisionError:
                    self.degenerate_samples.append((d1, d2))
                    continue
                if not 0.0 <= value <= 1.0 or value != value:
                    out_of_range.append(
                        f"alpha({d1:.3f}, {d2:.3f}) = {value:.6g} outside [0, 1]"
                    )
        if out_of_range:
            shown = out_of_range[:10]
            if len(out_of_range) > len(shown):
                shown.append(f"... and {len(out_of_range) - len(shown)} more")
            raise ScenarioValidationError(
                ["composite weight leaves [0, 1] on the feasible region"] + shown
            )

    def alpha(self, d: DisagreementPoint) -> float:
        try:
            value = self.expr.evaluate(d.d1_norm, d.d2_norm)
        except ZeroDivisionError as exc:
            raise DegenerateOriginError(
                f"composite weight undefined at ({d.d1_norm}, {d.d2_norm})"
            ) from exc
        if not 0.0 <= value <= 1.0:
            raise InvalidWeightError(
                f"composite weight {value!r} outside [0, 1] at ({d.d1_norm}, {d.d2_norm})"
            )
        return value

    def describe(self) -> dict:
        return {"kind": self.kind, "expression": self.expr.to_descriptor()}


MODEL_KINDS = (
    "constant",
    "perceptions",
    "case1",
    "case2",
    "case3",
    "violating-demo",
    "composite",
)


def model_from_descriptor(desc: Mapping) -> WeightModel:
    """Instantiate a weight model from its wire descriptor {"kind": ..., params}."""
    if not isinstance(desc, Mapping):
        raise ScenarioValidationError([f"model descriptor must be an object, got {desc!r}"])
    kind = desc.get("kind")
    problems: list[str] = []
    try:
        if kind == "constant":
            if "alpha" not in desc:
                raise InvalidInputError("constant model needs 'alpha'")
            return ConstantWeight(float(desc["alpha"]))
        if kind == "perceptions":
            missing = [k for k in ("p11", "p12", "p21", "p22") if k not in desc]
            if missing:
                raise InvalidInputError(f"perceptions model missing {missing}")
            return PerceptionWeight(
                PerceptionMatrix(*(float(desc[k]) for k in ("p11", "p12", "p21", "p22")))
            )
        if kind in ("case1", "case2", "case3"):
            return CaseWeight(int(kind[-1]), strict=bool(desc.get("strict", False)))
        if kind == "violating-demo":
            return ViolatingDemoWeight()
        if kind == "composite":
            if "expression" not in desc:
                raise InvalidInputError("composite model needs 'expression'")
            return CompositeWeight(
                parse_expression(desc["expression"]),
                validation_step=float(desc.get("validation_step", 0.005)),
            )
    except ScenarioValidationError:
        raise
    except (InvalidInputError, InvalidWeightError, TypeError, ValueError) as exc:
        problems.append(str(exc))
    if not problems:
        problems.append(
            f"unknown model kind {kind!r}; known kinds: {', '.join(MODEL_KINDS)}"
        )
    raise ScenarioValidationError(problems)
