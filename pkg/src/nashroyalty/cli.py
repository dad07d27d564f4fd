"""Command-line front end.

Subcommands: solve, alpha, scan, family, nomograph, verify. Human-readable
tables by default, ``--json`` for the wire schema. Data goes to stdout (or
``--out``), diagnostics to stderr.

Exit codes: 0 success; 2 no-deal/infeasible inputs; 3 invalid arguments or
unusable values; 4 internal model error or failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    DEFAULT_FD_STEP,
    DEFAULT_GRID_STEP,
    DEFAULT_TOL,
    family_to_csv,
    family_to_json_dict,
    pareto_scan,
    report_to_csv,
    solution_family,
)
from .core import DisagreementPoint, FinancialProfile
from .errors import InfeasibleError, NashRoyaltyError, NoDealError
from .nomograph import build_layout, make_isopleth, render_svg
from .oracles import run_verification
from .schemas import alpha_payload, load_scenarios, resolve_alpha, solve_payload
from .weights import MODEL_KINDS, ConstantWeight, model_from_descriptor

EXIT_OK = 0
EXIT_NO_DEAL = 2
EXIT_USAGE = 3
EXIT_INTERNAL = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems instead of sys.exit(2)."""

    def error(self, message: str):
        raise _UsageError(message)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=MODEL_KINDS, help="weight model by name")
    p.add_argument("--alpha", type=float, help="constant bargaining weight in [0, 1]")
    for name in ("p11", "p12", "p21", "p22"):
        p.add_argument(f"--{name}", type=float, help=f"perception {name} in [0, 1]")
    p.add_argument("--expression", help="composite weight expression (JSON)")
    p.add_argument("--strict", action="store_true", help="error instead of warning at d1=d2=0")


def _add_point_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d1", type=float, help="party 1 normalized disagreement payoff")
    p.add_argument("--d2", type=float, help="party 2 normalized disagreement payoff")


def _add_scenario_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenarios", metavar="FILE", help="scenario JSON file")
    p.add_argument("--scenario", metavar="NAME", help="scenario name within --scenarios")


def _add_output_flags(p: argparse.ArgumentParser, with_json: bool = True) -> None:
    if with_json:
        p.add_argument("--json", action="store_true", help="emit the JSON schema")
    p.add_argument("--precision", type=int, default=6, help="significant digits (tables)")
    p.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")


def build_parser() -> _Parser:
    parser = _Parser(prog="nashroyalty", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="royalty share/rate for a bargain")
    _add_point_flags(p_solve)
    _add_model_flags(p_solve)
    p_solve.add_argument("--operating-margin", type=float, help="margin to convert share into rate")
    _add_scenario_flags(p_solve)
    _add_output_flags(p_solve)

    p_alpha = sub.add_parser("alpha", help="evaluate a bargaining-weight model")
    _add_point_flags(p_alpha)
    _add_model_flags(p_alpha)
    _add_scenario_flags(p_alpha)
    _add_output_flags(p_alpha)

    p_scan = sub.add_parser("scan", help="Pareto-efficiency finite-difference scan")
    _add_model_flags(p_scan)
    _add_scenario_flags(p_scan)
    p_scan.add_argument("--grid-step", type=float, default=DEFAULT_GRID_STEP)
    p_scan.add_argument("--fd-step", type=float, default=DEFAULT_FD_STEP)
    p_scan.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    p_scan.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    p_family = sub.add_parser("family", help="solution-family curves at constant d2 levels")
    _add_model_flags(p_family)
    _add_scenario_flags(p_family)
    p_family.add_argument("--levels", default="0,0.2,0.4,0.6,0.8", help="comma-separated d2 levels")
    p_family.add_argument("--d1-step", type=float, default=DEFAULT_GRID_STEP)
    p_family.add_argument("--format", choices=("csv", "json"), default="csv")
    p_family.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    p_nomo = sub.add_parser("nomograph", help="render the alignment chart as SVG")
    p_nomo.add_argument("--overlay", metavar="ALPHA,D1,D2", help="draw the straight edge for a solution")
    p_nomo.add_argument("--width", type=float, default=640.0)
    p_nomo.add_argument("--height", type=float, default=640.0)
    p_nomo.add_argument("--tick", type=float, default=0.1, help="tick step on all scales")
    p_nomo.add_argument("--out", metavar="FILE", help="write SVG to FILE instead of stdout")

    p_verify = sub.add_parser("verify", help="run the numeric oracle suites")
    p_verify.add_argument("--instances", type=int, default=1000)
    p_verify.add_argument("--seed", type=int, default=20_240_001)
    p_verify.add_argument("--out", metavar="FILE", help="write the JSON report to FILE")

    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_scenario(args) -> object | None:
    if args.scenario and not args.scenarios:
        raise _UsageError("--scenario requires --scenarios FILE")
    if not args.scenarios:
        return None
    scenarios = load_scenarios(args.scenarios)
    if not args.scenario:
        raise _UsageError("--scenarios requires --scenario NAME")
    for s in scenarios:
        if s.name == args.scenario:
            return s
    known = ", ".join(s.name for s in scenarios)
    raise _UsageError(f"scenario {args.scenario!r} not found (known: {known})")


def _resolve_point(args, scenario) -> DisagreementPoint:
    d1, d2 = args.d1, args.d2
    if scenario is not None:
        if d1 is None:
            d1 = scenario.disagreement.d1_norm
        if d2 is None:
            d2 = scenario.disagreement.d2_norm
    if d1 is None or d2 is None:
        raise _UsageError("--d1 and --d2 are required (or use --scenario)")
    return DisagreementPoint(d1, d2)


def _model_descriptor_from_args(args) -> dict | None:
    if args.model is None:
        return None
    desc: dict = {"kind": args.model}
    if args.model == "constant":
        if args.alpha is None:
            raise _UsageError("--model constant requires --alpha")
        desc["alpha"] = args.alpha
    elif args.model == "perceptions":
        for name in ("p11", "p12", "p21", "p22"):
            value = getattr(args, name)
            if value is None:
                raise _UsageError("--model perceptions requires --p11 --p12 --p21 --p22")
            desc[name] = value
    elif args.model == "composite":
        if not args.expression:
            raise _UsageError("--model composite requires --expression JSON")
        try:
            desc["expression"] = json.loads(args.expression)
        except json.JSONDecodeError as exc:
            raise _UsageError(f"--expression is not valid JSON: {exc}")
    if getattr(args, "strict", False):
        desc["strict"] = True
    return desc


def _resolve_model(args, scenario, *, allow_bare_alpha: bool):
    """Returns (model | None, direct_alpha | None); exactly one is set."""
    desc = _model_descriptor_from_args(args)
    if desc is not None:
        return model_from_descriptor(desc), None
    if args.alpha is not None:
        if allow_bare_alpha:
            return None, args.alpha
        return ConstantWeight(args.alpha), None
    if scenario is not None:
        return scenario.model, None
    raise _UsageError("specify --alpha or --model NAME (or use --scenario)")


def _format_table(payload: dict, precision: int) -> str:
    def fmt(value) -> str:
        if isinstance(value, float):
            return f"{value:.{precision}g}"
        return str(value)

    notes = payload.get("warnings") or []
    width = max(len(k) for k in payload if k != "warnings")
    lines = [
        f"{key.ljust(width)}  {fmt(value)}"
        for key, value in payload.items()
        if key != "warnings" and value is not None
    ]
    lines += [f"note: {n}" for n in notes]
    return "\n".join(lines) + "\n"


def _cmd_solve(args) -> int:
    scenario = _load_scenario(args)
    point = _resolve_point(args, scenario)
    model, direct_alpha = _resolve_model(args, scenario, allow_bare_alpha=True)
    notes: list[str] = []
    if model is not None:
        alpha, notes = resolve_alpha(model, point)
    else:
        alpha = direct_alpha
    financials: FinancialProfile | None = scenario.financials if scenario else None
    payload = solve_payload(
        point,
        alpha,
        operating_margin=args.operating_margin,
        financials=financials,
        warnings_list=notes,
        model=model,
    )
    if args.json:
        _emit(json.dumps(payload) + "\n", args.out)
    else:
        _emit(_format_table(payload, args.precision), args.out)
    return EXIT_OK


def _cmd_alpha(args) -> int:
    scenario = _load_scenario(args)
    point = _resolve_point(args, scenario)
    model, _ = _resolve_model(args, scenario, allow_bare_alpha=False)
    payload = alpha_payload(model, point)
    if args.json:
        _emit(json.dumps(payload) + "\n", args.out)
    else:
        _emit(_format_table(payload, args.precision), args.out)
    return EXIT_OK


def _scan_model(args):
    scenario = _load_scenario(args)
    model, _ = _resolve_model(args, scenario, allow_bare_alpha=False)
    return model


def _cmd_scan(args) -> int:
    model = _scan_model(args)
    report = pareto_scan(model, grid_step=args.grid_step, fd_step=args.fd_step, tol=args.tol)
    if args.format == "json":
        _emit(json.dumps(report.to_json_dict()) + "\n", args.out)
    else:
        _emit(report_to_csv(report), args.out)
    summary = (
        f"{'PASS' if report.passed else 'FAIL'}: {len(report.nodes)} nodes, "
        f"{len(report.violations)} violations, "
        f"{len(report.degenerate_points)} degenerate, {len(report.errors)} errors\n"
    )
    sys.stderr.write(summary)
    return EXIT_OK


def _cmd_family(args) -> int:
    model = _scan_model(args)
    try:
        levels = [float(x) for x in args.levels.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"--levels must be comma-separated numbers: {exc}")
    curves = solution_family(model, levels, d1_step=args.d1_step)
    if args.format == "json":
        _emit(json.dumps(family_to_json_dict(curves)) + "\n", args.out)
    else:
        _emit(family_to_csv(curves), args.out)
    return EXIT_OK


def _cmd_nomograph(args) -> int:
    layout = build_layout(
        canvas_width=args.width,
        canvas_height=args.height,
        alpha_tick=args.tick,
        result_tick=args.tick,
        grid_tick=args.tick,
    )
    overlay = None
    if args.overlay:
        parts = args.overlay.split(",")
        if len(parts) != 3:
            raise _UsageError("--overlay wants ALPHA,D1,D2")
        try:
            alpha, d1, d2 = (float(x) for x in parts)
        except ValueError as exc:
            raise _UsageError(f"--overlay values must be numbers: {exc}")
        overlay = make_isopleth(layout, alpha, DisagreementPoint(d1, d2))
    _emit(render_svg(layout, overlay), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = run_verification(instances=args.instances, seed=args.seed)
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    if not report["pass"]:
        sys.stderr.write("verification FAILED\n")
        return EXIT_INTERNAL
    sys.stderr.write("verification passed\n")
    return EXIT_OK


_COMMANDS = {
    "solve": _cmd_solve,
    "alpha": _cmd_alpha,
    "scan": _cmd_scan,
    "family": _cmd_family,
    "nomograph": _cmd_nomograph,
    "verify": _cmd_verify,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (NoDealError, InfeasibleError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NO_DEAL
    except NashRoyaltyError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - defensive
        sys.stderr.write(f"internal error: {exc}\n")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
