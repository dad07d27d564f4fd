"""Stateless local HTTP facade over the solver, for the what-if UI and scripts.

All handlers are pure over their payloads; the only startup state is
configuration. Predictable model failures surface as 400 with a stable
machine-readable ``code`` (e.g. infeasible payoffs -> "no_deal"); 500 is
reserved for genuine bugs. Binds loopback by default — this is a local
analysis tool, not a deployment target.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .analysis import (
    DEFAULT_FD_STEP,
    DEFAULT_GRID_STEP,
    DEFAULT_TOL,
    family_to_json_dict,
    pareto_scan,
    solution_family,
)
from .core import DisagreementPoint, FinancialProfile, normalize_disagreement
from .errors import NashRoyaltyError, ScenarioValidationError
from .nomograph import build_layout, make_isopleth, render_svg
from .schemas import alpha_payload, resolve_alpha, solve_payload
from .weights import MODEL_KINDS, model_from_descriptor

MAX_SCAN_NODES = 1_000_000


class GridTooLargeError(NashRoyaltyError):
    """Scan request would exceed the node budget."""

    code = "grid_too_large"

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8080
PORT_ENV_VAR = "NASHROYALTY_PORT"


class FinancialsBody(BaseModel):
    operating_revenue: float
    operating_cost: float


class SolveBody(BaseModel):
    d1: float
    d2: float
    normalized: bool = True
    alpha: Optional[float] = None
    model: Optional[dict] = None
    financials: Optional[FinancialsBody] = None
    operating_margin: Optional[float] = None


class AlphaBody(BaseModel):
    d1: float
    d2: float
    model: dict


class ScanBody(BaseModel):
    model: dict
    grid_step: float = DEFAULT_GRID_STEP
    fd_step: float = DEFAULT_FD_STEP
    tol: float = DEFAULT_TOL


class FamilyBody(BaseModel):
    model: dict
    d2_levels: list[float] = Field(default_factory=lambda: [0.0, 0.2, 0.4, 0.6, 0.8])
    d1_step: float = DEFAULT_GRID_STEP


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _resolve_inputs(body: SolveBody):
    fin = None
    if body.financials is not None:
        fin = FinancialProfile(
            operating_revenue=body.financials.operating_revenue,
            operating_cost=body.financials.operating_cost,
        )
    if body.normalized:
        point = DisagreementPoint(body.d1, body.d2)
    else:
        if fin is None:
            raise ScenarioValidationError(
                ["raw (money) disagreement payoffs require 'financials' to normalize"]
            )
        point = normalize_disagreement(body.d1, body.d2, fin)
    if (body.alpha is None) == (body.model is None):
        raise ScenarioValidationError(["provide exactly one of 'alpha' or 'model'"])
    return point, fin


def create_app() -> FastAPI:
    app = FastAPI(title="nashroyalty", version=__version__)

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],  # loopback-only service; the UI may come from any local port
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(NashRoyaltyError)
    async def _domain_error(request: Request, exc: NashRoyaltyError):
        return _error_response(400, exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    async def _body_error(request: Request, exc: RequestValidationError):
        return _error_response(400, "invalid_request", str(exc.errors()))

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/api/models")
    def models() -> dict:
        """Model catalog with parameter schemas, for client-side validation."""
        number01 = {"type": "number", "minimum": 0.0, "maximum": 1.0}
        catalog = [
            {
                "kind": "constant",
                "label": "constant weight",
                "params": {"alpha": {**number01, "required": True}},
            },
            {
                "kind": "perceptions",
                "label": "perception matrix",
                "params": {
                    name: {**number01, "required": True}
                    for name in ("p11", "p12", "p21", "p22")
                },
            },
            {"kind": "case1", "label": "payoff-as-strength", "params": {}},
            {"kind": "case2", "label": "payoff-fraction strength", "params": {}},
            {"kind": "case3", "label": "strength from the other party's weakness", "params": {}},
            {"kind": "violating-demo", "label": "efficiency-violating demo", "params": {}},
            {
                "kind": "composite",
                "label": "composite expression",
                "params": {"expression": {"type": "object", "required": True}},
            },
        ]
        assert tuple(c["kind"] for c in catalog) == MODEL_KINDS
        return {"models": catalog}

    @app.post("/api/solve")
    def solve(body: SolveBody) -> dict:
        point, fin = _resolve_inputs(body)
        if body.model is not None:
            model = model_from_descriptor(body.model)
            alpha, notes = resolve_alpha(model, point)
        else:
            model, alpha, notes = None, body.alpha, []
        return solve_payload(
            point,
            alpha,
            operating_margin=body.operating_margin,
            financials=fin,
            warnings_list=notes,
            model=model,
        )

    @app.post("/api/alpha")
    def alpha(body: AlphaBody) -> dict:
        point = DisagreementPoint(body.d1, body.d2)
        return alpha_payload(model_from_descriptor(body.model), point)

    @app.post("/api/scan")
    def scan(body: ScanBody) -> dict:
        if body.grid_step <= 0:
            raise ScenarioValidationError(["grid_step must be > 0"])
        # Triangular-number bound, computed arithmetically so that absurd
        # steps are rejected before any grid is materialized.
        n = int(1.0 / body.grid_step + 1e-9)
        node_estimate = (n + 1) * (n + 2) // 2
        if node_estimate > MAX_SCAN_NODES:
            raise GridTooLargeError(
                f"about {node_estimate} nodes exceed the {MAX_SCAN_NODES} limit"
            )
        model = model_from_descriptor(body.model)
        report = pareto_scan(
            model, grid_step=body.grid_step, fd_step=body.fd_step, tol=body.tol
        )
        return report.to_json_dict()

    @app.post("/api/family")
    def family(body: FamilyBody) -> dict:
        model = model_from_descriptor(body.model)
        curves = solution_family(model, body.d2_levels, d1_step=body.d1_step)
        return family_to_json_dict(curves)

    @app.get("/api/nomograph.svg")
    def nomograph(
        alpha: Optional[float] = None,
        d1: Optional[float] = None,
        d2: Optional[float] = None,
        width: float = 640.0,
        height: float = 640.0,
        tick: float = 0.1,
    ) -> Response:
        layout = build_layout(
            canvas_width=width,
            canvas_height=height,
            alpha_tick=tick,
            result_tick=tick,
            grid_tick=tick,
        )
        overlay_args = (alpha, d1, d2)
        overlay = None
        if any(v is not None for v in overlay_args):
            if any(v is None for v in overlay_args):
                raise ScenarioValidationError(
                    ["overlay needs all three of alpha, d1, d2"]
                )
            overlay = make_isopleth(layout, alpha, DisagreementPoint(d1, d2))
        return Response(content=render_svg(layout, overlay), media_type="image/svg+xml")

    _mount_frontend(app)
    return app


def _mount_frontend(app: FastAPI) -> None:
    """Serve the built what-if UI when it exists next to the package checkout."""
    override = os.environ.get("NASHROYALTY_UI_DIR")
    dist = Path(override) if override else Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if dist.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(dist), html=True), name="ui")


app = create_app()


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(prog="nashroyalty-serve", description=__doc__)
    parser.add_argument("--host", default=DEFAULT_HOST)
    parser.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT)),
        help=f"listen port (or ${PORT_ENV_VAR})",
    )
    args = parser.parse_args(argv)

    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")


if __name__ == "__main__":
    main(sys.argv[1:])
