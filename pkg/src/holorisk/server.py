"""HTTP API.

JSON over HTTP, one endpoint per CLI subcommand, serving the exact same
payload dicts (shared serialization helpers). Domain errors map to an
ApiError body {code, message, detail} with a status from the code:
VALIDATION 400, NOT_FOUND 404, DEGENERATE_INPUT and SIM_DIVERGED 422,
INTERNAL 500. The service is stateless apart from the scenario store.
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import dynamics, metrics, workbench
from .errors import HoloriskError

STATUS_BY_CODE = {
    "VALIDATION": 400,
    "NOT_FOUND": 404,
    "DEGENERATE_INPUT": 422,
    "SIM_DIVERGED": 422,
    "INTERNAL": 500,
}


class ScenarioIn(BaseModel):
    name: str
    kind: str
    config: dict


class RunIn(BaseModel):
    seed: int | None = None


class WhatIfIn(BaseModel):
    overrides: dict = Field(default_factory=dict)
    seed: int | None = None


class CounterIn(BaseModel):
    params: list[str]
    fractions: list[float] = Field(default_factory=lambda: [0.1, -0.1])
    seed: int | None = None
    seeds: list[int] | None = None


def create_app(store_path: str | None = None) -> FastAPI:
    app = FastAPI(title="holorisk", version="0.1.0")
    store = workbench.ScenarioStore(workbench.resolve_store_path(store_path))

    @app.exception_handler(HoloriskError)
    async def domain_error(request: Request, exc: HoloriskError):
        return JSONResponse(status_code=STATUS_BY_CODE[exc.code], content=exc.to_dict())

    @app.exception_handler(RequestValidationError)
    async def body_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "VALIDATION", "message": "invalid request", "detail": str(exc.errors())},
        )

    @app.exception_handler(Exception)
    async def unexpected_error(request: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"code": "INTERNAL", "message": str(exc), "detail": None},
        )

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.post("/scenarios", status_code=201)
    async def save_scenario(body: ScenarioIn):
        return store.save(name=body.name, kind=body.kind, config=body.config).to_dict()

    @app.get("/scenarios")
    async def list_scenarios():
        return store.list()

    @app.get("/scenarios/{scenario_id}")
    async def get_scenario(scenario_id: str):
        return store.load(scenario_id).to_dict()

    @app.post("/scenarios/{scenario_id}/run")
    async def run_scenario(scenario_id: str, body: RunIn | None = None):
        seed = body.seed if body else None
        return workbench.run_scenario(store, scenario_id, seed_override=seed).to_dict()

    @app.post("/scenarios/{scenario_id}/whatif")
    async def what_if(scenario_id: str, body: WhatIfIn):
        return workbench.what_if(store, scenario_id, body.overrides, seed=body.seed).to_dict()

    @app.post("/scenarios/{scenario_id}/countermeasures")
    async def countermeasures(scenario_id: str, body: CounterIn):
        return workbench.propose_countermeasures(
            store,
            scenario_id,
            tunable_params=body.params,
            step_fractions=body.fractions,
            seed=body.seed,
            seeds=body.seeds,
        ).to_dict()

    @app.post("/complexity")
    async def complexity(
        request: Request,
        edge_threshold: float = Query(default=metrics.DEFAULT_EDGE_THRESHOLD),
        mode: str = Query(default="levels"),
        sigma_limit: float | None = Query(default=None),
    ):
        text = (await request.body()).decode("utf-8", errors="replace")
        series = metrics.read_series_csv(text)
        if sigma_limit is not None:
            cmp = metrics.systemic_vs_individual(
                series, sigma_limit=sigma_limit, edge_threshold=edge_threshold, mode=mode
            )
            return metrics.comparison_to_dict(cmp)
        report = metrics.compute_complexity(series, edge_threshold=edge_threshold, mode=mode)
        return metrics.report_to_dict(report)

    @app.get("/dynamics/bifurcation")
    async def bifurcation(
        r_min: float = Query(default=2.5),
        r_max: float = Query(default=4.0),
        r_count: int = Query(default=600),
        x0: float = Query(default=0.5),
        n_transient: int = Query(default=dynamics.DEFAULT_N_TRANSIENT),
        n_keep: int = Query(default=dynamics.DEFAULT_N_KEEP),
        dedup_tol: float = Query(default=dynamics.DEFAULT_DEDUP_TOL),
    ):
        diagram = dynamics.bifurcation_scan(
            r_min, r_max, r_count, x0=x0, n_transient=n_transient,
            n_keep=n_keep, dedup_tol=dedup_tol,
        )
        return dynamics.diagram_to_dict(diagram)

    @app.get("/dynamics/lyapunov")
    async def lyapunov(
        r: float,
        x0: float = Query(default=0.2),
        n: int = Query(default=200_000),
        n_transient: int = Query(default=1000),
        method: str = Query(default="derivative"),
    ):
        if method == "derivative":
            est = dynamics.lyapunov_logistic(r, x0=x0, n=n, n_transient=n_transient)
        elif method == "twin":
            est = dynamics.lyapunov_twin_orbit(r, x0=x0, n_transient=n_transient)
        else:
            from .errors import ValidationError

            raise ValidationError(f"method must be 'derivative' or 'twin', got {method!r}",
                                  detail="method")
        return dynamics.lyapunov_to_dict(est)

    return app


def run_server(host: str = "127.0.0.1", port: int = 8000, store_path: str | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(store_path), host=host, port=port)
