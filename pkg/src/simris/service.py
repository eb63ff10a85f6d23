"""HTTP facade over the simulation core.

Endpoints (JSON bodies, schema_version field in every response):

    POST /validate        scenario -> violation list
    POST /simulate        scenario + run params -> rate report (bounded size)
    POST /heatmap         scenario + grid spec -> job id (polled)
    GET  /heatmap/{id}    job progress or completed grid
    GET  /recommend       known-good placement for (environment, wall)

Stateless except the heatmap job table; identical /simulate bodies give
identical responses on any replica.
"""

from __future__ import annotations

import math
import threading
import time
import uuid
from typing import Literal

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import metrics
from .channel import ChannelConfig, effective_channel, realize
from .geometry import (
    Environment,
    Point3,
    Scenario,
    WallPlacement,
    recommend_positions,
    validate_scenario,
)
from .metrics import RateReport, RxGrid, rate_heatmap

SCHEMA_VERSION = "1"

DEFAULT_TTL_SECONDS = 600.0
MAX_REALIZATIONS = 10_000
MAX_GRID_SIDE = 64


class ScenarioBody(BaseModel):
    environment: Literal["inh", "umi"]
    frequency_ghz: float = 28.0
    wall: Literal["side", "opposite"]
    tx: tuple[float, float, float]
    rx: tuple[float, float, float]
    ris: tuple[float, float, float]
    n_elements: int = 256
    element_spacing: float | None = None
    direct_link: bool = True

    def to_scenario(self) -> Scenario:
        return Scenario(
            environment=Environment(self.environment),
            frequency_ghz=self.frequency_ghz,
            wall=WallPlacement(self.wall),
            tx=Point3(*self.tx),
            rx=Point3(*self.rx),
            ris=Point3(*self.ris),
            n_elements=self.n_elements,
            element_spacing=self.element_spacing,
            direct_link_present=self.direct_link,
        )


class ValidateBody(BaseModel):
    scenario: ScenarioBody


class SimulateBody(BaseModel):
    scenario: ScenarioBody
    realizations: int = Field(default=500, ge=1)
    seed: int = Field(default=0, ge=0)
    profile_rule: Literal["optimal", "random", "off"] = "optimal"
    pt_dbw: float = 0.0
    noise_dbm: float = -100.0
    include_histogram: bool = False


class GridBody(BaseModel):
    x_min: float
    x_max: float
    nx: int = Field(ge=1)
    y_min: float
    y_max: float
    ny: int = Field(ge=1)
    rx_height: float = 1.0


class HeatmapBody(BaseModel):
    scenario: ScenarioBody
    grid: GridBody
    realizations: int = Field(default=200, ge=1)
    seed: int = Field(default=0, ge=0)
    profile_rule: Literal["optimal", "random", "off"] = "optimal"
    pt_dbw: float = 0.0
    noise_dbm: float = -100.0


def _violations_payload(violations) -> list[dict]:
    return [{"code": v.code, "message": v.message} for v in violations]


def _error(status: int, code: str, violations=()) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={
            "schema_version": SCHEMA_VERSION,
            "error": {"code": code, "violations": _violations_payload(violations)},
        },
    )


def _report_payload(report: RateReport) -> dict:
    return {
        "mean_rate_bps_hz": report.mean_rate,
        "rate_std": report.rate_std,
        "rate_stderr": report.rate_stderr,
        "mean_snr_db": report.mean_snr_db,
        "realizations": report.count,
        "pt_dbm": report.pt_dbm,
        "noise_dbm": report.noise_dbm,
    }


class _Job:
    def __init__(self, ttl: float):
        self.id = uuid.uuid4().hex
        self.status = "running"
        self.progress = 0.0
        self.result: dict | None = None
        self.error: str | None = None
        self.expires_at = time.monotonic() + ttl


def create_app(
    ttl_seconds: float = DEFAULT_TTL_SECONDS,
    max_realizations: int = MAX_REALIZATIONS,
    max_grid_side: int = MAX_GRID_SIDE,
) -> FastAPI:
    app = FastAPI(title="simris service", version=SCHEMA_VERSION)
    jobs: dict[str, _Job] = {}
    jobs_lock = threading.Lock()

    def sweep_expired() -> None:
        now = time.monotonic()
        with jobs_lock:
            for job_id in [j for j, job in jobs.items() if job.expires_at < now]:
                del jobs[job_id]

    @app.post("/validate")
    def validate(body: ValidateBody):
        violations = validate_scenario(body.scenario.to_scenario())
        return {
            "schema_version": SCHEMA_VERSION,
            "violations": _violations_payload(violations),
        }

    @app.post("/simulate")
    def simulate(body: SimulateBody):
        if body.realizations > max_realizations:
            return _error(422, "realization_cap")
        scenario = body.scenario.to_scenario()
        violations = validate_scenario(scenario)
        if violations:
            return _error(422, "invalid_scenario", violations)
        cfg = ChannelConfig(
            scenario=scenario, realizations=body.realizations, seed=body.seed
        )
        pt_watts = metrics.dbw_to_watts(body.pt_dbw)
        noise_watts = metrics.dbm_to_watts(body.noise_dbm)
        histogram = None
        if body.include_histogram:
            snrs_db = []
            stream = list(realize(cfg))
            for r in stream:
                rho = metrics.snr(
                    effective_channel(r, metrics.profile_for(body.profile_rule, r)),
                    pt_watts,
                    noise_watts,
                )
                snrs_db.append(10.0 * math.log10(rho) if rho > 0 else -300.0)
            counts, edges = np.histogram(snrs_db, bins=20)
            histogram = {"bin_edges_db": edges.tolist(), "counts": counts.tolist()}
            report = metrics.achievable_rate(stream, body.profile_rule, pt_watts, noise_watts)
        else:
            report = metrics.achievable_rate(
                realize(cfg), body.profile_rule, pt_watts, noise_watts
            )
        payload = {
            "schema_version": SCHEMA_VERSION,
            "seed": body.seed,
            "config": body.model_dump(),
            "violations": [],
            "report": _report_payload(report),
        }
        if histogram is not None:
            payload["histogram"] = histogram
        return payload

    @app.post("/heatmap")
    def heatmap_submit(body: HeatmapBody):
        sweep_expired()
        if body.realizations > max_realizations:
            return _error(422, "realization_cap")
        if body.grid.nx > max_grid_side or body.grid.ny > max_grid_side:
            return _error(422, "grid_cap")
        scenario = body.scenario.to_scenario()
        grid = RxGrid.regular(
            body.grid.x_min, body.grid.x_max, body.grid.nx,
            body.grid.y_min, body.grid.y_max, body.grid.ny,
            body.grid.rx_height,
        )
        for y in grid.y:
            for x in grid.x:
                import dataclasses

                cell = dataclasses.replace(scenario, rx=Point3(x, y, grid.height))
                violations = validate_scenario(cell)
                if violations:
                    return _error(422, "invalid_grid", violations)

        job = _Job(ttl_seconds)
        with jobs_lock:
            jobs[job.id] = job

        cfg = ChannelConfig(
            scenario=scenario, realizations=body.realizations, seed=body.seed
        )

        def run():
            def progress(done, total):
                job.progress = done / total

            try:
                result = rate_heatmap(
                    cfg,
                    grid,
                    profile_rule=body.profile_rule,
                    pt_watts=metrics.dbw_to_watts(body.pt_dbw),
                    noise_watts=metrics.dbm_to_watts(body.noise_dbm),
                    progress=progress,
                )
                job.result = {
                    "x": list(result.x),
                    "y": list(result.y),
                    "mean_rate_bps_hz": [
                        [r.mean_rate for r in row] for row in result.reports
                    ],
                    "rate_stderr": [
                        [r.rate_stderr for r in row] for row in result.reports
                    ],
                    "mean_snr_db": [
                        [r.mean_snr_db for r in row] for row in result.reports
                    ],
                    "seed": body.seed,
                }
                job.status = "done"
            except Exception as exc:  # surfaced to the poller
                job.error = str(exc)
                job.status = "error"
            job.expires_at = time.monotonic() + ttl_seconds

        threading.Thread(target=run, daemon=True).start()
        return {"schema_version": SCHEMA_VERSION, "job_id": job.id}

    @app.get("/heatmap/{job_id}")
    def heatmap_poll(job_id: str):
        sweep_expired()
        with jobs_lock:
            job = jobs.get(job_id)
        if job is None:
            return _error(404, "unknown_job")
        payload = {
            "schema_version": SCHEMA_VERSION,
            "job_id": job.id,
            "status": job.status,
            "progress": job.progress,
        }
        if job.status == "done":
            payload["result"] = job.result
        if job.status == "error":
            payload["error"] = {"code": "job_failed", "message": job.error}
        return payload

    @app.get("/recommend")
    def recommend(environment: Literal["inh", "umi"], wall: Literal["side", "opposite"]):
        scn = recommend_positions(Environment(environment), WallPlacement(wall))
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": {
                "environment": scn.environment.value,
                "frequency_ghz": scn.frequency_ghz,
                "wall": scn.wall.value,
                "tx": [scn.tx.x, scn.tx.y, scn.tx.z],
                "rx": [scn.rx.x, scn.rx.y, scn.rx.z],
                "ris": [scn.ris.x, scn.ris.y, scn.ris.z],
                "n_elements": scn.n_elements,
                "element_spacing": scn.element_spacing,
                "direct_link": scn.direct_link_present,
            },
        }

    return app
