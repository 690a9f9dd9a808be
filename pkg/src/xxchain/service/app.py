"""FastAPI application wrapping the core computations.

Every endpoint is a POST taking a pydantic request model and returning a
versioned response model; domain errors map to HTTP 422 with a structured
error type so thin clients can translate them to exit codes.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import entanglement, groundstate, spectrum, verify
from ..errors import ValidationError, XXChainError
from . import schemas


def _field_grid(req: schemas.EnergyRequest) -> list[float]:
    if req.b_range is not None:
        rng = req.b_range
        return list(np.linspace(rng.start, rng.stop, rng.steps))
    if req.auto_grid:
        p = spectrum.ChainParams(N=req.N, J=req.J)
        return verify.interval_fields(spectrum.phase_diagram(p), 1)
    if req.B is not None:
        return [req.B]
    raise ValidationError("one of B, b_range or auto_grid is required")


def _sector_list(N: int, r, r_range) -> list[int]:
    max_r = N // 2
    if r is not None:
        sectors = [r]
    elif r_range is not None:
        sectors = list(range(r_range.start, r_range.stop + 1))
    else:
        sectors = list(range(max_r + 1))
    for value in sectors:
        if not 0 <= value <= max_r:
            raise ValidationError(f"r={value} outside the ground family 0..{max_r}")
    return sectors


def create_app() -> FastAPI:
    app = FastAPI(title="xxchain", version="0.1.0")

    @app.exception_handler(XXChainError)
    async def _domain_error(_: Request, exc: XXChainError):
        return JSONResponse(
            status_code=422,
            content={
                "detail": {
                    "errorType": type(exc).__name__,
                    "message": str(exc),
                }
            },
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/energy", response_model=schemas.EnergyResponse)
    def energy(req: schemas.EnergyRequest) -> schemas.EnergyResponse:
        sectors = _sector_list(req.N, req.r, req.r_range)
        rows = [
            schemas.EnergyRow(
                r=r,
                B=B,
                energy=spectrum.sector_energy(
                    spectrum.ChainParams(N=req.N, J=req.J, B=B), r
                ),
            )
            for r in sectors
            for B in _field_grid(req)
        ]
        return schemas.EnergyResponse(N=req.N, J=req.J, rows=rows)

    @app.post("/phase-diagram", response_model=schemas.PhaseDiagramResponse)
    def phase_diagram(req: schemas.PhaseDiagramRequest) -> schemas.PhaseDiagramResponse:
        p = spectrum.ChainParams(N=req.N, J=req.J)
        diagram = spectrum.phase_diagram(p)
        intervals = [
            schemas.IntervalModel(
                r=iv.r,
                bLow=iv.b_low,
                bHigh=None if iv.b_high == float("inf") else iv.b_high,
                dCoefficient=iv.d_coefficient,
                dEdB=iv.slope,
            )
            for iv in diagram.intervals
        ]
        plot = []
        for B in sorted(verify.interval_fields(diagram, req.samples_per_interval)):
            r = spectrum.ground_sector(spectrum.ChainParams(N=req.N, J=req.J, B=B))
            plot.append(
                schemas.PlotRow(
                    B=B,
                    eMin=spectrum.sector_energy(
                        spectrum.ChainParams(N=req.N, J=req.J, B=B), r
                    ),
                    dEdB=-(req.N - 2 * r),
                    r=r,
                )
            )
        return schemas.PhaseDiagramResponse(
            N=req.N,
            J=req.J,
            criticalFields=diagram.critical_fields,
            derivativeJumps=[2.0] * len(diagram.critical_fields),
            intervals=intervals,
            plot=plot,
        )

    def _rank_report_model(report: entanglement.RankReport) -> schemas.RankReportModel:
        return schemas.RankReportModel(**report.to_json_dict())

    @app.post("/schmidt", response_model=schemas.SchmidtResponse)
    def schmidt(req: schemas.SchmidtRequest) -> schemas.SchmidtResponse:
        M = req.N // 2 if req.M is None else req.M
        sectors = _sector_list(req.N, req.r, req.r_range)
        reports = [
            _rank_report_model(
                entanglement.schmidt_rank(
                    req.N, M, r, tol=req.tolerance, precision=req.precision
                )
            )
            for r in sectors
        ]
        return schemas.SchmidtResponse(
            N=req.N,
            M=M,
            tolerance=req.tolerance,
            precision=req.precision,
            reports=reports,
            reliable=all(rep.reliable for rep in reports),
        )

    @app.post("/classify", response_model=schemas.ClassifyResponse)
    def classify(req: schemas.ClassifyRequest) -> schemas.ClassifyResponse:
        p = spectrum.ChainParams(N=req.N, J=req.J)
        M = req.N // 2 if req.M is None else req.M
        reports = {
            r: entanglement.schmidt_rank(
                req.N, M, r, tol=req.tolerance, precision=req.precision
            )
            for r in range(req.N // 2 + 1)
        }
        transitions = []
        for r in range(p.max_sector):
            verdict = entanglement.slocc_verdict(reports[r], reports[r + 1])
            transitions.append(
                schemas.TransitionModel(
                    r=r,
                    criticalField=spectrum.critical_field(p, r),
                    rankAbove=verdict.rank_a,
                    rankBelow=verdict.rank_b,
                    verdict=verdict.verdict,
                    reliable=verdict.reliable,
                )
            )
        return schemas.ClassifyResponse(
            N=req.N,
            J=req.J,
            M=M,
            tolerance=req.tolerance,
            precision=req.precision,
            transitions=transitions,
            reliable=all(t.reliable for t in transitions),
        )

    @app.post("/verify", response_model=schemas.VerifyResponse)
    def verify_endpoint(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
        checks = [
            schemas.CheckModel(**c.to_json_dict())
            for c in verify.run_all(req.N, req.J, tol=req.tolerance)
        ]
        return schemas.VerifyResponse(
            N=req.N,
            J=req.J,
            tolerance=req.tolerance,
            checks=checks,
            allPassed=all(c.passed for c in checks),
        )

    @app.post("/state", response_model=schemas.StateResponse)
    def state(req: schemas.StateRequest) -> schemas.StateResponse:
        built = groundstate.build_state(req.N, req.r)
        payload = built.to_json_dict()
        return schemas.StateResponse(
            N=req.N,
            r=req.r,
            normConstant=payload["normConstant"],
            entries=payload["entries"],
        )

    return app


app = create_app()
