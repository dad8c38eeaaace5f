#!/usr/bin/env python3
"""
FastAPI service for the elastica optimizer
Solves single shapes, sweeps and the segment onset over HTTP
"""

import logging
from dataclasses import asdict
from typing import Any, Dict, List, Literal, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field, model_validator

from config import configure_logging, get_settings
from diagram import find_segment_onset, interior_families, sweep
from errors import BracketError, ElasticaError, NonConvergenceError
from shooting import ShapeSolver
from special_functions import rho_constant

configure_logging()
logger = logging.getLogger(__name__)

app = FastAPI(title="Elastica Optimizer API")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

solver = ShapeSolver(get_settings())

Mode = Literal["auto", "strict", "segments", "disk"]


class SolveRequest(BaseModel):
    mu: float = Field(gt=0)
    q: int = Field(default=1, ge=1, le=2)
    mode: Mode = "auto"
    include_boundary: bool = False


class SolveResponse(BaseModel):
    success: bool
    record: Dict[str, Any]
    boundary: Optional[List[List[float]]] = None


class SweepRequest(BaseModel):
    mu_min: float = Field(gt=0)
    mu_max: float = Field(gt=0)
    steps: int = Field(default=20, ge=2, le=400)
    q: int = Field(default=1, ge=1, le=2)
    mode: Mode = "auto"

    @model_validator(mode="after")
    def ordered(self):
        if self.mu_min >= self.mu_max:
            raise ValueError("mu_min must be below mu_max")
        return self


class SweepResponse(BaseModel):
    success: bool
    rows: List[Dict[str, Any]]
    failed: int = 0


def _error_response(e: ElasticaError) -> HTTPException:
    if isinstance(e, NonConvergenceError):
        return HTTPException(status_code=500, detail=e.to_dict())
    if isinstance(e, ValueError):
        return HTTPException(status_code=422, detail={"error": str(e)})
    return HTTPException(status_code=500, detail={"error": str(e)})


@app.get("/")
async def root():
    return {"message": "Elastica Optimizer API", "status": "running", "rho": rho_constant()}


@app.post("/solve", response_model=SolveResponse)
async def solve(request: SolveRequest):
    try:
        shape = solver.solve(request.mu, request.q, request.mode)
    except ElasticaError as e:
        logger.error("solve mu=%g failed: %s", request.mu, e)
        raise _error_response(e)
    boundary = shape.poly.vertices.tolist() if request.include_boundary else None
    return SolveResponse(success=True, record=shape.to_record(), boundary=boundary)


@app.post("/sweep", response_model=SweepResponse)
async def run_sweep(request: SweepRequest):
    table = sweep(request.mu_min, request.mu_max, request.steps, q=request.q, mode=request.mode,
                  settings=solver.settings, cache=solver.cache)
    # NaN is not valid JSON
    frame = table.to_frame().astype(object)
    rows = frame.where(frame.notna(), None).to_dict(orient="records")
    return SweepResponse(success=table.is_complete, rows=rows, failed=len(table.failures))


@app.get("/onset")
async def onset(lo: float = 3.0, hi: float = 4.0, tol: float = 1e-3, q: int = 1):
    if tol <= 0:
        raise HTTPException(status_code=422, detail={"error": "tol must be positive"})
    try:
        value = find_segment_onset(lo, hi, tol, q=q, solver=solver)
    except BracketError as e:
        raise HTTPException(status_code=422, detail={"error": str(e)})
    except ElasticaError as e:
        raise _error_response(e)
    return {"onset": value, "tolerance": tol}


@app.get("/families")
async def families(n_max: int = 6, samples: int = 20):
    if n_max < 2 or samples < 1:
        raise HTTPException(status_code=422, detail={"error": "need n_max >= 2 and samples >= 1"})
    points = interior_families(n_max, samples, cross_check=False)
    return {
        "rho": rho_constant(),
        "points": [{"n": p.n, "a": p.a, "x": p.x, "y": p.y} for p in points],
    }


@app.get("/stats")
async def stats():
    return {"cache": solver.cache.get_cache_stats(), "settings": asdict(solver.settings)}


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
