"""FastAPI application exposing the evaluation pipeline."""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import NumericError, ParseError, ShelterKitError, ValidationError
from . import handlers, schemas

app = FastAPI(
    title="shelterkit",
    description="Suitability scoring and capacity ranking of urban "
                "emergency shelters",
    version="0.1.0",
)


@app.exception_handler(ShelterKitError)
async def _domain_error(request: Request, exc: ShelterKitError):
    kind = ("parse" if isinstance(exc, ParseError)
            else "numeric" if isinstance(exc, NumericError)
            else "validation" if isinstance(exc, ValidationError)
            else "error")
    return JSONResponse(status_code=422,
                        content={"detail": str(exc), "kind": kind})


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/weights", response_model=schemas.WeightsResponse)
def weights(req: schemas.WeightsRequest) -> schemas.WeightsResponse:
    return handlers.compute_weights(req)


@app.post("/suitability", response_model=schemas.SuitabilityResponse)
def suitability(req: schemas.SuitabilityRequest) -> schemas.SuitabilityResponse:
    return handlers.evaluate_suitability(req)


@app.post("/capacity", response_model=schemas.CapacityResponse)
def capacity(req: schemas.CapacityRequest) -> schemas.CapacityResponse:
    return handlers.rank_capacity(req)


@app.post("/coverage", response_model=schemas.CoverageResponse)
def coverage(req: schemas.CoverageRequest) -> schemas.CoverageResponse:
    return handlers.analyze_coverage(req)
