"""Request handlers shared by the HTTP endpoints and the CLI."""
from __future__ import annotations

import numpy as np

from .. import ahp, coverage, suitability, topsis
from ..model import default_hierarchy
from . import schemas


def compute_weights(req: schemas.WeightsRequest) -> schemas.WeightsResponse:
    matrix = ahp.PairwiseMatrix(req.matrix)
    res = ahp.derive_weights(matrix, method=req.method)
    return schemas.WeightsResponse(
        weights=list(res.weights), lambda_max=res.lambda_max,
        ci=res.ci, cr=res.cr, consistent=res.consistent)


def evaluate_suitability(req: schemas.SuitabilityRequest
                         ) -> schemas.SuitabilityResponse:
    h = req.hierarchy.to_core() if req.hierarchy else default_hierarchy()
    shelters = [s.to_core() for s in req.shelters]
    results = suitability.evaluate_shelters(shelters, h)
    rows = [schemas.SuitabilityRow(
        id=r.shelter_id, name=r.name, district=r.district,
        index_scores=dict(r.index_scores),
        criterion_scores=dict(r.criterion_scores),
        composite=r.composite, grade=r.grade) for r in results]
    return schemas.SuitabilityResponse(
        rows=rows, grade_histogram=suitability.grade_histogram(results))


def rank_capacity(req: schemas.CapacityRequest) -> schemas.CapacityResponse:
    weights = (req.weights if req.weights is not None
               else list(topsis.DEFAULT_CAPACITY_WEIGHTS))
    benefit = ([d == "benefit" for d in req.directions]
               if req.directions is not None else None)
    matrix = topsis.DecisionMatrix(
        tuple(req.districts),
        tuple(f"x{j + 1}" for j in range(len(weights))),
        np.asarray(req.matrix, dtype=float),
        np.asarray(weights, dtype=float),
        None if benefit is None else np.asarray(benefit, dtype=bool))
    res = topsis.evaluate(matrix, squared_weights=req.squared_weights)
    return schemas.CapacityResponse(rows=[
        schemas.CapacityRow(district=name, d_plus=dp, d_minus=dm,
                            closeness=s, rank=rank)
        for name, dp, dm, s, rank in res.by_rank()])


def analyze_coverage(req: schemas.CoverageRequest) -> schemas.CoverageResponse:
    if req.radius_m is not None:
        radius = req.radius_m
    elif req.speed_kmh is not None and req.minutes is not None:
        radius = round(coverage.service_radius(req.speed_kmh, req.minutes))
    else:
        radius = coverage.DEFAULT_RADIUS_M
    density = np.array(
        [[np.nan if v is None else v for v in row] for row in req.grid.density],
        dtype=float)
    spec = coverage.GridSpec(req.grid.x0, req.grid.y0, req.grid.cell_size,
                             density.shape[0], density.shape[1])
    grid = coverage.PopulationGrid(spec, density)
    mask = coverage.rasterize_buffers([(p.x, p.y) for p in req.points],
                                      radius, spec)
    return schemas.CoverageResponse(
        radius_m=float(radius),
        covered_cells=int(mask.covered.sum()),
        coverage_ha=coverage.coverage_area(mask),
        effective_population=coverage.effective_population(mask, grid),
        blind_share=coverage.blind_share(mask))
