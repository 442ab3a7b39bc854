"""Pydantic request/response models for the HTTP service.

These mirror the core domain types; converters to and from the core
dataclasses live next to each model.
"""
from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

from .. import model as core


class WeightsRequest(BaseModel):
    matrix: list[list[float]]
    method: Literal["eigenvector", "geometric_mean"] = "eigenvector"


class WeightsResponse(BaseModel):
    weights: list[float]
    lambda_max: float
    ci: float
    cr: float
    consistent: bool


class IndexModel(BaseModel):
    id: str
    label: str = ""
    weight: float = Field(gt=0, description="global weight of the index")
    polarity: Literal["benefit", "cost"] = "benefit"
    rule: Literal["natural_breaks_10", "manual_258"] = "natural_breaks_10"
    units: str = ""


class CriterionModel(BaseModel):
    id: str
    label: str = ""
    indexes: list[IndexModel]


class HierarchyModel(BaseModel):
    goal: str = "suitability"
    criteria: list[CriterionModel]

    def to_core(self) -> core.CriterionHierarchy:
        spec = [
            (c.id, c.label or c.id,
             [(ix.id, ix.label or ix.id, ix.weight, ix.polarity, ix.rule,
               ix.units) for ix in c.indexes])
            for c in self.criteria
        ]
        return core.hierarchy_from_global_weights(self.goal, spec)

    @classmethod
    def from_core(cls, h: core.CriterionHierarchy) -> "HierarchyModel":
        return cls(goal=h.goal_label, criteria=[
            CriterionModel(id=c.id, label=c.label, indexes=[
                IndexModel(id=ix.id, label=ix.label,
                           weight=c.local_weight * ix.local_weight,
                           polarity=ix.polarity, rule=ix.scoring_rule,
                           units=ix.units)
                for ix in c.children])
            for c in h.criteria])


class ShelterModel(BaseModel):
    id: str
    name: str = ""
    district: str = ""
    x: float = 0.0
    y: float = 0.0
    values: dict[str, Union[float, str]]

    def to_core(self) -> core.ShelterRecord:
        return core.ShelterRecord(self.id, self.name, self.district,
                                  self.x, self.y, dict(self.values))


class SuitabilityRequest(BaseModel):
    shelters: list[ShelterModel]
    hierarchy: Optional[HierarchyModel] = None  # defaults to the bundled one


class SuitabilityRow(BaseModel):
    id: str
    name: str
    district: str
    index_scores: dict[str, int]
    criterion_scores: dict[str, float]
    composite: float
    grade: str


class SuitabilityResponse(BaseModel):
    rows: list[SuitabilityRow]
    grade_histogram: dict[str, int]


class CapacityRequest(BaseModel):
    districts: list[str]
    matrix: list[list[float]] = Field(
        description="one row of six capacity indicators per district")
    weights: Optional[list[float]] = None
    directions: Optional[list[Literal["benefit", "cost"]]] = None
    squared_weights: bool = False


class CapacityRow(BaseModel):
    district: str
    d_plus: float
    d_minus: float
    closeness: float
    rank: int


class CapacityResponse(BaseModel):
    rows: list[CapacityRow]  # rank order


class GridModel(BaseModel):
    x0: float
    y0: float
    cell_size: float = Field(gt=0)
    density: list[list[Optional[float]]] = Field(
        description="rows north-first, persons/ha; null marks NODATA")


class PointModel(BaseModel):
    x: float
    y: float


class CoverageRequest(BaseModel):
    points: list[PointModel]
    grid: GridModel
    radius_m: Optional[float] = None
    speed_kmh: Optional[float] = None
    minutes: Optional[float] = None


class CoverageResponse(BaseModel):
    radius_m: float
    covered_cells: int
    coverage_ha: float
    effective_population: float
    blind_share: float
