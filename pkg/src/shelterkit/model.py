"""Domain types: the criterion hierarchy and the shelter/district records.

The hierarchy is a three-layer tree (goal -> criteria -> indexes). Criteria
carry local weights that sum to 1; so do the index weights within each
criterion. The global weight of an index is the product of the two local
weights, so global weights across the whole tree also sum to 1.

All types are immutable after construction and safe to share between
threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from .errors import ValidationError

BENEFIT = "benefit"
COST = "cost"
NATURAL_BREAKS_10 = "natural_breaks_10"
MANUAL_258 = "manual_258"

_WEIGHT_TOL = 1e-6


@dataclass(frozen=True)
class IndexDefinition:
    """One leaf indicator of the hierarchy."""

    id: str
    label: str
    local_weight: float
    polarity: str = BENEFIT
    scoring_rule: str = NATURAL_BREAKS_10
    units: str = ""


@dataclass(frozen=True)
class Criterion:
    """A criterion-layer node grouping several indexes."""

    id: str
    label: str
    local_weight: float
    children: tuple[IndexDefinition, ...]


@dataclass(frozen=True)
class CriterionHierarchy:
    goal_label: str
    criteria: tuple[Criterion, ...]

    def indexes(self) -> tuple[IndexDefinition, ...]:
        return tuple(ix for c in self.criteria for ix in c.children)

    def index_ids(self) -> tuple[str, ...]:
        return tuple(ix.id for ix in self.indexes())

    def criterion_of(self, index_id: str) -> Criterion:
        for c in self.criteria:
            if any(ix.id == index_id for ix in c.children):
                return c
        raise KeyError(index_id)


def validate_hierarchy(h: CriterionHierarchy) -> list[str]:
    """Check all hierarchy invariants. Violations are data, not faults.

    Returns an empty list iff the hierarchy is valid; each entry names the
    offending node and the broken rule.
    """
    violations = []
    if not h.criteria:
        return ["hierarchy: no criteria defined"]
    for c in h.criteria:
        if not 0 < c.local_weight <= 1:
            violations.append(
                f"criterion {c.id}: local weight {c.local_weight} outside (0, 1]"
            )
        if not c.children:
            violations.append(f"criterion {c.id}: no child indexes")
            continue
        child_sum = sum(ix.local_weight for ix in c.children)
        if abs(child_sum - 1.0) > _WEIGHT_TOL:
            violations.append(
                f"criterion {c.id}: child weights sum to {child_sum:.8f}, not 1"
            )
        for ix in c.children:
            if not 0 < ix.local_weight <= 1:
                violations.append(
                    f"index {ix.id}: local weight {ix.local_weight} outside (0, 1]"
                )
            if ix.polarity not in (BENEFIT, COST):
                violations.append(f"index {ix.id}: unknown polarity {ix.polarity!r}")
            if ix.scoring_rule not in (NATURAL_BREAKS_10, MANUAL_258):
                violations.append(
                    f"index {ix.id}: unknown scoring rule {ix.scoring_rule!r}"
                )
    crit_sum = sum(c.local_weight for c in h.criteria)
    if abs(crit_sum - 1.0) > _WEIGHT_TOL:
        violations.append(f"hierarchy: criterion weights sum to {crit_sum:.8f}, not 1")
    seen: dict[str, str] = {}
    for c in h.criteria:
        for ix in c.children:
            if ix.id in seen:
                violations.append(
                    f"index {ix.id}: duplicate id (under {seen[ix.id]} and {c.id})"
                )
            seen[ix.id] = c.id
    return violations


def global_weights(h: CriterionHierarchy) -> dict[str, float]:
    """Global weight per index id: criterion weight x index local weight."""
    violations = validate_hierarchy(h)
    if violations:
        raise ValidationError("invalid hierarchy", violations)
    return {
        ix.id: c.local_weight * ix.local_weight
        for c in h.criteria
        for ix in c.children
    }


def criterion_weights(h: CriterionHierarchy) -> dict[str, float]:
    return {c.id: c.local_weight for c in h.criteria}


@dataclass(frozen=True)
class ShelterRecord:
    """One shelter and its raw indicator values.

    ``raw_values`` holds one entry per index of the hierarchy; numeric for
    natural-breaks indexes, a category label (low/mid/high) for manually
    graded ones. Coordinates are projected planar meters.
    """

    id: str
    name: str
    district: str
    x: float
    y: float
    raw_values: Mapping[str, Union[float, str]] = field(default_factory=dict)

    def validate_against(self, h: CriterionHierarchy) -> list[str]:
        violations = []
        ids = set(h.index_ids())
        missing = ids - set(self.raw_values)
        extra = set(self.raw_values) - ids
        if missing:
            violations.append(f"shelter {self.id}: missing values for {sorted(missing)}")
        if extra:
            violations.append(f"shelter {self.id}: unknown index ids {sorted(extra)}")
        import math

        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            violations.append(f"shelter {self.id}: non-finite coordinates")
        return violations


@dataclass(frozen=True)
class DistrictRecord:
    """Per-district shelter statistics (absolute units: persons, ha, km2)."""

    name: str
    area_km2: float
    permanent_population: float
    population_density: float  # persons per hectare
    shelter_count: int
    total_refuge_area_ha: float
    total_refuge_population: float

    def validate(self) -> list[str]:
        violations = []
        if self.area_km2 <= 0:
            violations.append(f"district {self.name}: area must be positive")
        if self.permanent_population <= 0:
            violations.append(f"district {self.name}: population must be positive")
        for fname in ("population_density", "total_refuge_area_ha",
                      "total_refuge_population"):
            if getattr(self, fname) < 0:
                violations.append(f"district {self.name}: {fname} must be >= 0")
        if self.shelter_count < 0:
            violations.append(f"district {self.name}: shelter_count must be >= 0")
        return violations

    def density_consistency(self) -> float | None:
        """Relative gap between the stated and the derived density.

        Density should equal permanent_population / (area_km2 * 100) within
        1% when both are supplied. Returns the relative error, or None when
        the check is not applicable.
        """
        if self.area_km2 <= 0 or self.population_density <= 0:
            return None
        derived = self.permanent_population / (self.area_km2 * 100.0)
        return abs(derived - self.population_density) / self.population_density


@dataclass(frozen=True)
class CapacityIndicators:
    """The six per-district capacity indicators (decision-matrix row)."""

    total_refuge_area_ha: float
    total_refuge_population: float
    effective_refuge_range_ha: float
    effective_refuge_population: float
    avg_refuge_area_m2: float
    avg_effective_refuge_area_m2: float

    FIELDS = (
        "total_refuge_area_ha",
        "total_refuge_population",
        "effective_refuge_range_ha",
        "effective_refuge_population",
        "avg_refuge_area_m2",
        "avg_effective_refuge_area_m2",
    )

    def as_row(self) -> list[float]:
        return [getattr(self, f) for f in self.FIELDS]


def default_hierarchy() -> CriterionHierarchy:
    """The bundled reference hierarchy with its validated index weights.

    Index weights are given globally; criterion weights are the sums of
    their children's global weights and index local weights are the global
    weights renormalized within each criterion.
    """
    spec = [
        ("B1", "Effectiveness", [
            ("C1", "Refuge area", 0.0930, BENEFIT, NATURAL_BREAKS_10, "ha"),
            ("C2", "Capacity", 0.0930, BENEFIT, NATURAL_BREAKS_10, "persons"),
            ("C3", "Functional facilities", 0.0465, BENEFIT, MANUAL_258, "level"),
        ]),
        ("B2", "Safety", [
            ("C4", "Topography", 0.0841, BENEFIT, NATURAL_BREAKS_10, "level"),
            ("C5", "Distance from major hazard installations", 0.1780,
             BENEFIT, NATURAL_BREAKS_10, "m"),
            ("C6", "Avoidance of geological hazard-prone areas", 0.0519,
             BENEFIT, NATURAL_BREAKS_10, "level"),
            ("C7", "Avoidance of hidden hydrological points", 0.0519,
             BENEFIT, NATURAL_BREAKS_10, "level"),
        ]),
        ("B3", "Reachability", [
            ("C8", "Distance to nearest hospital", 0.0525, COST,
             NATURAL_BREAKS_10, "m"),
            ("C9", "Distance to nearest fire station", 0.0597, COST,
             NATURAL_BREAKS_10, "m"),
            ("C10", "Distance to nearest public security unit", 0.0294, COST,
             NATURAL_BREAKS_10, "m"),
            ("C11", "Road accessibility", 0.1362, BENEFIT, MANUAL_258, "level"),
        ]),
        ("B4", "Supportability", [
            ("C12", "Daily management", 0.0928, BENEFIT, NATURAL_BREAKS_10,
             "level"),
            ("C13", "Sustainable development", 0.0310, BENEFIT, MANUAL_258,
             "level"),
        ]),
    ]
    return hierarchy_from_global_weights("Emergency shelter suitability", spec)


def hierarchy_from_global_weights(goal_label, spec) -> CriterionHierarchy:
    """Build a hierarchy from per-index global weights.

    ``spec`` is a list of (criterion_id, label, children) where each child is
    (index_id, label, global_weight, polarity, rule, units). Criterion local
    weights are the child sums over the grand total; child local weights are
    renormalized shares within the criterion.
    """
    grand = sum(w for _, _, children in spec for _, _, w, _, _, _ in children)
    if grand <= 0:
        raise ValidationError("hierarchy: nonpositive total weight")
    criteria = []
    for cid, clabel, children in spec:
        total = sum(w for _, _, w, _, _, _ in children)
        if total <= 0:
            raise ValidationError(f"criterion {cid}: nonpositive weight sum")
        ixs = tuple(
            IndexDefinition(iid, ilabel, w / total, polarity, rule, units)
            for iid, ilabel, w, polarity, rule, units in children
        )
        criteria.append(Criterion(cid, clabel, total / grand, ixs))
    return CriterionHierarchy(goal_label, tuple(criteria))
