"""Suitability scoring and capacity ranking of urban emergency shelters."""

__version__ = "0.1.0"

from .model import (CapacityIndicators, Criterion, CriterionHierarchy,
                    DistrictRecord, IndexDefinition, ShelterRecord,
                    default_hierarchy, global_weights, validate_hierarchy)

__all__ = [
    "CapacityIndicators", "Criterion", "CriterionHierarchy",
    "DistrictRecord", "IndexDefinition", "ShelterRecord",
    "default_hierarchy", "global_weights", "validate_hierarchy",
    "__version__",
]
