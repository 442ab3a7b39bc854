"""Index scoring, criterion aggregation and grading of shelters.

Natural-breaks indexes are classified over the whole cohort into 10
levels and scored 1..10 (reversed for cost indexes). Manually graded
indexes carry low/mid/high category labels mapped to 2/5/8. Criterion
scores are the weighted means of their child scores; the composite index
is the criterion-weighted mean of those, which is algebraically identical
to the flat weighted sum over all index scores.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ValidationError
from .jenks import effective_classes, jenks_breaks
from .model import (COST, MANUAL_258, NATURAL_BREAKS_10, CriterionHierarchy,
                    ShelterRecord, validate_hierarchy)

MANUAL_SCORES = {"low": 2, "mid": 5, "high": 8}
SCORE_LEVELS = 10

# Grade bins are half-open on the left: P = 6.000 is C, P = 6.001 is B.
_GRADE_BOUNDS = ((8.0, "A"), (6.0, "B"), (4.0, "C"), (2.0, "D"))


@dataclass(frozen=True)
class SuitabilityResult:
    shelter_id: str
    name: str
    district: str
    index_scores: Mapping[str, int]
    criterion_scores: Mapping[str, float]
    composite: float
    grade: str


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def rescale_levels(n_classes: int) -> list[int]:
    """Scores for class ranks 1..n_classes mapped onto the 1..10 scale."""
    if n_classes == 1:
        return [1]
    return [
        _round_half_up(1 + (c - 1) * (SCORE_LEVELS - 1) / (n_classes - 1))
        for c in range(1, n_classes + 1)
    ]


def score_index(raw, polarity: str, rule: str) -> list[int]:
    """Score one index's raw values across the cohort.

    Natural-breaks indexes with fewer than 10 distinct values fall back to
    one class per distinct value, with ranks rescaled onto 1..10 (a
    degeneracy warning is emitted). Cost polarity reverses the ranking.
    """
    if rule == MANUAL_258:
        scores = []
        for v in raw:
            key = str(v).strip().lower()
            if key not in MANUAL_SCORES:
                raise ValidationError(
                    f"unknown category level {v!r} (expected low/mid/high)"
                )
            scores.append(MANUAL_SCORES[key])
        return scores
    if rule != NATURAL_BREAKS_10:
        raise ValidationError(f"unknown scoring rule {rule!r}")

    values = [float(v) for v in raw]
    if not values:
        return []
    k = effective_classes(values, SCORE_LEVELS)
    if k < SCORE_LEVELS:
        warnings.warn(
            f"only {k} distinct value(s); natural-breaks levels reduced "
            f"from {SCORE_LEVELS} and rescaled",
            stacklevel=2,
        )
    breaks = jenks_breaks(values, k)
    levels = rescale_levels(k)
    if polarity == COST:
        levels = levels[::-1]
    return [levels[breaks.classify(v)] for v in values]


def criterion_scores(index_scores: Mapping[str, float],
                     h: CriterionHierarchy) -> dict[str, float]:
    """Weighted mean of child scores per criterion (local weights sum to 1)."""
    out = {}
    for c in h.criteria:
        missing = [ix.id for ix in c.children if ix.id not in index_scores]
        if missing:
            raise ValidationError(f"criterion {c.id}: missing scores for {missing}")
        out[c.id] = sum(ix.local_weight * index_scores[ix.id] for ix in c.children)
    return out


def composite_index(b_scores: Mapping[str, float],
                    weights: Mapping[str, float]) -> float:
    """Criterion-weighted composite index P."""
    if set(b_scores) != set(weights):
        raise ValidationError(
            f"criterion ids differ: {sorted(b_scores)} vs {sorted(weights)}"
        )
    total = sum(weights.values())
    if abs(total - 1.0) > 1e-6:
        raise ValidationError(f"criterion weights sum to {total:.8f}, not 1")
    return sum(weights[k] * b_scores[k] for k in b_scores)


def classify_grade(p: float) -> str:
    """Grade A..E from the composite index (half-open bins, upper inclusive)."""
    if not 0.0 <= p <= 10.0:
        raise ValidationError(f"composite index {p} outside [0, 10]")
    for lo, grade in _GRADE_BOUNDS:
        if p > lo:
            return grade
    return "E"


def evaluate_shelters(shelters: Sequence[ShelterRecord],
                      h: CriterionHierarchy) -> list[SuitabilityResult]:
    """Score a shelter cohort end to end; output order follows input order."""
    violations = validate_hierarchy(h)
    if violations:
        raise ValidationError("invalid hierarchy", violations)
    for s in shelters:
        v = s.validate_against(h)
        if v:
            raise ValidationError("invalid shelter record", v)
    if not shelters:
        return []

    scored: dict[str, list[int]] = {}
    for ix in h.indexes():
        column = [s.raw_values[ix.id] for s in shelters]
        scored[ix.id] = score_index(column, ix.polarity, ix.scoring_rule)

    crit_w = {c.id: c.local_weight for c in h.criteria}
    results = []
    for pos, s in enumerate(shelters):
        f = {iid: scored[iid][pos] for iid in h.index_ids()}
        b = criterion_scores(f, h)
        p = composite_index(b, crit_w)
        results.append(SuitabilityResult(
            shelter_id=s.id, name=s.name, district=s.district,
            index_scores=f, criterion_scores=b,
            composite=p, grade=classify_grade(p),
        ))
    return results


def grade_histogram(results: Sequence[SuitabilityResult]) -> dict[str, int]:
    hist = {g: 0 for g in "ABCDE"}
    for r in results:
        hist[r.grade] += 1
    return hist
