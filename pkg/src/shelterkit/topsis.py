"""Ideal-point ranking of districts on the capacity decision matrix.

Columns are vector-normalized, the per-column best/worst values form the
ideal and anti-ideal points, and each row is ranked by its relative
closeness S = D- / (D+ + D-). The weighted distance puts the weight
inside the radicand linearly, D = sqrt(sum_j w_j (z*_j - z_ij)^2); the
textbook squared-weight variant is available behind a flag.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NumericError, ValidationError

_WEIGHT_TOL = 1e-6


@dataclass(frozen=True)
class DecisionMatrix:
    """Alternatives x indicators matrix with column weights and directions."""

    names: tuple[str, ...]
    indicators: tuple[str, ...]
    values: np.ndarray
    weights: np.ndarray
    benefit: np.ndarray = field(default=None)  # bool per column; default all True

    def __post_init__(self):
        x = np.asarray(self.values, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        b = self.benefit
        b = np.ones(x.shape[1], dtype=bool) if b is None else np.asarray(b, dtype=bool)
        object.__setattr__(self, "values", x)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "benefit", b)
        m, n = x.shape
        if len(self.names) != m:
            raise ValidationError(f"{len(self.names)} names for {m} rows")
        if len(self.indicators) != n or len(w) != n or len(b) != n:
            raise ValidationError("indicator/weight/direction lengths differ")
        if not np.all(np.isfinite(x)) or np.any(x < 0):
            raise ValidationError("matrix values must be finite and nonnegative")
        if np.any(w <= 0) or np.any(w >= 1):
            raise ValidationError("column weights must lie in (0, 1)")
        if abs(w.sum() - 1.0) > _WEIGHT_TOL:
            raise ValidationError(f"column weights sum to {w.sum():.8f}, not 1")
        zero = np.where(~x.any(axis=0))[0]
        if len(zero):
            raise ValidationError(
                f"column {self.indicators[zero[0]]!r} is all zero; cannot normalize"
            )


@dataclass(frozen=True)
class TopsisResult:
    names: tuple[str, ...]
    d_plus: tuple[float, ...]
    d_minus: tuple[float, ...]
    closeness: tuple[float, ...]
    ranks: tuple[int, ...]

    def by_rank(self):
        """(name, d+, d-, s, rank) tuples in rank order."""
        rows = list(zip(self.names, self.d_plus, self.d_minus,
                        self.closeness, self.ranks))
        return sorted(rows, key=lambda r: r[4])


def normalize(x: np.ndarray, indicators: Sequence[str] | None = None) -> np.ndarray:
    """Vector normalization: z_ij = x_ij / sqrt(sum_i x_ij^2)."""
    x = np.asarray(x, dtype=float)
    norms = np.sqrt((x ** 2).sum(axis=0))
    zero = np.where(norms == 0)[0]
    if len(zero):
        j = zero[0]
        name = indicators[j] if indicators is not None else f"#{j}"
        raise NumericError(f"column {name} has zero norm; cannot normalize")
    return x / norms


def ideal_solutions(z: np.ndarray, benefit) -> tuple[np.ndarray, np.ndarray]:
    """Per-column ideal (best) and anti-ideal (worst) points."""
    benefit = np.asarray(benefit, dtype=bool)
    hi, lo = z.max(axis=0), z.min(axis=0)
    z_plus = np.where(benefit, hi, lo)
    z_minus = np.where(benefit, lo, hi)
    return z_plus, z_minus


def weighted_distances(z, z_plus, z_minus, weights, squared_weights=False):
    """Row distances to the ideal and anti-ideal points.

    By default the weight enters the radicand linearly; pass
    ``squared_weights=True`` for the w_j^2 variant.
    """
    w = np.asarray(weights, dtype=float)
    if squared_weights:
        w = w ** 2
    d_plus = np.sqrt((w * (z_plus - z) ** 2).sum(axis=1))
    d_minus = np.sqrt((w * (z_minus - z) ** 2).sum(axis=1))
    return d_plus, d_minus


def closeness_and_rank(names, d_plus, d_minus) -> TopsisResult:
    """Relative closeness and 1-based ranks (descending S, stable ties)."""
    d_plus = np.asarray(d_plus, dtype=float)
    d_minus = np.asarray(d_minus, dtype=float)
    degenerate = np.where((d_plus == 0) & (d_minus == 0))[0]
    if len(degenerate):
        raise NumericError(
            f"row {names[degenerate[0]]!r} coincides with both ideal points"
        )
    s = d_minus / (d_plus + d_minus)
    order = np.argsort(-s, kind="stable")
    ranks = np.empty(len(s), dtype=int)
    ranks[order] = np.arange(1, len(s) + 1)
    return TopsisResult(
        tuple(names),
        tuple(float(v) for v in d_plus),
        tuple(float(v) for v in d_minus),
        tuple(float(v) for v in s),
        tuple(int(r) for r in ranks),
    )


def evaluate(matrix: DecisionMatrix, squared_weights: bool = False) -> TopsisResult:
    """Full pipeline: normalize, ideal points, distances, closeness, rank."""
    z = normalize(matrix.values, matrix.indicators)
    z_plus, z_minus = ideal_solutions(z, matrix.benefit)
    d_plus, d_minus = weighted_distances(z, z_plus, z_minus, matrix.weights,
                                         squared_weights)
    return closeness_and_rank(matrix.names, d_plus, d_minus)


DEFAULT_CAPACITY_WEIGHTS = (0.175, 0.175, 0.175, 0.175, 0.15, 0.15)
