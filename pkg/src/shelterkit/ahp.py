"""Weight derivation from reciprocal pairwise-comparison matrices.

The principal-eigenvector weights are obtained by power iteration, which
converges for any positive matrix; a geometric-mean alternative is offered
for cross-checking. Consistency is judged by CR = CI / RI with the standard
random-index table, acceptable when CR < 0.1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NumericError, ValidationError

# Saaty random consistency index, orders 1..15.
RANDOM_INDEX = (0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49,
                1.51, 1.48, 1.56, 1.57, 1.59)

CR_THRESHOLD = 0.1
_RECIPROCAL_RTOL = 1e-9
_POWER_TOL = 1e-10
_POWER_MAX_ITER = 10_000


class PairwiseMatrix:
    """A positive reciprocal judgment matrix of order 2..15."""

    def __init__(self, entries):
        a = np.asarray(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError(f"judgment matrix must be square, got {a.shape}")
        n = a.shape[0]
        if not 2 <= n <= len(RANDOM_INDEX):
            raise ValidationError(
                f"unsupported matrix order {n} (must be 2..{len(RANDOM_INDEX)})"
            )
        bad = np.argwhere(~(a > 0))
        if len(bad):
            i, j = bad[0]
            raise ValidationError(
                f"matrix entry ({i + 1},{j + 1}) = {a[i, j]} is not positive"
            )
        for i in range(n):
            if a[i, i] != 1.0:
                raise ValidationError(f"diagonal entry ({i + 1},{i + 1}) must be 1")
            for j in range(i + 1, n):
                if abs(a[j, i] * a[i, j] - 1.0) > _RECIPROCAL_RTOL:
                    raise ValidationError(
                        f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) "
                        f"are not reciprocal: {a[i, j]} vs {a[j, i]}"
                    )
        self.entries = a
        self.entries.setflags(write=False)
        self.n = n

    @classmethod
    def from_weights(cls, weights):
        """Perfectly consistent matrix a[i][j] = w_i / w_j."""
        w = np.asarray(weights, dtype=float)
        m = w[:, None] / w[None, :]
        np.fill_diagonal(m, 1.0)
        # enforce exact reciprocity against rounding
        for i in range(len(w)):
            for j in range(i + 1, len(w)):
                m[j, i] = 1.0 / m[i, j]
        return cls(m)


@dataclass(frozen=True)
class WeightResult:
    weights: tuple[float, ...]
    lambda_max: float
    ci: float
    cr: float
    consistent: bool


def consistency_ratio(lambda_max: float, n: int) -> tuple[float, float, bool]:
    """(CI, CR, pass) for a matrix of order n with principal value lambda_max.

    Orders 1 and 2 are consistent by definition (the CI denominator or the
    random index degenerates), so CR is reported as 0.
    """
    if n < 2:
        raise ValidationError(f"matrix order {n} below 2")
    if n > len(RANDOM_INDEX):
        raise ValidationError(f"no random index for order {n} (max {len(RANDOM_INDEX)})")
    if lambda_max < n - 1e-9:
        raise NumericError(f"lambda_max {lambda_max} below matrix order {n}")
    if n == 2:
        return 0.0, 0.0, True
    ci = (lambda_max - n) / (n - 1)
    cr = ci / RANDOM_INDEX[n - 1]
    return ci, cr, cr < CR_THRESHOLD


def derive_weights(m: PairwiseMatrix, method: str = "eigenvector") -> WeightResult:
    """Derive the weight vector and consistency diagnostics for a matrix."""
    if method == "eigenvector":
        w = _principal_eigenvector(m.entries)
    elif method == "geometric_mean":
        g = np.exp(np.log(m.entries).mean(axis=1))
        w = g / g.sum()
    else:
        raise ValidationError(f"unknown weighting method {method!r}")
    lam = float(np.mean(m.entries @ w / w))
    ci, cr, ok = consistency_ratio(lam, m.n)
    return WeightResult(tuple(float(x) for x in w), lam, ci, cr, ok)


def _principal_eigenvector(a: np.ndarray) -> np.ndarray:
    w = np.full(a.shape[0], 1.0 / a.shape[0])
    for _ in range(_POWER_MAX_ITER):
        nxt = a @ w
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - w)) < _POWER_TOL:
            return nxt
        w = nxt
    raise ConvergenceError(
        f"power iteration did not converge in {_POWER_MAX_ITER} iterations",
        residual=float(np.max(np.abs(a @ w / w.sum() - w))),
    )
