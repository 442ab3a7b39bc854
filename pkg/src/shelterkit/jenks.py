"""Natural-breaks classification by exact dynamic programming.

Minimizes the total within-class sum of squared deviations over all
partitions of the sorted values into k contiguous classes. Class
boundaries are only placed between distinct values, so a run of tied
values always stays in one class (the boundary falls after the last
occurrence). Among equal-cost partitions the lexicographically smallest
break vector is chosen, which makes the result deterministic.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass

from .errors import NumericError

_COST_RTOL = 1e-9


@dataclass(frozen=True)
class BreakSet:
    """Interior break values; break i is the upper bound (inclusive) of
    class i. k classes have k - 1 breaks."""

    breaks: tuple[float, ...]

    @property
    def n_classes(self) -> int:
        return len(self.breaks) + 1

    def classify(self, value: float) -> int:
        """0-based class index of a value."""
        return bisect.bisect_left(self.breaks, value)

    def class_indices(self, values) -> list[int]:
        return [self.classify(v) for v in values]


def jenks_breaks(values, k: int) -> BreakSet:
    """Optimal k-class natural breaks of a value list.

    Requires k <= number of distinct values; use :func:`effective_classes`
    to clamp beforehand when the data may be degenerate.
    """
    vals = sorted(float(v) for v in values)
    if not vals:
        raise NumericError("cannot classify an empty value list")
    if k < 1:
        raise NumericError(f"class count must be >= 1, got {k}")
    # collapse to runs of distinct values
    distinct: list[float] = []
    counts: list[int] = []
    for v in vals:
        if distinct and v == distinct[-1]:
            counts[-1] += 1
        else:
            distinct.append(v)
            counts.append(1)
    m = len(distinct)
    if k > m:
        raise NumericError(
            f"cannot split {m} distinct value(s) into {k} classes"
        )

    # prefix sums over runs for O(1) class cost
    ps = [0.0] * (m + 1)  # sum of values
    pq = [0.0] * (m + 1)  # sum of squares
    pn = [0] * (m + 1)    # count
    for t in range(m):
        ps[t + 1] = ps[t] + distinct[t] * counts[t]
        pq[t + 1] = pq[t] + distinct[t] ** 2 * counts[t]
        pn[t + 1] = pn[t] + counts[t]

    def cost(i, j):  # runs i..j inclusive, 0-based
        s = ps[j + 1] - ps[i]
        q = pq[j + 1] - pq[i]
        n = pn[j + 1] - pn[i]
        return max(q - s * s / n, 0.0)

    # suffix DP: best[i][t] = min cost of splitting runs i..m-1 into t classes
    inf = float("inf")
    best = [[inf] * (k + 1) for _ in range(m + 1)]
    best[m][0] = 0.0
    for i in range(m - 1, -1, -1):
        max_t = min(k, m - i)
        for t in range(1, max_t + 1):
            lo = inf
            # class covers runs i..j; leave at least t-1 runs for the rest
            for j in range(i, m - (t - 1)):
                c = best[j + 1][t - 1]
                if c == inf:
                    continue
                c += cost(i, j)
                if c < lo:
                    lo = c
            best[i][t] = lo

    # front-to-back reconstruction; preferring the earliest feasible cut
    # yields the lexicographically smallest break-value vector
    total = best[0][k]
    tol = _COST_RTOL * (1.0 + abs(total))
    breaks = []
    i, t = 0, k
    while t > 1:
        for j in range(i, m - (t - 1)):
            if cost(i, j) + best[j + 1][t - 1] <= best[i][t] + tol:
                breaks.append(distinct[j])
                i, t = j + 1, t - 1
                break
        else:  # numeric safety net; should not happen
            raise NumericError("break reconstruction failed")
    return BreakSet(tuple(breaks))


def effective_classes(values, k: int) -> int:
    """Largest feasible class count: min(k, number of distinct values)."""
    return min(k, len(set(float(v) for v in values)))
