"""Service-coverage rasters: walking buffers, covered area, covered population.

Coverage is computed on a raster rather than by exact polygon union: a
cell counts as covered when its center lies within the service radius of
any shelter (planar Euclidean distance on projected meter coordinates).
The same grid geometry carries the population-density overlay, so the
effective refuge population is a masked sum.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import CapacityIndicators, DistrictRecord

DEFAULT_SPEED_KMH = 4.0
DEFAULT_MINUTES = 10.0
DEFAULT_CELL_SIZE = 10.0
DEFAULT_RADIUS_M = 667.0  # round(service_radius(4, 10))

EARTH_RADIUS_M = 6_371_000.0


def service_radius(speed_kmh: float, minutes: float) -> float:
    """Straight-line walking radius in meters (exact, not rounded)."""
    if speed_kmh <= 0 or minutes <= 0:
        raise ValidationError(
            f"speed and time must be positive, got {speed_kmh} km/h, {minutes} min"
        )
    return speed_kmh * 1000.0 / 60.0 * minutes


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a north-up raster; origin is the lower-left corner."""

    x0: float
    y0: float
    cell_size: float
    n_rows: int
    n_cols: int

    def __post_init__(self):
        if self.cell_size <= 0:
            raise ValidationError(f"cell size must be positive, got {self.cell_size}")
        if self.n_rows <= 0 or self.n_cols <= 0:
            raise ValidationError(
                f"grid dimensions must be positive, got {self.n_rows}x{self.n_cols}"
            )

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """(x, y) center coordinate vectors; row 0 is the northernmost row."""
        xs = self.x0 + (np.arange(self.n_cols) + 0.5) * self.cell_size
        ys = self.y0 + (self.n_rows - 0.5 - np.arange(self.n_rows)) * self.cell_size
        return xs, ys

    def aligned_with(self, other: "GridSpec") -> bool:
        return (self.n_rows == other.n_rows and self.n_cols == other.n_cols
                and self.cell_size == other.cell_size
                and self.x0 == other.x0 and self.y0 == other.y0)


@dataclass(frozen=True)
class PopulationGrid:
    """Population density raster (persons/ha); NaN cells are NODATA."""

    spec: GridSpec
    density: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.density, dtype=float)
        if d.shape != (self.spec.n_rows, self.spec.n_cols):
            raise ValidationError(
                f"density shape {d.shape} does not match grid "
                f"{self.spec.n_rows}x{self.spec.n_cols}"
            )
        if np.any(np.isinf(d)) or np.any(d[~np.isnan(d)] < 0):
            raise ValidationError("density values must be >= 0 or NODATA")
        object.__setattr__(self, "density", d)

    @property
    def nodata_count(self) -> int:
        return int(np.isnan(self.density).sum())


@dataclass(frozen=True)
class CoverageMask:
    """Boolean covered/uncovered raster on a grid geometry."""

    spec: GridSpec
    covered: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.covered, dtype=bool)
        if c.shape != (self.spec.n_rows, self.spec.n_cols):
            raise ValidationError(
                f"mask shape {c.shape} does not match grid "
                f"{self.spec.n_rows}x{self.spec.n_cols}"
            )
        object.__setattr__(self, "covered", c)


def rasterize_buffers(points, radius: float, spec: GridSpec) -> CoverageMask:
    """Union of circular service buffers as a cell-center-in-circle mask.

    Points whose buffer extends past the grid edge are clipped with a
    warning; an empty point list yields an all-false mask.
    """
    if radius <= 0:
        raise ValidationError(f"radius must be positive, got {radius}")
    covered = np.zeros((spec.n_rows, spec.n_cols), dtype=bool)
    if len(points) == 0:
        return CoverageMask(spec, covered)
    xs, ys = spec.cell_centers()
    xmax = spec.x0 + spec.n_cols * spec.cell_size
    ymax = spec.y0 + spec.n_rows * spec.cell_size
    clipped = 0
    r2 = radius * radius
    for px, py in points:
        if (px - radius < spec.x0 or px + radius > xmax
                or py - radius < spec.y0 or py + radius > ymax):
            clipped += 1
        # restrict to the bounding window of the circle
        c0 = max(0, int((px - radius - spec.x0) / spec.cell_size) - 1)
        c1 = min(spec.n_cols, int((px + radius - spec.x0) / spec.cell_size) + 2)
        ytop = spec.y0 + spec.n_rows * spec.cell_size
        r0 = max(0, int((ytop - (py + radius)) / spec.cell_size) - 1)
        r1 = min(spec.n_rows, int((ytop - (py - radius)) / spec.cell_size) + 2)
        if c0 >= c1 or r0 >= r1:
            continue
        dx2 = (xs[c0:c1] - px) ** 2
        dy2 = (ys[r0:r1] - py) ** 2
        covered[r0:r1, c0:c1] |= dy2[:, None] + dx2[None, :] <= r2
    if clipped:
        warnings.warn(f"{clipped} buffer(s) clipped at the grid boundary",
                      stacklevel=2)
    return CoverageMask(spec, covered)


def coverage_area(mask: CoverageMask) -> float:
    """Covered area in hectares."""
    return float(mask.covered.sum()) * mask.spec.cell_size ** 2 / 10_000.0


def blind_share(mask: CoverageMask) -> float:
    """Fraction of grid cells outside every service buffer."""
    total = mask.covered.size
    return 1.0 - float(mask.covered.sum()) / total


def effective_population(mask: CoverageMask, grid: PopulationGrid) -> float:
    """Population inside the covered area (density x covered cell area)."""
    if not mask.spec.aligned_with(grid.spec):
        raise ValidationError("coverage mask and population grid are not aligned")
    d = grid.density[mask.covered]
    n_nodata = int(np.isnan(d).sum())
    if n_nodata:
        warnings.warn(f"{n_nodata} NODATA cell(s) in covered area treated as 0",
                      stacklevel=2)
    cell_ha = mask.spec.cell_size ** 2 / 10_000.0
    return float(np.nansum(d)) * cell_ha


def capacity_indicators(district: DistrictRecord, coverage_ha: float,
                        effective_pop: float) -> CapacityIndicators:
    """Assemble the six decision-matrix indicators for one district.

    Per-person averages divide the total refuge area (in m^2) by the
    permanent and by the effective population; a zero denominator flags
    the indicator as undefined (NaN) with a warning.
    """
    area_m2 = district.total_refuge_area_ha * 10_000.0

    def ratio(num, den, label):
        if den <= 0:
            warnings.warn(
                f"district {district.name}: {label} undefined (zero denominator)",
                stacklevel=3,
            )
            return math.nan
        return num / den

    return CapacityIndicators(
        total_refuge_area_ha=district.total_refuge_area_ha,
        total_refuge_population=district.total_refuge_population,
        effective_refuge_range_ha=coverage_ha,
        effective_refuge_population=effective_pop,
        avg_refuge_area_m2=ratio(area_m2, district.permanent_population,
                                 "average refuge area per person"),
        avg_effective_refuge_area_m2=ratio(area_m2, effective_pop,
                                           "average effective refuge area per person"),
    )


def lonlat_to_meters(lon, lat, lon0: float, lat0: float):
    """Equirectangular projection of small-extent lon/lat to local meters.

    Fixture helper only: distortion grows with the extent (roughly 1% at
    about a degree from the reference point at mid latitudes).
    """
    lon = np.asarray(lon, dtype=float)
    lat = np.asarray(lat, dtype=float)
    x = np.radians(lon - lon0) * EARTH_RADIUS_M * math.cos(math.radians(lat0))
    y = np.radians(lat - lat0) * EARTH_RADIUS_M
    return x, y
