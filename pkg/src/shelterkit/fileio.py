"""File parsing, run configuration and report serialization.

All formats are plain text (CSV, INI-style config, whitespace-separated
matrix and raster files) so runs diff cleanly. Every parse fault names
the file and, where it applies, the row and column. See FORMATS.md for
the exact layouts.
"""
from __future__ import annotations

import configparser
import csv
import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import ahp
from .coverage import (DEFAULT_CELL_SIZE, DEFAULT_MINUTES, DEFAULT_SPEED_KMH,
                       GridSpec, PopulationGrid)
from .errors import ParseError, ValidationError
from .model import (BENEFIT, COST, MANUAL_258, NATURAL_BREAKS_10, Criterion,
                    CriterionHierarchy, DistrictRecord, IndexDefinition,
                    ShelterRecord, validate_hierarchy)
from .suitability import SuitabilityResult
from .topsis import DEFAULT_CAPACITY_WEIGHTS, DecisionMatrix, TopsisResult

SHELTER_META_COLUMNS = ("id", "name", "district", "x", "y")
DISTRICT_COLUMNS = (
    "name", "area_km2", "permanent_population_10k", "population_density",
    "shelter_count", "total_refuge_area_ha", "total_refuge_population_10k",
    "avg_refuge_area_m2",
)
CAPACITY_COLUMNS = (
    "total_refuge_area", "total_refuge_population", "effective_refuge_range",
    "effective_refuge_population", "avg_refuge_area", "avg_effective_refuge_area",
)

_FLOAT_FMT = ".10g"


def fmt_float(x: float) -> str:
    return format(float(x), _FLOAT_FMT)


def _number(token: str, path, row, col) -> float:
    """Float parse allowing simple fractions like 1/3."""
    token = token.strip()
    try:
        if "/" in token:
            num, den = token.split("/", 1)
            return float(num) / float(den)
        return float(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number: {token!r}", path, row, col) from None


def parse_matrix(path) -> ahp.PairwiseMatrix:
    """Pairwise judgment matrix from whitespace-separated rows.

    Blank lines and '#' comments are ignored; entries may be fractions.
    """
    path = Path(path)
    rows = []
    try:
        lines = path.read_text().splitlines()
    except OSError as e:
        raise ParseError(str(e), path) from e
    for lineno, line in enumerate(lines, start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        rows.append([_number(tok, path, lineno, c + 1)
                     for c, tok in enumerate(body.split())])
    if not rows:
        raise ParseError("empty matrix file", path)
    width = len(rows[0])
    for r, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"ragged row ({len(row)} values, expected {width})",
                             path, r + 1)
    try:
        return ahp.PairwiseMatrix(rows)
    except ValidationError as e:
        raise ValidationError(f"{path}: {e}") from e


def parse_shelters(path, hierarchy: CriterionHierarchy) -> list[ShelterRecord]:
    """Shelter records from a CSV with id,name,district,x,y,<index columns>."""
    path = Path(path)
    index_ids = hierarchy.index_ids()
    rules = {ix.id: ix.scoring_rule for ix in hierarchy.indexes()}
    expected = SHELTER_META_COLUMNS + index_ids
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", path) from None
        header = tuple(h.strip() for h in header)
        if header != expected:
            missing = set(expected) - set(header)
            if missing:
                raise ParseError(f"missing column(s) {sorted(missing)}", path, 1)
            raise ParseError(
                f"unexpected column order {list(header)}", path, 1
            )
        records = []
        seen = set()
        for rowno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(expected):
                raise ParseError(
                    f"row has {len(row)} fields, expected {len(expected)}",
                    path, rowno)
            sid = row[0].strip()
            if sid in seen:
                raise ParseError(f"duplicate shelter id {sid!r}", path, rowno, "id")
            seen.add(sid)
            x = _number(row[3], path, rowno, "x")
            y = _number(row[4], path, rowno, "y")
            raw = {}
            for k, iid in enumerate(index_ids):
                cell = row[5 + k].strip()
                if rules[iid] == MANUAL_258:
                    raw[iid] = cell
                else:
                    raw[iid] = _number(cell, path, rowno, iid)
            records.append(ShelterRecord(sid, row[1].strip(), row[2].strip(),
                                         x, y, raw))
    return records


def parse_districts(path, aggregate_label: str | None = None
                    ) -> list[DistrictRecord]:
    """District statistics from CSV; populations are in 10^4 persons.

    Rows named ``aggregate_label`` (an area-wide total) are dropped.
    Density inconsistencies beyond 1% are reported as warnings.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(h.strip() for h in next(reader))
        except StopIteration:
            raise ParseError("empty file", path) from None
        if header != DISTRICT_COLUMNS:
            raise ParseError(
                f"expected columns {list(DISTRICT_COLUMNS)}, got {list(header)}",
                path, 1)
        records = []
        for rowno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            name = row[0].strip()
            if aggregate_label is not None and name == aggregate_label:
                continue
            vals = [_number(row[i], path, rowno, DISTRICT_COLUMNS[i])
                    for i in range(1, 8)]
            rec = DistrictRecord(
                name=name,
                area_km2=vals[0],
                permanent_population=vals[1] * 1e4,
                population_density=vals[2],
                shelter_count=int(vals[3]),
                total_refuge_area_ha=vals[4],
                total_refuge_population=vals[5] * 1e4,
            )
            violations = rec.validate()
            if violations:
                raise ValidationError(f"{path} row {rowno}", violations)
            gap = rec.density_consistency()
            if gap is not None and gap > 0.01:
                warnings.warn(
                    f"{name}: stated density differs from derived by "
                    f"{gap:.1%}", stacklevel=2)
            records.append(rec)
    return records


def parse_grid(path) -> PopulationGrid:
    """Population density raster in the plain-text header+rows format.

    Header keys: ncols, nrows, xllcorner, yllcorner, cellsize,
    nodata_value; then nrows whitespace-separated data rows, north first.
    """
    path = Path(path)
    try:
        lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    except OSError as e:
        raise ParseError(str(e), path) from e
    header = {}
    keys = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")
    for lineno, line in enumerate(lines[:6], start=1):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"bad header line {line!r}", path, lineno)
        header[parts[0].lower()] = _number(parts[1], path, lineno, 2)
    missing = [k for k in keys if k not in header]
    if missing:
        raise ParseError(f"missing header key(s) {missing}", path)
    ncols, nrows = int(header["ncols"]), int(header["nrows"])
    nodata = header["nodata_value"]
    body = lines[6:]
    if len(body) != nrows:
        raise ParseError(f"{len(body)} data rows, header says {nrows}", path)
    data = np.empty((nrows, ncols), dtype=float)
    nodata_count = 0
    for r, line in enumerate(body):
        toks = line.split()
        if len(toks) != ncols:
            raise ParseError(f"row has {len(toks)} values, expected {ncols}",
                             path, r + 7)
        for c, tok in enumerate(toks):
            v = _number(tok, path, r + 7, c + 1)
            if v == nodata:
                data[r, c] = np.nan
                nodata_count += 1
            else:
                data[r, c] = v
    if nodata_count:
        warnings.warn(f"{nodata_count} NODATA cell(s) in {path.name}",
                      stacklevel=2)
    spec = GridSpec(header["xllcorner"], header["yllcorner"],
                    header["cellsize"], nrows, ncols)
    return PopulationGrid(spec, data)


def write_grid(grid: PopulationGrid, path, nodata: float = -9999.0) -> None:
    spec = grid.spec
    with open(path, "w") as fh:
        fh.write(f"ncols {spec.n_cols}\n")
        fh.write(f"nrows {spec.n_rows}\n")
        fh.write(f"xllcorner {fmt_float(spec.x0)}\n")
        fh.write(f"yllcorner {fmt_float(spec.y0)}\n")
        fh.write(f"cellsize {fmt_float(spec.cell_size)}\n")
        fh.write(f"nodata_value {fmt_float(nodata)}\n")
        for row in grid.density:
            fh.write(" ".join(fmt_float(nodata if np.isnan(v) else v)
                              for v in row) + "\n")


def parse_points(path) -> list[tuple]:
    """Shelter point coordinates from a CSV.

    Columns are id,x,y or id,district,x,y; rows come back as tuples of
    the same shape.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(h.strip() for h in next(reader))
        except StopIteration:
            raise ParseError("empty file", path) from None
        if header not in (("id", "x", "y"), ("id", "district", "x", "y")):
            raise ParseError(
                f"expected columns id,[district,]x,y, got {list(header)}",
                path, 1)
        width = len(header)
        pts = []
        for rowno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != width:
                raise ParseError(f"row has {len(row)} fields, expected {width}",
                                 path, rowno)
            coords = (_number(row[-2], path, rowno, "x"),
                      _number(row[-1], path, rowno, "y"))
            if width == 4:
                pts.append((row[0].strip(), row[1].strip(), *coords))
            else:
                pts.append((row[0].strip(), *coords))
    return pts


def parse_capacity_matrix(path, weights=None, directions=None) -> DecisionMatrix:
    """Decision matrix from a CSV with district + six indicator columns."""
    path = Path(path)
    expected = ("district",) + CAPACITY_COLUMNS
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(h.strip() for h in next(reader))
        except StopIteration:
            raise ParseError("empty file", path) from None
        if header != expected:
            raise ParseError(
                f"expected columns {list(expected)}, got {list(header)}", path, 1)
        names, rows = [], []
        for rowno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 7:
                raise ParseError(f"row has {len(row)} fields, expected 7",
                                 path, rowno)
            names.append(row[0].strip())
            rows.append([_number(row[i], path, rowno, expected[i])
                         for i in range(1, 7)])
    w = DEFAULT_CAPACITY_WEIGHTS if weights is None else weights
    b = [True] * 6 if directions is None else [d == BENEFIT for d in directions]
    return DecisionMatrix(tuple(names), CAPACITY_COLUMNS, np.array(rows),
                          np.asarray(w, dtype=float), np.asarray(b, dtype=bool))


# ---------------------------------------------------------------------------
# run configuration

@dataclass(frozen=True)
class RunConfig:
    hierarchy: CriterionHierarchy
    topsis_weights: tuple[float, ...]
    topsis_directions: tuple[str, ...]
    squared_weights: bool
    speed_kmh: float
    minutes: float
    cell_size: float
    output_format: str


def load_config(path) -> RunConfig:
    """Load the INI-style run configuration; see FORMATS.md.

    Each hierarchy node carries exactly one of explicit weights or a
    judgment-matrix file reference (resolved relative to the config file);
    matrix-derived weights must pass the consistency test.
    """
    path = Path(path)
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ParseError("config file not found or unreadable", path)
    if "hierarchy" not in cp:
        raise ParseError("missing [hierarchy] section", path)
    hierarchy = _hierarchy_from_config(cp, path)
    violations = validate_hierarchy(hierarchy)
    if violations:
        raise ValidationError(f"{path}: invalid hierarchy", violations)

    t = cp["topsis"] if "topsis" in cp else {}
    t_weights = tuple(float(x) for x in t.get(
        "weights", " ".join(map(str, DEFAULT_CAPACITY_WEIGHTS))).split())
    t_dirs = tuple(t.get("directions", " ".join([BENEFIT] * len(t_weights))).split())
    for d in t_dirs:
        if d not in (BENEFIT, COST):
            raise ParseError(f"unknown topsis direction {d!r}", path)
    c = cp["coverage"] if "coverage" in cp else {}
    o = cp["output"] if "output" in cp else {}
    out_fmt = o.get("format", "delimited")
    if out_fmt not in ("delimited", "structured"):
        raise ParseError(f"unknown output format {out_fmt!r}", path)
    return RunConfig(
        hierarchy=hierarchy,
        topsis_weights=t_weights,
        topsis_directions=t_dirs,
        squared_weights=str(t.get("squared_weights", "false")).lower() == "true",
        speed_kmh=float(c.get("speed_kmh", DEFAULT_SPEED_KMH)),
        minutes=float(c.get("minutes", DEFAULT_MINUTES)),
        cell_size=float(c.get("cell_size", DEFAULT_CELL_SIZE)),
        output_format=out_fmt,
    )


def _node_weights(section, n: int, base: Path, path, where: str):
    """Resolve one of 'weights' or 'matrix' for a hierarchy node."""
    has_w = "weights" in section
    has_m = "matrix" in section
    if has_w == has_m:
        raise ParseError(
            f"{where}: exactly one of 'weights' or 'matrix' required", path)
    if has_w:
        ws = [float(x) for x in section["weights"].split()]
        if len(ws) != n:
            raise ParseError(f"{where}: {len(ws)} weights for {n} nodes", path)
        return ws
    mpath = base / section["matrix"]
    if not mpath.exists():
        raise ParseError(f"{where}: matrix file {mpath} does not exist", path)
    matrix = parse_matrix(mpath)
    if matrix.n != n:
        raise ParseError(f"{where}: matrix order {matrix.n} for {n} nodes", path)
    result = ahp.derive_weights(matrix)
    if not result.consistent:
        raise ValidationError(
            f"{where}: judgment matrix {mpath.name} fails the consistency "
            f"test (CR = {result.cr:.4f})")
    return list(result.weights)


def _hierarchy_from_config(cp, path) -> CriterionHierarchy:
    base = path.parent
    hsec = cp["hierarchy"]
    goal = hsec.get("goal", "suitability")
    crit_ids = hsec.get("criteria", "").split()
    if not crit_ids:
        raise ParseError("[hierarchy] must list criteria", path)

    # global style: every index section carries a global 'weight' and no
    # node carries 'weights'/'matrix'
    index_sections = {}
    for cid in crit_ids:
        sec_name = f"criterion:{cid}"
        if sec_name not in cp:
            raise ParseError(f"missing section [{sec_name}]", path)
        for iid in cp[sec_name].get("indexes", "").split():
            isec_name = f"index:{iid}"
            if isec_name not in cp:
                raise ParseError(f"missing section [{isec_name}]", path)
            index_sections[iid] = cp[isec_name]
    global_style = all("weight" in s for s in index_sections.values())
    has_node_weights = ("weights" in hsec or "matrix" in hsec or any(
        "weights" in cp[f"criterion:{cid}"] or "matrix" in cp[f"criterion:{cid}"]
        for cid in crit_ids))
    if global_style and has_node_weights:
        raise ParseError(
            "config mixes per-index global weights with node-level "
            "weights/matrix; use exactly one style", path)
    if not global_style and any("weight" in s for s in index_sections.values()):
        raise ParseError(
            "some index sections have 'weight' and some do not; use exactly "
            "one weighting style", path)

    def build_index(iid, local_weight):
        s = index_sections[iid]
        polarity = s.get("polarity", BENEFIT)
        rule = s.get("rule", NATURAL_BREAKS_10)
        return IndexDefinition(iid, s.get("label", iid), local_weight,
                               polarity, rule, s.get("units", ""))

    criteria = []
    if global_style:
        for cid in crit_ids:
            csec = cp[f"criterion:{cid}"]
            iids = csec.get("indexes", "").split()
            gw = [float(index_sections[i]["weight"]) for i in iids]
            total = sum(gw)
            if total <= 0:
                raise ParseError(f"criterion {cid}: nonpositive weight sum", path)
            children = tuple(build_index(i, w / total)
                             for i, w in zip(iids, gw))
            criteria.append(Criterion(cid, csec.get("label", cid), total, children))
    else:
        crit_ws = _node_weights(hsec, len(crit_ids), base, path, "[hierarchy]")
        for cid, cw in zip(crit_ids, crit_ws):
            csec = cp[f"criterion:{cid}"]
            iids = csec.get("indexes", "").split()
            if not iids:
                raise ParseError(f"criterion {cid}: no indexes listed", path)
            local = _node_weights(csec, len(iids), base, path,
                                  f"[criterion:{cid}]")
            children = tuple(build_index(i, w) for i, w in zip(iids, local))
            criteria.append(Criterion(cid, csec.get("label", cid), cw, children))
    return CriterionHierarchy(goal, tuple(criteria))


# ---------------------------------------------------------------------------
# report writing

def suitability_rows(results: Sequence[SuitabilityResult],
                     hierarchy: CriterionHierarchy) -> tuple[list[str], list[list]]:
    index_ids = list(hierarchy.index_ids())
    crit_ids = [c.id for c in hierarchy.criteria]
    header = ["id", "name", "district", *index_ids, *crit_ids, "P", "grade"]
    rows = []
    for r in results:  # input order
        rows.append([r.shelter_id, r.name, r.district,
                     *[r.index_scores[i] for i in index_ids],
                     *[r.criterion_scores[c] for c in crit_ids],
                     r.composite, r.grade])
    return header, rows


def topsis_rows(result: TopsisResult) -> tuple[list[str], list[list]]:
    header = ["district", "d_plus", "d_minus", "closeness", "rank"]
    rows = [[name, dp, dm, s, rank]
            for name, dp, dm, s, rank in result.by_rank()]  # rank order
    return header, rows


def write_report(header: list[str], rows: list[list], path,
                 fmt: str = "delimited") -> None:
    """Serialize a report deterministically as CSV or JSON."""
    if fmt == "delimited":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt_float(v) if isinstance(v, float) else v
                            for v in row])
    elif fmt == "structured":
        payload = {"columns": header,
                   "rows": [{h: v for h, v in zip(header, row)} for row in rows]}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=False)
            fh.write("\n")
    else:
        raise ValidationError(f"unknown report format {fmt!r}")


def read_report(path, fmt: str = "delimited") -> tuple[list[str], list[list]]:
    """Inverse of :func:`write_report` (numbers come back as floats)."""
    path = Path(path)
    if fmt == "structured":
        payload = json.loads(path.read_text())
        header = payload["columns"]
        return header, [[row[h] for h in header] for row in payload["rows"]]
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty report", path) from None
        rows = []
        for row in reader:
            out = []
            for cell in row:
                try:
                    out.append(float(cell))
                except ValueError:
                    out.append(cell)
            rows.append(out)
    return header, rows
