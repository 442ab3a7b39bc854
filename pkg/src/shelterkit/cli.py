"""Command-line front door.

The CLI is a thin client over the service handlers: each subcommand
parses its input files, builds the same request models the HTTP endpoints
accept, runs the shared handler, and serializes the response. Exit codes
distinguish fault families: 2 usage, 3 parse, 4 validation, 5 numeric.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import coverage as cov
from . import fileio
from .chart import svg_bar_chart
from .errors import NumericError, ParseError, ShelterKitError, ValidationError
from .model import default_hierarchy
from .service import handlers, schemas
from .topsis import DEFAULT_CAPACITY_WEIGHTS

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_NUMERIC = 5


class _out:
    """Open the -o target, or hand out stdout without closing it."""

    def __init__(self, args):
        self.path = getattr(args, "output", None)

    def __enter__(self):
        self.fh = open(self.path, "w", newline="") if self.path else sys.stdout
        return self.fh

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()
        return False


def _load_config(args) -> fileio.RunConfig:
    if getattr(args, "config", None):
        return fileio.load_config(args.config)
    h = default_hierarchy()
    return fileio.RunConfig(
        hierarchy=h,
        topsis_weights=DEFAULT_CAPACITY_WEIGHTS,
        topsis_directions=("benefit",) * 6,
        squared_weights=False,
        speed_kmh=cov.DEFAULT_SPEED_KMH,
        minutes=cov.DEFAULT_MINUTES,
        cell_size=cov.DEFAULT_CELL_SIZE,
        output_format="delimited",
    )


def cmd_weights(args) -> int:
    status = EXIT_OK
    reports = []
    for mpath in args.matrices:
        try:
            matrix = fileio.parse_matrix(mpath)
            resp = handlers.compute_weights(schemas.WeightsRequest(
                matrix=[list(r) for r in matrix.entries], method=args.method))
        except ShelterKitError as e:
            print(f"{mpath}: FAULT {e}", file=sys.stderr)
            status = max(status, _code_for(e))
            continue
        reports.append((mpath, matrix.n, resp))
        if args.strict and not resp.consistent:
            status = max(status, EXIT_VALIDATION)
    with _out(args) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["file", "n", "weights", "lambda_max", "CI", "CR", "pass"])
        for mpath, n, r in reports:
            w.writerow([
                Path(mpath).name, n,
                " ".join(fileio.fmt_float(x) for x in r.weights),
                fileio.fmt_float(r.lambda_max), fileio.fmt_float(r.ci),
                fileio.fmt_float(r.cr), "yes" if r.consistent else "no",
            ])
    return status


def cmd_suitability(args) -> int:
    config = _load_config(args)
    shelters = fileio.parse_shelters(args.shelters, config.hierarchy)
    req = schemas.SuitabilityRequest(
        shelters=[schemas.ShelterModel(
            id=s.id, name=s.name, district=s.district, x=s.x, y=s.y,
            values=dict(s.raw_values)) for s in shelters],
        hierarchy=schemas.HierarchyModel.from_core(config.hierarchy))
    resp = handlers.evaluate_suitability(req)

    results = [_row_to_result(r) for r in resp.rows]
    header, rows = fileio.suitability_rows(results, config.hierarchy)
    fmt = args.format or config.output_format
    if args.output:
        fileio.write_report(header, rows, args.output, fmt)
    else:
        fileio.write_report(header, rows, "/dev/stdout", fmt)
    hist = resp.grade_histogram
    print("grades: " + " ".join(f"{g}={hist[g]}" for g in "ABCDE"),
          file=sys.stderr)
    if args.chart:
        svg_bar_chart([r.name for r in resp.rows],
                      [r.composite for r in resp.rows],
                      args.chart, title="Composite suitability index",
                      y_max=10.0)
    return EXIT_OK


def _row_to_result(r):
    from .suitability import SuitabilityResult
    return SuitabilityResult(r.id, r.name, r.district, r.index_scores,
                             r.criterion_scores, r.composite, r.grade)


def cmd_capacity(args) -> int:
    config = _load_config(args)
    if args.matrix:
        dm = fileio.parse_capacity_matrix(
            args.matrix, weights=config.topsis_weights,
            directions=config.topsis_directions)
        names = list(dm.names)
        values = dm.values.tolist()
    elif args.districts and args.points and args.grid:
        names, values = _capacity_from_coverage(args, config)
    else:
        print("capacity: provide --matrix, or --districts with --points "
              "and --grid", file=sys.stderr)
        return EXIT_USAGE
    resp = handlers.rank_capacity(schemas.CapacityRequest(
        districts=names, matrix=values, weights=list(config.topsis_weights),
        directions=list(config.topsis_directions),
        squared_weights=config.squared_weights))
    header = ["district", "d_plus", "d_minus", "closeness", "rank"]
    rows = [[r.district, r.d_plus, r.d_minus, r.closeness, r.rank]
            for r in resp.rows]
    fmt = args.format or config.output_format
    fileio.write_report(header, rows, args.output or "/dev/stdout", fmt)
    if args.chart:
        svg_bar_chart([r.district for r in resp.rows],
                      [r.closeness for r in resp.rows],
                      args.chart, title="Capacity closeness", y_max=1.0)
    return EXIT_OK


def _radius(args, config) -> float:
    if getattr(args, "radius", None):
        return args.radius
    if getattr(args, "speed", None) or getattr(args, "minutes", None):
        speed = args.speed or config.speed_kmh
        minutes = args.minutes or config.minutes
        return round(cov.service_radius(speed, minutes))
    return round(cov.service_radius(config.speed_kmh, config.minutes))


def _capacity_from_coverage(args, config):
    districts = fileio.parse_districts(args.districts,
                                       aggregate_label=args.aggregate_label)
    points = fileio.parse_points(args.points)
    grid = fileio.parse_grid(args.grid)
    radius = _radius(args, config)
    names, values = [], []
    for d in districts:
        pts = [(x, y) for _, dist, x, y in _with_district(points)
               if dist == d.name]
        mask = cov.rasterize_buffers(pts, radius, grid.spec)
        ind = cov.capacity_indicators(
            d, cov.coverage_area(mask), cov.effective_population(mask, grid))
        names.append(d.name)
        values.append(ind.as_row())
    return names, values


def _with_district(points):
    # points parsed as (id, x, y) or (id, district, x, y)
    out = []
    for p in points:
        if len(p) == 4:
            out.append(p)
        else:
            out.append((p[0], "", p[1], p[2]))
    return out


def cmd_coverage(args) -> int:
    config = _load_config(args)
    points = fileio.parse_points(args.points)
    grid = fileio.parse_grid(args.grid)
    radius = _radius(args, config)
    rows = []
    tagged = _with_district(points)
    districts = sorted({d for _, d, _, _ in tagged if d})
    groups = ([(d, [(x, y) for _, dd, x, y in tagged if dd == d])
               for d in districts]
              if districts else
              [("all", [(x, y) for _, _, x, y in tagged])])
    for label, pts in groups:
        mask = cov.rasterize_buffers(pts, radius, grid.spec)
        rows.append([label, len(pts),
                     cov.coverage_area(mask),
                     cov.effective_population(mask, grid),
                     cov.blind_share(mask)])
    header = ["district", "n_points", "coverage_ha", "effective_population",
              "blind_share"]
    fmt = args.format or config.output_format
    fileio.write_report(header, rows, args.output or "/dev/stdout", fmt)
    return EXIT_OK


def cmd_report(args) -> int:
    header, rows = fileio.read_report(args.input, args.input_format)
    fileio.write_report(header, rows, args.output or "/dev/stdout", args.format)
    if args.chart:
        if args.label_column not in header or args.value_column not in header:
            raise ValidationError(
                f"chart columns {args.label_column!r}/{args.value_column!r} "
                f"not in report header {header}")
        li, vi = header.index(args.label_column), header.index(args.value_column)
        svg_bar_chart([r[li] for r in rows],
                      [float(r[vi]) for r in rows], args.chart)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="shelterkit",
        description="Evaluate emergency-shelter suitability and district "
                    "accommodation capacity.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, config=True):
        if config:
            sp.add_argument("--config", help="run configuration file (INI)")
        sp.add_argument("-o", "--output", help="output file (default stdout)")
        sp.add_argument("--format", choices=["delimited", "structured"],
                        help="report format (default from config)")

    sp = sub.add_parser("weights", help="derive weights from judgment matrices")
    sp.add_argument("matrices", nargs="+", help="judgment matrix files")
    sp.add_argument("--method", choices=["eigenvector", "geometric_mean"],
                    default="eigenvector")
    sp.add_argument("--strict", action="store_true",
                    help="nonzero exit if any matrix fails the consistency test")
    add_common(sp, config=False)
    sp.set_defaults(func=cmd_weights)

    sp = sub.add_parser("suitability", help="score shelters and assign grades")
    sp.add_argument("--shelters", required=True, help="shelter CSV file")
    sp.add_argument("--chart", help="write an SVG bar chart of P values")
    add_common(sp)
    sp.set_defaults(func=cmd_suitability)

    sp = sub.add_parser("capacity", help="rank districts by capacity")
    sp.add_argument("--matrix", help="CSV with the six indicator columns")
    sp.add_argument("--districts", help="district statistics CSV")
    sp.add_argument("--points", help="shelter points CSV (id[,district],x,y)")
    sp.add_argument("--grid", help="population density raster")
    sp.add_argument("--aggregate-label",
                    help="district row to exclude as an area-wide total")
    sp.add_argument("--radius", type=float, help="service radius override (m)")
    sp.add_argument("--speed", type=float, help="walking speed (km/h)")
    sp.add_argument("--minutes", type=float, help="walking time budget (min)")
    sp.add_argument("--chart", help="write an SVG bar chart of S values")
    add_common(sp)
    sp.set_defaults(func=cmd_capacity)

    sp = sub.add_parser("coverage", help="service-coverage statistics")
    sp.add_argument("--points", required=True,
                    help="shelter points CSV (id[,district],x,y)")
    sp.add_argument("--grid", required=True, help="population density raster")
    sp.add_argument("--radius", type=float, help="service radius override (m)")
    sp.add_argument("--speed", type=float, help="walking speed (km/h)")
    sp.add_argument("--minutes", type=float, help="walking time budget (min)")
    add_common(sp)
    sp.set_defaults(func=cmd_coverage)

    sp = sub.add_parser("report", help="re-serialize or chart an existing report")
    sp.add_argument("--input", required=True)
    sp.add_argument("--input-format", choices=["delimited", "structured"],
                    default="delimited")
    sp.add_argument("--chart", help="write an SVG bar chart")
    sp.add_argument("--label-column", default="name")
    sp.add_argument("--value-column", default="P")
    add_common(sp, config=False)
    sp.set_defaults(func=cmd_report)
    sp.set_defaults(format="delimited")

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.set_defaults(func=cmd_serve)
    return p


def _code_for(e: Exception) -> int:
    if isinstance(e, ParseError):
        return EXIT_PARSE
    if isinstance(e, NumericError):
        return EXIT_NUMERIC
    if isinstance(e, ValidationError):
        return EXIT_VALIDATION
    return EXIT_VALIDATION


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ShelterKitError as e:
        print(f"error: {e}", file=sys.stderr)
        return _code_for(e)


if __name__ == "__main__":
    sys.exit(main())
