import warnings

import pytest

from shelterkit.cli import (EXIT_NUMERIC, EXIT_OK, EXIT_PARSE, EXIT_USAGE,
                            EXIT_VALIDATION, build_parser, main)
from shelterkit.fileio import read_report


def run(argv):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return main(argv)


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as ei:
        main([])
    assert ei.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as ei:
        main(["suitability"])   # missing required --shelters
    assert ei.value.code == EXIT_USAGE


def test_weights_command(tmp_path, data_dir, capsys):
    out = tmp_path / "w.csv"
    code = run(["weights", str(data_dir / "matrices" / "criteria_example.mat"),
                "-o", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0].startswith("file,n,weights,lambda_max")
    assert lines[1].split(",")[1] == "4"
    assert lines[1].split(",")[-1] == "yes"


def test_weights_strict_mode(tmp_path):
    bad = tmp_path / "bad.mat"
    bad.write_text("1 9 1/9\n1/9 1 9\n9 1/9 1\n")
    assert run(["weights", str(bad), "-o", str(tmp_path / "o.csv")]) == EXIT_OK
    assert run(["weights", str(bad), "--strict",
                "-o", str(tmp_path / "o.csv")]) == EXIT_VALIDATION


def test_weights_parse_fault(tmp_path, capsys):
    p = tmp_path / "junk.mat"
    p.write_text("1 x\n1 1\n")
    code = run(["weights", str(p), "-o", str(tmp_path / "o.csv")])
    assert code == EXIT_PARSE


def test_suitability_command_deterministic(tmp_path, data_dir):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["suitability", "--shelters", str(data_dir / "shelters.csv"),
            "--config", str(data_dir / "config.ini")]
    assert run(argv + ["-o", str(a)]) == EXIT_OK
    assert run(argv + ["-o", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    header, rows = read_report(a)
    assert header[-2:] == ["P", "grade"]
    assert len(rows) == 28
    by_name = {r[1]: r for r in rows}
    assert by_name["Baiduting Garden"][-1] == "C"
    assert abs(by_name["Qingshan Park"][-2] - 7.151) < 5e-3


def test_suitability_structured_format_and_chart(tmp_path, data_dir):
    out = tmp_path / "r.json"
    chart = tmp_path / "p.svg"
    code = run(["suitability", "--shelters", str(data_dir / "shelters.csv"),
                "--config", str(data_dir / "config.ini"),
                "--format", "structured", "-o", str(out),
                "--chart", str(chart)])
    assert code == EXIT_OK
    header, rows = read_report(out, "structured")
    assert len(rows) == 28
    svg = chart.read_text()
    assert svg.startswith("<svg") and "Baiduting" in svg


def test_suitability_parse_fault_exit_3(tmp_path, data_dir):
    p = tmp_path / "bad.csv"
    p.write_text("id,name\n")
    assert run(["suitability", "--shelters", str(p)]) == EXIT_PARSE


def test_capacity_from_matrix(tmp_path, data_dir):
    out = tmp_path / "cap.csv"
    code = run(["capacity", "--matrix", str(data_dir / "capacity_matrix.csv"),
                "--config", str(data_dir / "config.ini"), "-o", str(out)])
    assert code == EXIT_OK
    header, rows = read_report(out)
    assert header == ["district", "d_plus", "d_minus", "closeness", "rank"]
    assert rows[0][0] == "Hongshan District"
    assert abs(rows[0][3] - 0.6063) < 5e-4
    assert rows[-1][0] == "Jianghan District"
    assert [r[4] for r in rows] == list(range(1, 8))


def test_capacity_requires_inputs(capsys):
    assert run(["capacity"]) == EXIT_USAGE


def test_capacity_from_coverage_inputs(tmp_path, data_dir):
    out = tmp_path / "cap.csv"
    districts = tmp_path / "districts.csv"
    districts.write_text(
        "name,area_km2,permanent_population_10k,population_density,"
        "shelter_count,total_refuge_area_ha,total_refuge_population_10k,"
        "avg_refuge_area_m2\n"
        "East District,10.0,5.0,50.0,3,12.0,1.0,2.4\n"
        "West District,12.0,6.0,50.0,3,15.0,1.2,2.5\n"
        "North District,14.0,7.0,50.0,3,18.0,1.4,2.6\n")
    code = run(["capacity", "--districts", str(districts),
                "--points", str(data_dir / "points.csv"),
                "--grid", str(data_dir / "population.asc"),
                "--radius", "667", "-o", str(out)])
    assert code == EXIT_OK
    header, rows = read_report(out)
    assert sorted(r[0] for r in rows) == ["East District", "North District",
                                         "West District"]
    assert [r[4] for r in rows] == [1, 2, 3]


def test_coverage_command(tmp_path, data_dir):
    out = tmp_path / "cov.csv"
    code = run(["coverage", "--points", str(data_dir / "points.csv"),
                "--grid", str(data_dir / "population.asc"), "-o", str(out)])
    assert code == EXIT_OK
    header, rows = read_report(out)
    assert header == ["district", "n_points", "coverage_ha",
                      "effective_population", "blind_share"]
    assert sorted(r[0] for r in rows) == ["East District", "North District",
                                         "West District"]
    for r in rows:
        assert r[2] > 0 and 0 <= r[4] <= 1


def test_coverage_radius_flags_change_area(tmp_path, data_dir):
    small, big = tmp_path / "s.csv", tmp_path / "b.csv"
    base = ["coverage", "--points", str(data_dir / "points.csv"),
            "--grid", str(data_dir / "population.asc")]
    assert run(base + ["--radius", "300", "-o", str(small)]) == EXIT_OK
    assert run(base + ["--speed", "6", "--minutes", "15",
                       "-o", str(big)]) == EXIT_OK
    _, rs = read_report(small)
    _, rb = read_report(big)
    assert sum(r[2] for r in rb) > sum(r[2] for r in rs)


def test_report_round_trip_and_chart(tmp_path, data_dir):
    first = tmp_path / "suit.csv"
    run(["suitability", "--shelters", str(data_dir / "shelters.csv"),
         "--config", str(data_dir / "config.ini"), "-o", str(first)])
    out = tmp_path / "suit.json"
    chart = tmp_path / "chart.svg"
    code = run(["report", "--input", str(first), "--format", "structured",
                "-o", str(out), "--chart", str(chart)])
    assert code == EXIT_OK
    header, rows = read_report(out, "structured")
    assert len(rows) == 28
    assert chart.read_text().startswith("<svg")


def test_report_chart_bad_column_exit_4(tmp_path, data_dir):
    first = tmp_path / "suit.csv"
    run(["suitability", "--shelters", str(data_dir / "shelters.csv"),
         "--config", str(data_dir / "config.ini"), "-o", str(first)])
    code = run(["report", "--input", str(first), "-o", str(tmp_path / "x.csv"),
                "--chart", str(tmp_path / "c.svg"),
                "--value-column", "nope"])
    assert code == EXIT_VALIDATION


def test_capacity_numeric_fault_exit_5(tmp_path):
    m = tmp_path / "degenerate.csv"
    m.write_text(
        "district,total_refuge_area,total_refuge_population,"
        "effective_refuge_range,effective_refuge_population,"
        "avg_refuge_area,avg_effective_refuge_area\n"
        "A,1,2,3,4,5,6\nB,1,2,3,4,5,6\n")
    assert run(["capacity", "--matrix", str(m)]) == EXIT_NUMERIC


def test_parser_declares_all_subcommands():
    p = build_parser()
    subs = next(a for a in p._actions
                if isinstance(a, type(p._subparsers._group_actions[0])))
    assert set(subs.choices) == {"weights", "suitability", "capacity",
                                 "coverage", "report", "serve"}
