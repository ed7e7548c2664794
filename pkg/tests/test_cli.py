import json
import math

import pytest
from click.testing import CliRunner

from hausdorff_lab.cli import cli
from hausdorff_lab.dimension import parse_dimension_report
from hausdorff_lab.measure import sweep_from_csv
from hausdorff_lab.sets import IntervalSet, PointCloud

S_CANTOR = math.log(2) / math.log(3)


@pytest.fixture
def runner():
    return CliRunner()


def run_ok(runner, args):
    result = runner.invoke(cli, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


class TestGenerate:
    def test_cantor_depth2_intervals(self, runner, tmp_path):
        out = tmp_path / "k2.csv"
        res = run_ok(runner, ["generate", "--preset", "cantor", "--depth", "2",
                              "--as", "intervals", "--out", str(out)])
        rows = out.read_text().strip().splitlines()
        assert len(rows) == 4
        back = IntervalSet.from_csv(out.read_text())
        assert [float(a) for a, _ in back] == pytest.approx([0, 2 / 9, 2 / 3, 8 / 9])
        assert "count=4" in res.output

    def test_cantor_depth0(self, runner, tmp_path):
        out = tmp_path / "k0.csv"
        run_ok(runner, ["generate", "--preset", "cantor", "--depth", "0",
                        "--as", "intervals", "--out", str(out)])
        assert out.read_text() == "0,1\n"

    def test_chaos_is_byte_identical(self, runner, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["generate", "--ifs", "sierpinski-triangle", "--chaos", "20000",
                "--seed", "42"]
        run_ok(runner, args + ["--out", str(a)])
        run_ok(runner, args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_ifs_config_file(self, runner, tmp_path):
        cfg = tmp_path / "maps.txt"
        cfg.write_text("# contracting pair on the line\n"
                       "0.5, 1.0, 0.0\n0.5, 1.0, 0.5\n")
        out = tmp_path / "pts.csv"
        run_ok(runner, ["generate", "--ifs", str(cfg), "--chaos", "500",
                        "--seed", "3", "--out", str(out)])
        cloud = PointCloud.from_csv(out.read_text())
        assert len(cloud) == 500

    def test_unknown_preset_usage_error(self, runner, tmp_path):
        res = runner.invoke(cli, ["generate", "--preset", "moebius",
                                  "--out", str(tmp_path / "x.csv")])
        assert res.exit_code == 2


class TestMeasure:
    def test_prefractal_sweep_bounded_by_one(self, runner, tmp_path):
        k8 = tmp_path / "k8.csv"
        run_ok(runner, ["generate", "--preset", "cantor", "--depth", "8",
                        "--as", "intervals", "--out", str(k8)])
        out = tmp_path / "sweep.csv"
        run_ok(runner, ["measure", "--in", str(k8), "--s", "0.6309297536",
                        "--eps-start", "0.33334", "--eps-ratio", "0.3334",
                        "--count", "8", "--out", str(out)])
        sweep = sweep_from_csv(out.read_text())
        assert len(sweep.values) == 8
        assert all(0 < v <= 1 + 1e-9 for v in sweep.values)

    def test_unit_interval_all_ones(self, runner, tmp_path):
        unit = tmp_path / "unit.csv"
        unit.write_text("0,1\n")
        out = tmp_path / "sweep.csv"
        run_ok(runner, ["measure", "--in", str(unit), "--s", "1",
                        "--eps-start", "0.5", "--eps-ratio", "0.5",
                        "--count", "6", "--out", str(out)])
        sweep = sweep_from_csv(out.read_text())
        assert all(abs(v - 1.0) <= 1e-12 for v in sweep.values)

    def test_empty_input_all_zero(self, runner, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        out = tmp_path / "sweep.csv"
        run_ok(runner, ["measure", "--in", str(empty), "--s", "0.5",
                        "--eps-start", "0.5", "--eps-ratio", "0.5",
                        "--count", "4", "--out", str(out)])
        sweep = sweep_from_csv(out.read_text())
        assert sweep.values == [0.0, 0.0, 0.0, 0.0]

    def test_malformed_input_exit_2_with_line(self, runner, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("0,1\nnot,a,row\n")
        res = runner.invoke(cli, ["measure", "--in", str(bad), "--s", "1",
                                  "--eps-start", "0.5", "--eps-ratio", "0.5",
                                  "--count", "4"])
        assert res.exit_code == 2
        assert "line 2" in res.output

    def test_missing_input_exit_3(self, runner, tmp_path):
        res = runner.invoke(cli, ["measure", "--in", str(tmp_path / "nope.csv"),
                                  "--s", "1", "--eps-start", "0.5",
                                  "--eps-ratio", "0.5", "--count", "4"])
        assert res.exit_code == 3

    def test_json_document(self, runner, tmp_path):
        unit = tmp_path / "unit.csv"
        unit.write_text("0,1\n")
        out = tmp_path / "sweep.json"
        run_ok(runner, ["measure", "--in", str(unit), "--s", "1",
                        "--eps-start", "0.5", "--eps-ratio", "0.5",
                        "--count", "3", "--json", "--out", str(out)])
        doc = json.loads(out.read_text())
        assert doc["trend"] == "converging"
        assert [row["value"] for row in doc["rows"]] == [1.0, 1.0, 1.0]

    def test_eps_list_override(self, runner, tmp_path):
        unit = tmp_path / "unit.csv"
        unit.write_text("0,1\n")
        out = tmp_path / "sweep.csv"
        run_ok(runner, ["measure", "--in", str(unit), "--s", "1",
                        "--eps-list", "0.4,0.2,0.1", "--out", str(out)])
        sweep = sweep_from_csv(out.read_text())
        assert sweep.eps_values == [0.4, 0.2, 0.1]

    def test_cloud_kind(self, runner, tmp_path):
        pts = tmp_path / "pts.csv"
        pts.write_text("0\n0.5\n1\n")
        out = tmp_path / "sweep.csv"
        run_ok(runner, ["measure", "--in", str(pts), "--kind", "cloud",
                        "--s", "0.5", "--eps-list", "0.4,0.2,0.1",
                        "--out", str(out)])
        sweep = sweep_from_csv(out.read_text())
        assert sweep.values == [0.0, 0.0, 0.0]


class TestDimension:
    def test_moran_cantor(self, runner):
        res = run_ok(runner, ["dimension", "--moran",
                              "0.3333333333,0.3333333333"])
        value = float(res.output.split("=")[1].split()[0])
        assert abs(value - 0.6309297536) <= 1e-9

    def test_moran_single_map(self, runner):
        res = run_ok(runner, ["dimension", "--moran", "0.5"])
        assert "= 0" in res.output

    def test_box_on_cantor_points(self, runner, tmp_path):
        pts = tmp_path / "cantor_pts.csv"
        run_ok(runner, ["generate", "--preset", "cantor", "--depth", "10",
                        "--as", "endpoints", "--out", str(pts)])
        rep = tmp_path / "rep.csv"
        scales = tmp_path / "scales.csv"
        res = run_ok(runner, ["dimension", "--box", "--in", str(pts),
                              "--eps-start", "0.11112", "--eps-ratio", "0.3334",
                              "--count", "6", "--out", str(rep),
                              "--scales-out", str(scales)])
        doc = parse_dimension_report(rep.read_text())
        # padded scales straddle cell boundaries, so the slope carries a
        # small positive bias relative to the aligned-schedule estimate
        assert abs(doc["value"] - 0.6309) <= 0.03
        assert doc["r_squared"] > 0.999
        assert len(scales.read_text().strip().splitlines()) == 7

    def test_box_deeper_schedule_tightens(self, runner, tmp_path):
        pts = tmp_path / "cantor_pts.csv"
        run_ok(runner, ["generate", "--preset", "cantor", "--depth", "12",
                        "--as", "endpoints", "--out", str(pts)])
        rep = tmp_path / "rep.csv"
        run_ok(runner, ["dimension", "--box", "--in", str(pts),
                        "--eps-start", "0.012353", "--eps-ratio", "0.3334",
                        "--count", "6", "--out", str(rep)])
        doc = parse_dimension_report(rep.read_text())
        assert abs(doc["value"] - 0.6309) <= 0.01

    def test_scan_reports_bracket(self, runner, tmp_path):
        unit = tmp_path / "unit.csv"
        unit.write_text("0,1\n")
        rep = tmp_path / "rep.csv"
        run_ok(runner, ["dimension", "--scan", "--in", str(unit),
                        "--kind", "intervals", "--s-grid", "0.5,1.0",
                        "--eps-list", "0.5,0.25,0.125,0.0625,0.03125",
                        "--out", str(rep)])
        doc = parse_dimension_report(rep.read_text())
        assert doc["method"] == "critical-scan"
        assert doc["lo"] is not None and doc["hi"] is not None

    def test_method_flags_are_exclusive(self, runner):
        res = runner.invoke(cli, ["dimension", "--moran", "0.5", "--box"])
        assert res.exit_code == 2

    def test_json_mode(self, runner):
        res = run_ok(runner, ["dimension", "--moran", "0.5,0.5", "--json"])
        doc = json.loads(res.output.split("\n", 1)[1])
        assert doc["value"] == pytest.approx(1.0, abs=1e-9)


class TestVerify:
    def test_caratheodory_passes(self, runner):
        res = run_ok(runner, ["verify", "--suite", "caratheodory", "--n", "6",
                              "--trials", "50", "--seed", "7"])
        assert "[pass]" in res.output and "[FAIL]" not in res.output

    def test_cantor_depth8(self, runner):
        res = run_ok(runner, ["verify", "--suite", "cantor", "--depth", "8"])
        assert "[FAIL]" not in res.output

    def test_corrupted_table_fails_with_dump(self, runner, tmp_path):
        bad = tmp_path / "table.csv"
        bad.write_text("0,0\n1,2\n2,1\n3,1\n")
        res = runner.invoke(cli, ["verify", "--suite", "axioms",
                                  "--table", str(bad)])
        assert res.exit_code == 1
        assert "counterexample" in res.output

    def test_unknown_suite_usage_error(self, runner):
        res = runner.invoke(cli, ["verify", "--suite", "bogus"])
        assert res.exit_code == 2


class TestReport:
    def test_figure_and_combined_csv(self, runner, tmp_path):
        unit = tmp_path / "unit.csv"
        unit.write_text("0,1\n")
        s1 = tmp_path / "s1.csv"
        s2 = tmp_path / "s2.csv"
        run_ok(runner, ["measure", "--in", str(unit), "--s", "1",
                        "--eps-list", "0.4,0.2,0.1", "--out", str(s1)])
        run_ok(runner, ["measure", "--in", str(unit), "--s", "0.5",
                        "--eps-list", "0.4,0.2,0.1", "--out", str(s2)])
        fig = tmp_path / "fig.png"
        combined = tmp_path / "combined.csv"
        run_ok(runner, ["report", "--in", str(s1), "--in", str(s2),
                        "--fig", str(fig), "--out", str(combined),
                        "--title", "unit interval"])
        assert fig.stat().st_size > 1000
        rows = combined.read_text().strip().splitlines()
        assert rows[0] == "eps,s,value,method,is_exact"
        assert len(rows) == 7

    def test_missing_sweep_exit_3(self, runner, tmp_path):
        res = runner.invoke(cli, ["report", "--in", str(tmp_path / "no.csv"),
                                  "--fig", str(tmp_path / "f.png")])
        assert res.exit_code == 3


class TestRoundTripPrecision:
    def test_17_digit_round_trip(self, runner, tmp_path):
        out = tmp_path / "pts.csv"
        run_ok(runner, ["generate", "--ifs", "sierpinski-triangle", "--chaos",
                        "200", "--seed", "5", "--out", str(out)])
        cloud = PointCloud.from_csv(out.read_text())
        again = PointCloud.from_csv(cloud.to_csv())
        assert again == cloud
