import json

import numpy as np
import pytest

from hjlab.cli import load_profile_csv, run_cli
from hjlab.reporting import report_from_json, report_to_json


def write_abs_u0(tmp_path, half_width=5.0, n=501):
    xs = np.linspace(-half_width, half_width, n)
    lines = ["x,value"] + [f"{x:.17g},{abs(x):.17g}" for x in xs]
    path = tmp_path / "u0.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


class TestUsageErrors:
    def test_unknown_subcommand(self, capsys):
        assert run_cli(["badcmd"]) == 2
        assert "usage" in capsys.readouterr().err

    def test_no_arguments(self):
        assert run_cli([]) == 2

    def test_unknown_flag(self):
        assert run_cli(["h4check", "--family", "quadratic", "--frobnicate"]) == 2

    def test_unknown_experiment_name(self):
        assert run_cli(["experiment", "E9_nothing"]) == 2

    def test_bad_profile_header(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        code = run_cli(["hopflax", "--family", "quadratic", "--u0", str(bad),
                        "--x", "0", "--t", "1"])
        assert code == 2

    def test_help_exits_zero(self):
        assert run_cli(["--help"]) == 0


class TestProfileCsv:
    def test_load(self, tmp_path):
        path = write_abs_u0(tmp_path, n=11)
        f = load_profile_csv(path)
        assert f(0.0) == 0.0
        assert f(2.0) == pytest.approx(2.0)

    def test_too_few_rows(self, tmp_path):
        p = tmp_path / "short.csv"
        p.write_text("x,value\n0,0\n")
        with pytest.raises(ValueError):
            load_profile_csv(p)


class TestExperimentCommand:
    def test_writes_bundle_and_round_trips(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = run_cli(["experiment", "E1_counterexample", "--out", str(out)])
        assert code == 0
        assert "PASS" in capsys.readouterr().out
        text = (out / "E1_counterexample.json").read_text()
        assert report_to_json(report_from_json(text)) == text
        assert (out / "E1_counterexample.plateau_ratios.csv").exists()
        assert (out / "E1_counterexample.plateau_ratios.png").exists()
        # everything stays under --out
        written = {p for p in tmp_path.rglob("*") if p.is_file()}
        assert all(out in p.parents for p in written)

    def test_format_json_only(self, tmp_path):
        out = tmp_path / "only"
        assert run_cli(["experiment", "E1_counterexample", "--out", str(out),
                        "--format", "json"]) == 0
        names = {p.name for p in out.iterdir()}
        assert names == {"E1_counterexample.json"}

    def test_failing_verdict_exits_one(self, tmp_path):
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({"gap_threshold": 99.0}))
        code = run_cli(["experiment", "E1_counterexample", "--config", str(cfgfile)])
        assert code == 1


class TestSolverCommands:
    def test_ergodic_brackets_zero(self, capsys):
        code = run_cli(["ergodic", "--family", "eikonal-shift", "--c", "1"])
        assert code == 0
        out = capsys.readouterr().out
        line = [l for l in out.splitlines() if l.startswith("lambda_min bracket")][0]
        lo, hi = (float(tok.strip("[], ")) for tok in line.split(":")[1].split(","))
        assert lo <= 0.0 <= hi or (abs(lo) <= 0.05 and abs(hi) <= 0.05)

    def test_hopflax_values(self, tmp_path, capsys):
        u0 = write_abs_u0(tmp_path)
        out = tmp_path / "hl"
        code = run_cli(["hopflax", "--family", "quadratic", "--u0", str(u0),
                        "--x", "0,3", "--t", "1", "--out", str(out)])
        assert code == 0
        rows = (out / "hopflax.csv").read_text().strip().splitlines()
        assert rows[0] == "x,value"
        vals = {float(r.split(",")[0]): float(r.split(",")[1]) for r in rows[1:]}
        assert vals[0.0] == pytest.approx(0.0, abs=1e-8)
        assert vals[3.0] == pytest.approx(2.5, abs=1e-8)

    def test_trajectory(self, tmp_path, capsys):
        u0 = write_abs_u0(tmp_path)
        out = tmp_path / "traj"
        code = run_cli(["trajectory", "--family", "quadratic", "--u0", str(u0),
                        "--x", "3", "--t", "1", "--out", str(out)])
        assert code == 0
        out_text = capsys.readouterr().out
        start = float([l for l in out_text.splitlines()
                       if l.startswith("start_point")][0].split(":")[1])
        assert start == pytest.approx(2.0, abs=1e-6)
        assert (out / "trajectory.csv").exists()

    def test_evolve_writes_series(self, tmp_path):
        u0 = write_abs_u0(tmp_path, half_width=4.0, n=201)
        out = tmp_path / "ev"
        code = run_cli(["evolve", "--family", "quadratic", "--u0", str(u0),
                        "--x-min", "-4", "--x-max", "4", "--n", "201",
                        "--t-end", "0.5", "--snapshots", "0.25,0.5",
                        "--out", str(out)])
        assert code == 0
        assert (out / "final.csv").exists()
        assert (out / "m_series.csv").read_text().startswith("t,value")
        assert len(list(out.glob("snapshot_t*.csv"))) == 2

    def test_h4check_reports_witness(self, capsys):
        code = run_cli(["h4check", "--family", "abs-shift", "--alpha", "1"])
        assert code == 0
        out = capsys.readouterr().out
        assert "violated" in out
        assert "witness" in out

    def test_h4check_convex_holds(self, capsys):
        code = run_cli(["h4check", "--family", "quadratic"])
        assert code == 0
        assert "holds_with_margin" in capsys.readouterr().out
