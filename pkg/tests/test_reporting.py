import json

import pytest

from hjlab.experiments import ExperimentReport, Verdict
from hjlab.reporting import (
    report_from_json,
    report_to_json,
    series_to_csv,
    write_report_bundle,
    write_report_json,
    write_series_csv,
)


@pytest.fixture
def small_report():
    rep = ExperimentReport("demo", {"tol": 0.5, "panel": [1.0, 2.0]})
    rep.series = {"values": [[1.0, 0.25], [2.0, 0.125]],
                  "empty": []}
    rep.verdicts = [Verdict.le("small_enough", 0.125, 0.5),
                    Verdict.ge("grew", 0.0, 1.0)]
    return rep


class TestJson:
    def test_round_trip_byte_identical(self, small_report):
        text = report_to_json(small_report)
        again = report_to_json(report_from_json(text))
        assert again == text

    def test_schema_fields(self, small_report):
        doc = json.loads(report_to_json(small_report))
        assert set(doc) == {"name", "config", "series", "verdicts"}
        assert doc["verdicts"][0]["comparator"] == "<="
        assert doc["verdicts"][0]["pass"] is True
        assert doc["verdicts"][1]["pass"] is False

    def test_write_is_atomic_and_clean(self, small_report, tmp_path):
        path = write_report_json(small_report, tmp_path / "r.json")
        assert path.exists()
        assert report_from_json(path.read_text()).name == "demo"
        assert not list(tmp_path.glob("*.tmp"))


class TestCsv:
    def test_header_and_rows(self):
        text = series_to_csv([[1.0, 0.5], [2.0, -0.25]])
        lines = text.strip().splitlines()
        assert lines[0] == "t,value"
        assert lines[1].startswith("1,")
        assert float(lines[2].split(",")[1]) == -0.25

    def test_write_and_read_back(self, tmp_path):
        pts = [[0.5, 1e-17], [1.5, 123456.789]]
        path = write_series_csv(pts, tmp_path / "s.csv")
        rows = path.read_text().strip().splitlines()
        assert rows[0] == "t,value"
        parsed = [tuple(float(c) for c in r.split(",")) for r in rows[1:]]
        assert parsed == [(0.5, 1e-17), (1.5, 123456.789)]


class TestBundle:
    def test_bundle_contents(self, small_report, tmp_path):
        manifest = write_report_bundle(small_report, tmp_path)
        assert manifest["json"].exists()
        assert manifest["csv:values"].exists()
        png = manifest["png:values"]
        assert png.stat().st_size > 0
        assert png.read_bytes()[:4] == b"\x89PNG"
        # empty series gets a CSV (header only) but no figure
        assert manifest["csv:empty"].read_text() == "t,value\n"
        assert "png:empty" not in manifest
        assert not list(tmp_path.glob("*.tmp"))
