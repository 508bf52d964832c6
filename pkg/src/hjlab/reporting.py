"""Serialization of experiment reports: canonical JSON, per-series CSV, and
PNG figures rendered next to the delimited output.

JSON is canonical (sorted keys, two-space indent, trailing newline) so that a
load/dump round trip is byte-identical.  All writes go through a temporary
file in the destination directory followed by an atomic rename.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .experiments import ExperimentReport  # noqa: E402


def _atomic_write_bytes(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def report_to_json(report: ExperimentReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def report_from_json(text: str) -> ExperimentReport:
    return ExperimentReport.from_dict(json.loads(text))


def write_report_json(report: ExperimentReport, path) -> Path:
    path = Path(path)
    _atomic_write_bytes(path, report_to_json(report).encode())
    return path


def series_to_csv(points) -> str:
    lines = ["t,value"]
    lines += [f"{float(t):.17g},{float(v):.17g}" for t, v in points]
    return "\n".join(lines) + "\n"


def write_series_csv(points, path, header: str = "t,value") -> Path:
    path = Path(path)
    lines = [header]
    lines += [f"{float(t):.17g},{float(v):.17g}" for t, v in points]
    _atomic_write_bytes(path, ("\n".join(lines) + "\n").encode())
    return path


def render_series_figure(name: str, series_name: str, points, path) -> Path:
    """One PNG per series: value against t, log-x when t spans decades."""
    path = Path(path)
    ts = [float(t) for t, _ in points]
    vs = [float(v) for _, v in points]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(ts, vs, marker="o", ms=3, lw=1)
    if min(ts) > 0 and max(ts) / max(min(ts), 1e-300) > 1e3:
        ax.set_xscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel(series_name)
    ax.set_title(f"{name}: {series_name}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    os.close(fd)
    try:
        fig.savefig(tmp, format="png", dpi=110)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)
    return path


def write_report_bundle(report: ExperimentReport, out_dir) -> dict:
    """JSON + one CSV and one PNG per series, all under ``out_dir``.

    Returns a manifest mapping logical names to the written paths.
    """
    out_dir = Path(out_dir)
    manifest = {"json": write_report_json(report, out_dir / f"{report.name}.json")}
    for series_name, points in report.series.items():
        stem = f"{report.name}.{series_name}"
        manifest[f"csv:{series_name}"] = write_series_csv(points, out_dir / f"{stem}.csv")
        if points:
            manifest[f"png:{series_name}"] = render_series_figure(
                report.name, series_name, points, out_dir / f"{stem}.png")
    return manifest
