"""Manifest parsing and report serialization for batch comparisons."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ManifestError
from .imaging import RoiRect
from .paired import BoxplotSummary, PairedReport

ROI_FIELDS = ("x", "y", "w", "h")
MANIFEST_HEADER = ["pair_id", "path_a", "path_b",
                   *(f"roi_a_{f}" for f in ROI_FIELDS), *(f"roi_b_{f}" for f in ROI_FIELDS)]


@dataclass(frozen=True)
class ManifestRow:
    pair_id: str
    path_a: Path
    path_b: Path
    roi_a: RoiRect | None = None
    roi_b: RoiRect | None = None
    line: int = 0


def _roi(record: dict, side: str, line: int) -> RoiRect | None:
    cells = [(record.get(f"roi_{side}_{f}") or "").strip() for f in ROI_FIELDS]
    if not any(cells):
        return None
    if not all(cells):
        raise ManifestError(f"roi_{side} is partially filled", line)
    try:
        return RoiRect(*(int(c) for c in cells))
    except ValueError:
        raise ManifestError(f"roi_{side} cells must be integers", line) from None


def read_manifest(path) -> list[ManifestRow]:
    """Parse a pair manifest; relative image paths resolve against its folder."""
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise ManifestError(f"cannot read {path}: {exc.strerror or exc}") from exc
    reader = csv.DictReader(io.StringIO(text))
    missing = {"pair_id", "path_a", "path_b"} - set(reader.fieldnames or ())
    if missing:
        raise ManifestError(f"header lacks {', '.join(sorted(missing))}", 1)
    rows, seen = [], set()
    for record in reader:
        line = reader.line_num
        if None in record:
            raise ManifestError("more cells than header columns", line)
        pair_id = (record.get("pair_id") or "").strip()
        path_a = (record.get("path_a") or "").strip()
        path_b = (record.get("path_b") or "").strip()
        if not pair_id or not path_a or not path_b:
            raise ManifestError("pair_id, path_a and path_b are required", line)
        if pair_id in seen:
            raise ManifestError(f"duplicate pair_id {pair_id!r}", line)
        seen.add(pair_id)
        roi_a, roi_b = _roi(record, "a", line), _roi(record, "b", line)
        if roi_a and roi_b and (roi_a.w, roi_a.h) != (roi_b.w, roi_b.h):
            raise ManifestError("roi_a and roi_b must have the same size", line)
        rows.append(ManifestRow(pair_id, path.parent / path_a, path.parent / path_b,
                                roi_a, roi_b, line))
    return rows


def fmt_score(x: float) -> str:
    return f"{x:.4f}"


def fmt_p(p: float) -> str:
    return f"{p:.6e}" if 0.0 < p < 1e-4 else f"{p:.6f}"


def _num(x: float, formatter=fmt_score):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(formatter(x))


def _box(b: BoxplotSummary) -> dict:
    return {
        "median": _num(b.median),
        "q25": _num(b.q25),
        "q75": _num(b.q75),
        "whisker_low": _num(b.whisker_low),
        "whisker_high": _num(b.whisker_high),
        "outliers": [_num(o) for o in b.outliers],
    }


def report_json(report: PairedReport, config: dict) -> str:
    doc = {
        "config": config,
        "pairs": [{"pair_id": p.pair_id, "s_a": _num(p.s_a), "s_b": _num(p.s_b),
                   "delta": _num(p.delta)} for p in report.pairs],
        "summary": {
            "n": report.n,
            "mean_a": _num(report.mean_a),
            "mean_b": _num(report.mean_b),
            "t": _num(report.t_statistic),
            "p": _num(report.p_value, fmt_p),
            "pct_a_greater": _num(report.pct_a_greater),
            "boxplot_a": _box(report.boxplot_a),
            "boxplot_b": _box(report.boxplot_b),
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def report_csv(report: PairedReport) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["pair_id", "s_a", "s_b", "delta"])
    for p in report.pairs:
        out.writerow([p.pair_id, fmt_score(p.s_a), fmt_score(p.s_b), fmt_score(p.delta)])
    return buf.getvalue()


def summary_line(report: PairedReport, label_a: str = "A", label_b: str = "B") -> str:
    return (f"n={report.n} mean_{label_a}={fmt_score(report.mean_a)} "
            f"mean_{label_b}={fmt_score(report.mean_b)} t={fmt_score(report.t_statistic)} "
            f"p={fmt_p(report.p_value)} pct_{label_a}>{label_b}={report.pct_a_greater:.1f}%")
