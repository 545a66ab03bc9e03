"""JSON and CSV emission for run reports."""

from __future__ import annotations

import csv
import io
import json

import numpy as np

SCHEMA_VERSION = "hua5-report/1"
CSV_HEADER = ["section", "index", "key", "value"]


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    if hasattr(x, "to_dict"):
        return _jsonable(x.to_dict())
    return x


def report_document(report, kind: str | None = None) -> dict:
    body = _jsonable(report)
    return {"schema_version": SCHEMA_VERSION,
            "kind": kind or type(report).__name__,
            "report": body}


def dumps_json(report, kind: str | None = None) -> str:
    return json.dumps(report_document(report, kind), sort_keys=True, indent=2)


def loads_json(text: str):
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {doc.get('schema_version')!r}")
    body = doc["report"]
    if doc["kind"] == "HuaReport":
        from .hua import HuaReport
        return HuaReport.from_dict(body)
    if doc["kind"] == "ConditionReport":
        from .conditions import ConditionReport
        return ConditionReport.from_dict(body)
    return body


def _flatten(prefix: str, x, out: list):
    if isinstance(x, dict):
        for k in sorted(x):
            _flatten(f"{prefix}.{k}" if prefix else str(k), x[k], out)
    elif isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, json.dumps(x) if isinstance(x, list) else x))


def dumps_csv(report) -> str:
    """Flat (section, index, key, value) rows. Condition reports get one
    section each; everything else lands in section "summary"."""
    body = _jsonable(report)
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_HEADER)
    conds = body.pop("condition_reports", []) if isinstance(body, dict) else []
    rows: list = []
    _flatten("", body, rows)
    for k, v in rows:
        wr.writerow(["summary", 0, k, v])
    for i, c in enumerate(conds):
        rows = []
        _flatten("", c, rows)
        for k, v in rows:
            wr.writerow([c.get("condition", "condition"), i, k, v])
    return buf.getvalue()


def spectrum_csv(grid) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["r", "re", "im", "abs"])
    for r, z in enumerate(grid.values):
        wr.writerow([r, repr(float(z.real)), repr(float(z.imag)), repr(float(abs(z)))])
    return buf.getvalue()


def emit_report(report, fmt: str = "json", path=None, kind: str | None = None) -> str:
    """Serialize report as json or csv; write to path when given."""
    if fmt == "json":
        text = dumps_json(report, kind)
    elif fmt == "csv":
        text = dumps_csv(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
