"""CSV and JSON report formats, with parsers.

Every emitter is deterministic: floats are written with ``repr`` (shortest
round-trip form) and the only varying content is the optional
``# generated: ...`` header (``"generated"`` key in JSON).  CSV metadata lives
in ``# key: value`` comment lines ahead of the header row.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from typing import Any

from .classifier import PatternReport, Theorem1Check
from .csit import CsitPattern
from .dof import DofEstimate, RatePoint
from .schemes import SchemeId

__all__ = [
    "ATLAS_COLUMNS",
    "RATE_COLUMNS",
    "TRACE_COLUMNS",
    "timestamp",
    "emit_atlas_csv",
    "parse_atlas_csv",
    "emit_atlas_json",
    "parse_atlas_json",
    "emit_sweep_csv",
    "parse_sweep_csv",
    "emit_sweep_json",
    "parse_sweep_json",
    "emit_trace_csv",
    "parse_trace_csv",
    "emit_trace_json",
    "parse_trace_json",
]

ATLAS_COLUMNS = ("pattern", "req1", "req2", "req3", "matched_minimal", "scheme", "verdict")
RATE_COLUMNS = ("scheme", "P", "log2P", "sum_rate", "trials", "skipped")
TRACE_COLUMNS = ("section", "name", "re", "im")


def timestamp() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def _fmt(x: float) -> str:
    return repr(float(x))


def _bool(text: str) -> bool:
    if text not in ("true", "false"):
        raise ValueError(f"expected true/false, got {text!r}")
    return text == "true"


def _scheme_label(s: SchemeId | None) -> str:
    return s.label if s is not None else ""


def _write_csv(meta: list[tuple[str, str]], columns, rows, generated: str | None) -> str:
    buf = io.StringIO()
    if generated is not None:
        buf.write(f"# generated: {generated}\n")
    for key, value in meta:
        buf.write(f"# {key}: {value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def _read_csv(text: str, columns) -> tuple[dict[str, str], list[dict[str, str]]]:
    meta: dict[str, str] = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    rows = list(csv.DictReader(body))
    if not body or tuple(next(csv.reader(body[:1]))) != tuple(columns):
        raise ValueError(f"expected CSV columns {','.join(columns)}")
    meta.pop("generated", None)
    return meta, rows


def _json(doc: dict, generated: str | None) -> str:
    if generated is not None:
        doc = {"generated": generated, **doc}
    return json.dumps(doc, indent=2) + "\n"


# -- pattern atlas ----------------------------------------------------------

def _report_row(r: PatternReport) -> dict[str, str]:
    req = r.requirements
    return {
        "pattern": str(r.pattern),
        "req1": str(req.delayed_then_perfect).lower(),
        "req2": str(req.never_both_none).lower(),
        "req3": str(req.perfect_in_last_slot).lower(),
        "matched_minimal": str(r.dominated_minimal) if r.dominated_minimal else "",
        "scheme": _scheme_label(r.assigned_scheme),
        "verdict": r.verdict.value,
    }


def _report_from_row(row: dict[str, Any]) -> PatternReport:
    as_bool = (lambda v: v) if isinstance(row["req1"], bool) else _bool
    report = PatternReport(
        pattern=CsitPattern.parse(row["pattern"]),
        requirements=Theorem1Check(as_bool(row["req1"]), as_bool(row["req2"]), as_bool(row["req3"])),
        dominated_minimal=CsitPattern.parse(row["matched_minimal"]) if row["matched_minimal"] else None,
        assigned_scheme=SchemeId.parse(row["scheme"]) if row["scheme"] else None,
    )
    if report.verdict.value != row["verdict"]:
        raise ValueError(f"{row['pattern']}: verdict {row['verdict']!r} contradicts matched pattern")
    return report


def emit_atlas_csv(reports, generated: str | None = None) -> str:
    rows = [[_report_row(r)[c] for c in ATLAS_COLUMNS] for r in reports]
    return _write_csv([], ATLAS_COLUMNS, rows, generated)


def parse_atlas_csv(text: str) -> list[PatternReport]:
    _, rows = _read_csv(text, ATLAS_COLUMNS)
    return [_report_from_row(r) for r in rows]


def emit_atlas_json(reports, summary: dict | None = None, generated: str | None = None) -> str:
    doc: dict[str, Any] = dict(summary or {})
    doc["patterns"] = []
    for r in reports:
        row: dict[str, Any] = _report_row(r)
        row.update(zip(("req1", "req2", "req3"), r.requirements))
        row["matched_minimal"] = row["matched_minimal"] or None
        row["scheme"] = row["scheme"] or None
        doc["patterns"].append(row)
    return _json(doc, generated)


def parse_atlas_json(text: str) -> tuple[list[PatternReport], dict]:
    doc = json.loads(text)
    doc.pop("generated", None)
    reports = [_report_from_row(r) for r in doc.pop("patterns")]
    return reports, doc


# -- rate sweeps ------------------------------------------------------------

def emit_sweep_csv(est: DofEstimate, generated: str | None = None) -> str:
    meta = [
        ("scheme", est.scheme.value),
        ("pattern", str(est.pattern) if est.pattern else ""),
        ("slope", _fmt(est.slope)),
        ("intercept", _fmt(est.intercept)),
    ]
    rows = [
        [est.scheme.value, _fmt(p.P), _fmt(p.log2P), _fmt(p.sum_rate), p.trials, p.skipped]
        for p in est.points
    ]
    return _write_csv(meta, RATE_COLUMNS, rows, generated)


def parse_sweep_csv(text: str) -> DofEstimate:
    meta, rows = _read_csv(text, RATE_COLUMNS)
    points = tuple(
        RatePoint(float(r["P"]), float(r["sum_rate"]), int(r["trials"]), int(r["skipped"]),
                  SchemeId(r["scheme"]))
        for r in rows
    )
    return DofEstimate(
        slope=float(meta["slope"]),
        intercept=float(meta["intercept"]),
        points=points,
        scheme=SchemeId(meta["scheme"]),
        pattern=CsitPattern.parse(meta["pattern"]) if meta.get("pattern") else None,
    )


def emit_sweep_json(est: DofEstimate, generated: str | None = None) -> str:
    doc = {
        "scheme": est.scheme.value,
        "pattern": str(est.pattern) if est.pattern else None,
        "slope": est.slope,
        "intercept": est.intercept,
        "points": [
            {"P": p.P, "log2P": p.log2P, "sum_rate": p.sum_rate,
             "trials": p.trials, "skipped": p.skipped}
            for p in est.points
        ],
    }
    return _json(doc, generated)


def parse_sweep_json(text: str) -> DofEstimate:
    doc = json.loads(text)
    scheme = SchemeId(doc["scheme"])
    points = tuple(
        RatePoint(p["P"], p["sum_rate"], p["trials"], p["skipped"], scheme) for p in doc["points"]
    )
    pattern = CsitPattern.parse(doc["pattern"]) if doc.get("pattern") else None
    return DofEstimate(doc["slope"], doc["intercept"], points, scheme, pattern)


# -- single-trial traces ----------------------------------------------------
#
# A trace is a plain dict:
#   {"meta": {str: str}, "values": [(section, name, complex), ...]}

def emit_trace_csv(trace: dict, generated: str | None = None) -> str:
    rows = [[sec, name, _fmt(z.real), _fmt(z.imag)] for sec, name, z in trace["values"]]
    return _write_csv(list(trace["meta"].items()), TRACE_COLUMNS, rows, generated)


def parse_trace_csv(text: str) -> dict:
    meta, rows = _read_csv(text, TRACE_COLUMNS)
    values = [(r["section"], r["name"], complex(float(r["re"]), float(r["im"]))) for r in rows]
    return {"meta": meta, "values": values}


def emit_trace_json(trace: dict, generated: str | None = None) -> str:
    sections: dict[str, dict[str, list[float]]] = {}
    for sec, name, z in trace["values"]:
        sections.setdefault(sec, {})[name] = [z.real, z.imag]
    return _json({"meta": trace["meta"], "sections": sections}, generated)


def parse_trace_json(text: str) -> dict:
    doc = json.loads(text)
    values = [
        (sec, name, complex(re, im))
        for sec, entries in doc["sections"].items()
        for name, (re, im) in entries.items()
    ]
    return {"meta": doc["meta"], "values": values}
