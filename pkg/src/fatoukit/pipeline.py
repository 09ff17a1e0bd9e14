"""Full-analysis orchestration: classify, components, dynamics, report.

The JSON report is versioned and byte-stable for identical configurations
(fixed seeds, no timestamps); `verify` fails loudly on schema drift.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import backends as bk
from .dynamics import find_fixed_points, limit_functions
from .escape import EscapeParams, LawReport
from .family import FamilySpec, print_family
from .normality import ClassificationMap, NormalityParams, classify_normality
from .topology import connectedness_report, label_components
from .window import Window

__all__ = ["SCHEMA_VERSION", "classify", "analyze", "build_report",
           "dumps_report", "load_schema", "validate_report"]

SCHEMA_VERSION = "1"

_COMPONENT_TABLE_LIMIT = 32
_LIMIT_PROBES = 12
_MIN_COMPONENT_FOR_LIMITS = 64


def classify(spec: FamilySpec, w: Window, nparams: NormalityParams,
             eparams: EscapeParams) -> ClassificationMap:
    """Labels plus escape bits in one pass (sweeps shared internally)."""
    return classify_normality(spec, w, nparams, eparams=eparams)


def _component_probes(w: Window, comp, cid: int, limit: int):
    rows, cols = np.nonzero(comp.labels == cid)
    idx = np.linspace(0, rows.size - 1, min(limit, rows.size)).astype(int)
    return [w.center_of(int(rows[i]), int(cols[i])) for i in idx]


def analyze(spec: FamilySpec, w: Window, nparams: NormalityParams,
            eparams: EscapeParams, n_check: int = 12,
            with_dynamics: bool = True):
    """(ClassificationMap, report dict) for one family on one window."""
    cls = classify(spec, w, nparams, eparams)
    domain = cls.domain_mask()
    conn = connectedness_report(cls)
    fatou = label_components(domain & ~cls.folded_julia_mask(), 4)

    fixed = find_fixed_points(spec, w, n_check) if with_dynamics else []

    limits = []
    if with_dynamics:
        for cid in range(1, fatou.count + 1):
            if fatou.sizes[cid - 1] < _MIN_COMPONENT_FOR_LIMITS:
                continue
            probes = _component_probes(w, fatou, cid, _LIMIT_PROBES)
            est = limit_functions(spec, probes, eparams)
            limits.append((cid, est))
            if len(limits) >= 4:
                break

    report = build_report(spec, w, nparams, eparams, cls, conn, fatou,
                          fixed, limits)
    return cls, report


def build_report(spec, w: Window, nparams: NormalityParams,
                 eparams: EscapeParams, cls: ClassificationMap,
                 conn=None, fatou=None, fixed=(), limits=(),
                 laws: LawReport | None = None, family2=None) -> dict:
    counts = cls.counts()
    table = []
    if fatou is not None:
        for cid in range(1, min(fatou.count, _COMPONENT_TABLE_LIMIT) + 1):
            table.append({"id": cid, "pixels": fatou.sizes[cid - 1],
                          "bbox": list(fatou.bboxes[cid - 1])})
    warnings = sorted(set(cls.warnings))
    report = {
        "schema_version": SCHEMA_VERSION,
        "family": print_family(spec) if spec is not None else "",
        "family2": print_family(family2) if family2 is not None else None,
        "window": {
            "re_min": w.re_min, "re_max": w.re_max,
            "im_min": w.im_min, "im_max": w.im_max,
            "disk": ([w.disk.center.real, w.disk.center.imag, w.disk.radius]
                     if w.disk else None),
        },
        "grid": [w.width, w.height],
        "params": {
            "n_max": nparams.n_max,
            "window_len": nparams.window_len,
            "marty_threshold": nparams.resolved_threshold(),
            "growth_windows": nparams.growth_windows,
            "neighborhood_radius_px": nparams.neighborhood_radius_px,
            "escape_radius": eparams.escape_radius,
            "tail_window": eparams.tail_window,
            "u_hits": eparams.u_hits,
            "growth_margin": eparams.growth_margin,
        },
        "backend": bk.active_backend(),
        "labels": counts,
        "escape": {"i_count": int(cls.in_i.sum()),
                   "u_count": int(cls.in_u.sum())},
        "components": {"fatou_components": fatou.count if fatou else 0,
                       "table": table},
        "connectedness": conn.to_dict() if conn is not None else None,
        "fixed_points": [r.to_dict() for r in fixed],
        "limit_functions": [{"component": cid, **est.to_dict()}
                            for cid, est in limits],
        "laws": laws.to_dict()["laws"] if laws is not None else [],
        "warnings": warnings,
    }
    total = sum(counts.values())
    assert total == w.width * w.height, "label counts must cover the grid"
    return report


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2,
                      default=_json_default) + "\n"


def load_schema() -> dict:
    text = resources.files("fatoukit").joinpath(
        "schema/analysis_report.schema.json").read_text()
    return json.loads(text)


def validate_report(report: dict) -> None:
    """Schema check; raises on drift.  Uses jsonschema when available."""
    if report.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"schema version drift: {report.get('schema_version')!r} "
            f"(expected {SCHEMA_VERSION!r})")
    try:
        import jsonschema
    except ImportError:
        for key in ("family", "window", "grid", "params", "backend",
                    "labels", "escape", "warnings"):
            if key not in report:
                raise ValueError(f"report missing required key {key!r}")
        return
    jsonschema.validate(report, load_schema())
