"""Report assembly and serialization.

Reports are plain dicts serialized with sorted keys so that identical runs
produce byte-identical JSON once timing fields are removed. Each report
kind has a JSON Schema under ``specbudget/schemas``.
"""

from __future__ import annotations

import copy
import csv
import io
import json
from importlib import resources

import numpy as np

from .config import BudgetConfig
from .errors import SpecBudgetError

SCHEMA_VERSION = 1
TIMING_KEYS = frozenset(
    {"elapsed_ms", "mean_latency_ms", "median_latency_ms", "total_time_s"}
)
SCHEMA_FILES = {
    "budget": "budget_report.schema.json",
    "bench": "bench_report.schema.json",
    "compare": "compare_report.schema.json",
}


def load_schema(kind: str) -> dict:
    text = resources.files("specbudget").joinpath("schemas", SCHEMA_FILES[kind]).read_text()
    return json.loads(text)


def config_dict(cfg: BudgetConfig) -> dict:
    sk = cfg.randomized
    return {
        "tau": cfg.tau,
        "k_min": cfg.k_min,
        "k_max": cfg.k_max,
        "method": "exact" if sk is None else "rsvd",
        "t": None if sk is None else sk.t,
        "p": None if sk is None else sk.p,
        "q": None if sk is None else sk.q,
        "seed": None if sk is None else sk.seed,
    }


def _histogram(values, bins=10):
    lo, hi = min(values), max(values)
    nbins = max(1, min(bins, hi - lo + 1))
    counts, edges = np.histogram(values, bins=nbins, range=(lo, hi + 1))
    return {"edges": [float(e) for e in edges], "counts": [int(c) for c in counts]}


def budget_report(ids, outcomes, cfg: BudgetConfig, omit_timing=False) -> dict:
    """``outcomes[i]`` is either a :class:`BudgetResult` or the exception raised."""
    instances = []
    ok = []
    for ident, out in zip(ids, outcomes):
        if isinstance(out, Exception):
            instances.append(
                {
                    "id": ident,
                    "error": {"type": type(out).__name__, "message": str(out)},
                }
            )
            continue
        rec = {
            "id": ident,
            "k_raw": out.k_raw,
            "k_star": out.k_star,
            "rho": out.rho,
            "achieved_ratio": out.achieved_ratio,
            "saturated": out.saturated,
            "method": out.method,
            "error": None,
        }
        if not omit_timing:
            rec["elapsed_ms"] = out.elapsed * 1e3
        instances.append(rec)
        ok.append(out.k_star)

    aggregates = {"count": len(instances), "succeeded": len(ok), "failed": len(instances) - len(ok)}
    if ok:
        aggregates.update(
            mean_k_star=float(np.mean(ok)),
            min_k_star=int(min(ok)),
            max_k_star=int(max(ok)),
            histogram_k_star=_histogram(ok),
        )
    return {
        "report": "budget",
        "schema_version": SCHEMA_VERSION,
        "config": config_dict(cfg),
        "instances": instances,
        "aggregates": aggregates,
    }


def compare_report(comparison, cfg: BudgetConfig, ensemble=None, scores=None) -> dict:
    doc = {
        "report": "compare",
        "schema_version": SCHEMA_VERSION,
        "config": config_dict(cfg),
        **comparison.to_dict(),
    }
    if ensemble is not None:
        doc["ensemble"] = ensemble
    if scores is not None:
        doc["scores"] = scores
    return doc


def strip_timing(report: dict) -> dict:
    """Deep copy of ``report`` without wall-clock fields."""

    def walk(node):
        if isinstance(node, dict):
            return {k: walk(v) for k, v in node.items() if k not in TIMING_KEYS}
        if isinstance(node, list):
            return [walk(v) for v in node]
        return copy.copy(node)

    return walk(report)


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _rows_to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else row.get(c) for c in columns])
    return buf.getvalue()


def to_csv(report: dict) -> str:
    """Flat per-instance (or per-configuration) table for a report."""
    kind = report["report"]
    if kind == "budget":
        columns = ["id", "k_raw", "k_star", "rho", "achieved_ratio", "saturated", "method", "elapsed_ms", "error"]
        rows = []
        for rec in report["instances"]:
            row = dict(rec)
            if rec.get("error"):
                row["error"] = f"{rec['error']['type']}: {rec['error']['message']}"
            rows.append(row)
    elif kind == "bench":
        columns = ["method", "t", "p", "q", "mean_latency_ms", "median_latency_ms", "mean_k_star", "saturated", "total_time_s"]
        rows = report["records"]
    elif kind == "compare":
        rows = report["records"]
        columns = list(rows[0]) if rows else ["instance"]
    else:
        raise SpecBudgetError(f"unknown report kind {kind!r}")
    if not any("elapsed_ms" in r or "mean_latency_ms" in r for r in rows):
        columns = [c for c in columns if c not in TIMING_KEYS]
    return _rows_to_csv(columns, rows)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise ValueError(f"unknown format {fmt!r}")
