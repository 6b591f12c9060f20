"""Deterministic report rendering: JSON documents, CSV tables, SVG charts.

Reports must be byte-identical across runs with the same configs, seeds,
and tool version, so no timestamps are embedded unless the caller opts in
via the AXACLIN_TIMESTAMP environment variable, and every float that
reaches a file goes through fixed-precision formatting.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

from . import __version__
from .audit import AuditPartition, RelevanceTable, alignment_metrics
from .core import FeatureSpace

PIE_COLORS = {
    "misclassified": "#c0392b",
    "misaligned": "#e67e22",
    "aligned": "#27ae60",
}
BAR_COLORS = {1: "#2980b9", 0: "#95a5a6"}


def run_manifest(
    dataset_config_hash: str,
    seeds: list[int],
    semantics: list[str],
    model_files: list[str],
) -> dict:
    manifest = {
        "tool": "axaclin",
        "version": __version__,
        "dataset_config_hash": dataset_config_hash,
        "seeds": sorted(seeds),
        "semantics": sorted(semantics),
        "model_files": sorted(model_files),
    }
    stamp = os.environ.get("AXACLIN_TIMESTAMP", "").strip()
    if stamp:
        manifest["timestamp"] = stamp
    return manifest


def write_json(path: str | Path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def audit_report_doc(
    p: AuditPartition, space: FeatureSpace, manifest: dict
) -> dict:
    rates = alignment_metrics(p)
    cases = []
    for group in (p.misclassified, p.misaligned, p.aligned):
        for rec in group:
            cases.append(
                {
                    "index": rec.index,
                    "values": list(rec.instance.values()),
                    "category": rec.category,
                    "witnesses": [e.literals.render(space) for e in rec.witnesses],
                }
            )
    cases.sort(key=lambda c: c["index"])
    return {
        "manifest": manifest,
        "model_id": p.model_id,
        "semantics": p.semantics,
        "critical_property": p.cr.render(space),
        "counts": p.counts(),
        "rates": {k: round(v, 6) for k, v in rates.items()},
        "cases": cases,
    }


def relevance_csv_text(
    tables: list[tuple[str, RelevanceTable]], space: FeatureSpace
) -> str:
    """Rows of (model, bit value) with one count column per feature."""
    header = ["model", "value"] + [f.name for f in space.features]
    lines = [",".join(header)]
    for label, table in tables:
        for value in (1, 0):
            cells = [str(table.count(i, value)) for i in range(space.n)]
            lines.append(",".join([label, str(value)] + cells))
    return "\n".join(lines) + "\n"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _pie_slice(cx, cy, r, start, frac, color, label):
    # start/frac are fractions of a full turn, measured clockwise from 12.
    if frac >= 1.0:
        return (
            f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="{color}">'
            f"<title>{label}</title></circle>"
        )
    a0 = 2.0 * math.pi * start - math.pi / 2.0
    a1 = 2.0 * math.pi * (start + frac) - math.pi / 2.0
    x0, y0 = cx + r * math.cos(a0), cy + r * math.sin(a0)
    x1, y1 = cx + r * math.cos(a1), cy + r * math.sin(a1)
    large = 1 if frac > 0.5 else 0
    return (
        f'<path d="M {_fmt(cx)} {_fmt(cy)} L {_fmt(x0)} {_fmt(y0)} '
        f'A {_fmt(r)} {_fmt(r)} 0 {large} 1 {_fmt(x1)} {_fmt(y1)} Z" '
        f'fill="{color}"><title>{label}</title></path>'
    )


def pie_svg(p: AuditPartition, title: str) -> str:
    """Pie chart of the audit partition with a text legend."""
    counts = p.counts()
    total = counts["total"]
    parts = []
    cx, cy, r = 130.0, 130.0, 100.0
    start = 0.0
    legend_y = 40
    legend = []
    for key in ("misclassified", "misaligned", "aligned"):
        c = counts[key]
        pct = 100.0 * c / total if total else 0.0
        color = PIE_COLORS[key]
        if c > 0 and total:
            frac = c / total
            parts.append(_pie_slice(cx, cy, r, start, frac, color, f"{key}: {c}"))
            start += frac
        legend.append(
            f'<rect x="270" y="{legend_y - 11}" width="12" height="12" fill="{color}"/>'
            f'<text x="288" y="{legend_y}" font-size="13">{key}: {c} ({pct:.1f}%)</text>'
        )
        legend_y += 22
    body = "\n".join(parts + legend)
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" width="480" height="260" '
        'font-family="sans-serif">\n'
        f'<text x="12" y="18" font-size="14" font-weight="bold">{title}</text>\n'
        f"{body}\n</svg>\n"
    )


def relevance_bar_svg(table: RelevanceTable, space: FeatureSpace, title: str) -> str:
    """Grouped bars per feature: literal counts at value 1 and value 0."""
    n = space.n
    peak = max([table.count(i, v) for i in range(n) for v in (1, 0)] + [1])
    chart_h, base_y, group_w = 150.0, 190.0, 46.0
    width = 40 + n * group_w + 150
    parts = []
    for i in range(n):
        gx = 40 + i * group_w
        for k, value in enumerate((1, 0)):
            c = table.count(i, value)
            h = chart_h * c / peak
            x = gx + k * 18
            parts.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(base_y - h)}" width="16" '
                f'height="{_fmt(h)}" fill="{BAR_COLORS[value]}">'
                f"<title>{space.features[i].name}={value}: {c}</title></rect>"
            )
        parts.append(
            f'<text x="{_fmt(gx + 18)}" y="208" font-size="11" '
            f'text-anchor="middle">{space.features[i].name}</text>'
        )
    lx = 40 + n * group_w + 20
    for k, value in enumerate((1, 0)):
        parts.append(
            f'<rect x="{lx}" y="{29 + 22 * k}" width="12" height="12" '
            f'fill="{BAR_COLORS[value]}"/>'
            f'<text x="{lx + 18}" y="{40 + 22 * k}" font-size="13">value {value}</text>'
        )
    body = "\n".join(parts)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(width)}" height="230" '
        'font-family="sans-serif">\n'
        f'<text x="12" y="18" font-size="14" font-weight="bold">{title}</text>\n'
        f"{body}\n</svg>\n"
    )


def mined_rules_doc(rules, space: FeatureSpace, manifest: dict, config) -> dict:
    return {
        "manifest": manifest,
        "mining_config": {
            "max_literals": config.max_literals,
            "min_positive_coverage": config.min_positive_coverage,
        },
        "rules": [
            {
                "conjunction": r.conjunction.render(space),
                "positive_coverage": r.positive_coverage,
                "negative_coverage": r.negative_coverage,
                "relative_coverage": round(r.relative_coverage, 6),
                "low_coverage": r.low_coverage,
            }
            for r in rules
        ],
    }
