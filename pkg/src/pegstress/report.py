"""Stress-report assembly and rendering.

A report is two tables plus rail summaries and a provenance block:

- the outflow tail table (one row per redemption dataset: P95/24h, P99/24h,
  and the worst-hour proxy), and
- the baseline-vs-hybrid metric table (coverage ratios, gap, peg persistence,
  desk wait), each row carrying baseline, hybrid, delta = hybrid - baseline,
  and delta% = delta / baseline.

Rendering conventions: USD amounts display as round-half-up integers with
thousands separators; ratios at three decimals; bps, seconds, and percent at
one decimal with a trailing ".0" stripped (so -75.0% prints as -75% and
-22.9% keeps its decimal). An unstable queue has no finite wait: its cell
renders as the infinity sign and its delta as "Stabilized" when the hybrid
side is finite. Rendering is deterministic: the same report always produces
byte-identical output.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal

from .errors import ValidationError

SCHEMA_VERSION = "1"


def format_usd(x: float) -> str:
    """Integer-dollar display with commas, exact halves rounding up."""
    return f"{int(Decimal(repr(float(x))).quantize(Decimal('1'), rounding=ROUND_HALF_UP)):,}"


def format_1dp(x: float) -> str:
    """One decimal, trailing .0 stripped: 1219.0 -> '1219', 304.75 -> '304.8'."""
    s = f"{x:.1f}"
    return s[:-2] if s.endswith(".0") else s


@dataclass(frozen=True)
class OutflowRow:
    """One redemption dataset's tail estimates."""

    label: str
    p95_24h_usd: float
    p99_24h_usd: float
    q_1h_usd: float


@dataclass(frozen=True)
class MetricRow:
    """One baseline-vs-hybrid comparison line.

    baseline/hybrid are None for states with no finite value (an unstable
    queue). kind selects display formatting: ratio | usd | bps | seconds |
    count. delta and delta_pct are stored, not recomputed at render time, so
    a report is self-contained; ``audit`` re-derives them.
    """

    key: str
    label: str
    kind: str
    baseline: float | None
    hybrid: float | None
    delta: float | None
    delta_pct: float | None
    note: str = ""


def make_metric_row(key, label, kind, baseline, hybrid) -> MetricRow:
    delta = None
    delta_pct = None
    note = ""
    if baseline is None and hybrid is not None:
        note = "Stabilized"
    elif baseline is not None and hybrid is not None:
        delta = hybrid - baseline
        if baseline != 0 and math.isfinite(baseline):
            delta_pct = 100.0 * delta / baseline
    return MetricRow(key, label, kind, baseline, hybrid, delta, delta_pct, note)


@dataclass(frozen=True)
class StressReport:
    """Complete result of one scenario comparison run."""

    outflow_rows: tuple
    metric_rows: tuple
    rail_baseline: dict
    rail_hybrid: dict
    provenance: dict
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "outflow_rows": [asdict(r) for r in self.outflow_rows],
            "metric_rows": [asdict(r) for r in self.metric_rows],
            "rail_baseline": dict(self.rail_baseline),
            "rail_hybrid": dict(self.rail_hybrid),
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StressReport":
        return cls(
            outflow_rows=tuple(OutflowRow(**r) for r in data["outflow_rows"]),
            metric_rows=tuple(MetricRow(**r) for r in data["metric_rows"]),
            rail_baseline=dict(data["rail_baseline"]),
            rail_hybrid=dict(data["rail_hybrid"]),
            provenance=dict(data["provenance"]),
            schema_version=data["schema_version"],
        )


def audit(report: StressReport) -> None:
    """Re-derive every delta field from its baseline/hybrid pair.

    Raises ValidationError on any inconsistency; a clean pass means the
    stored deltas are exactly reproducible.
    """
    for row in report.metric_rows:
        fresh = make_metric_row(row.key, row.label, row.kind, row.baseline, row.hybrid)
        if (fresh.delta, fresh.delta_pct, fresh.note) != (row.delta, row.delta_pct, row.note):
            raise ValidationError(f"metric row {row.key!r} deltas are not reproducible")


def _format_value(kind: str, value: float | None) -> str:
    if value is None:
        return "∞"  # infinity sign for the no-finite-value state
    if kind == "ratio":
        return f"{value:.3f}"
    if kind == "usd":
        return format_usd(value)
    if kind == "count":
        return str(int(value))
    if kind in ("bps", "seconds"):
        return format_1dp(value)
    raise ValidationError(f"unknown metric kind {kind!r}")


def _delta_cells(row: MetricRow) -> tuple[str, str]:
    if row.note == "Stabilized":
        return "Stabilized", ""
    if row.delta is None:
        return "n/a", "n/a"
    if row.kind == "count":
        delta_str = str(int(row.delta))
    elif row.kind == "usd":
        delta_str = format_usd(row.delta)
    else:
        delta_str = format_1dp(row.delta)
    pct_str = format_1dp(row.delta_pct) + "%" if row.delta_pct is not None else "n/a"
    return delta_str, pct_str


def _outflow_table_rows(report: StressReport) -> list[list[str]]:
    rows = [["series", "p95_24h_usd", "p99_24h_usd", "q_1h_usd"]]
    for r in report.outflow_rows:
        rows.append(
            [r.label, format_usd(r.p95_24h_usd), format_usd(r.p99_24h_usd), format_usd(r.q_1h_usd)]
        )
    return rows


def _metric_table_rows(report: StressReport) -> list[list[str]]:
    rows = [["metric", "baseline", "hybrid", "delta", "delta_pct"]]
    for r in report.metric_rows:
        delta_str, pct_str = _delta_cells(r)
        rows.append(
            [r.label, _format_value(r.kind, r.baseline), _format_value(r.kind, r.hybrid), delta_str, pct_str]
        )
    return rows


def _render_text(report: StressReport) -> str:
    out = io.StringIO()

    def table(title, rows):
        widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
        out.write(title + "\n")
        for j, row in enumerate(rows):
            line = "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
            out.write(line + "\n")
            if j == 0:
                out.write("  ".join("-" * w for w in widths).rstrip() + "\n")
        out.write("\n")

    table("Outflow tail", _outflow_table_rows(report))
    table("Baseline vs hybrid", _metric_table_rows(report))
    out.write("Rail summaries\n")
    for name, summary in (("baseline", report.rail_baseline), ("hybrid", report.rail_hybrid)):
        out.write(
            f"{name}: shortfall_minutes={summary['shortfall_event_count']} "
            f"max_queue_usd={format_usd(summary['max_queue_usd'])} "
            f"max_wait_min={summary['max_customer_wait_minutes']} "
            f"queued_minutes={summary['total_queued_minutes']}\n"
        )
    return out.getvalue()


def _render_csv(report: StressReport) -> str:
    lines = []
    for rows in (_outflow_table_rows(report), _metric_table_rows(report)):
        for row in rows:
            lines.append(",".join('"' + c + '"' if "," in c else c for c in row))
        lines.append("")
    return "\n".join(lines) + "\n"


def render(report: StressReport, format: str = "text-table") -> bytes:
    """Serialize a report: ``json``, ``csv``, or ``text-table``."""
    if format == "json":
        return (json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n").encode()
    if format == "csv":
        return _render_csv(report).encode()
    if format == "text-table":
        return _render_text(report).encode()
    raise ValidationError(f"unknown render format {format!r}")
