"""Latency/throughput reporting, requirement checks, CSV emission.

Throughput is the symbol rate the deployment sustains in steady state:
the system clock divided by the span of its slowest stage. A stage is a
task in cases I/II (the whole chain counts as one stage in case I) and a
core group in case III, where the pipelined deinterleave+demap pair drains
as one unit. Latency checks compare against an LTE-class budget: one
symbol per 83 us, at most 100 us through the chain.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .deploy import DeploymentPlan
from .engine import Timeline
from .mesh import MeshConfig

SYMBOL_PERIOD_US = 83.0
LATENCY_BUDGET_US = 100.0

CSV_SCHEMAS = {
    "case_report": [
        "case", "ifft_cycles", "deint_cycles", "demap_cycles", "total_cycles",
        "bottleneck_cycles", "throughput_sps", "latency_us",
        "meets_throughput_budget", "meets_latency_budget",
    ],
    "ifft_sweep": ["n_cores", "cycles"],
    "blocksize_sweep": ["block_size", "cycles"],
}


class MissingProbeError(KeyError):
    """The timeline lacks a probe the plan's metering expects."""


@dataclass(frozen=True)
class CaseReport:
    case: str
    task_cycles: dict[str, int]
    total_cycles: int
    bottleneck_cycles: int
    throughput_sps: int
    latency_us: float
    meets_throughput_budget: bool
    meets_latency_budget: bool


def _span(timeline: Timeline, start: str, end: str) -> int:
    try:
        return timeline.probe_cycle(end) - timeline.probe_cycle(start)
    except KeyError as exc:
        raise MissingProbeError(str(exc)) from None


def total_latency(timeline: Timeline, plan: DeploymentPlan) -> int:
    """First-input-to-last-output span for one symbol."""
    if not plan.programs:
        return 0
    return _span(timeline, "chain_start", "chain_end")


def stage_spans(timeline: Timeline, plan: DeploymentPlan) -> dict[str, int]:
    return {s.name: _span(timeline, s.start, s.end) for s in plan.task_spans}


def throughput_sps(bottleneck_cycles: int, clock_hz: float) -> int:
    """Symbols per second, rounded to nearest (halves up)."""
    if bottleneck_cycles <= 0:
        raise ValueError("bottleneck cycles must be positive")
    return int(clock_hz / bottleneck_cycles + 0.5)


def cycles_to_us(cycles: int, clock_hz: float) -> float:
    return cycles / clock_hz * 1e6


def build_report(plan: DeploymentPlan, timeline: Timeline, cfg: MeshConfig) -> CaseReport:
    total = total_latency(timeline, plan)
    bottleneck = max(_span(timeline, s.start, s.end) for s in plan.throughput_spans)
    latency_us = cycles_to_us(total, cfg.clock_hz)
    return CaseReport(
        case=plan.case,
        task_cycles=stage_spans(timeline, plan),
        total_cycles=total,
        bottleneck_cycles=bottleneck,
        throughput_sps=throughput_sps(bottleneck, cfg.clock_hz),
        latency_us=latency_us,
        meets_throughput_budget=cycles_to_us(bottleneck, cfg.clock_hz) <= SYMBOL_PERIOD_US,
        meets_latency_budget=latency_us <= LATENCY_BUDGET_US,
    )


def report_row(report: CaseReport) -> dict[str, object]:
    """Flatten a CaseReport into a case_report CSV row."""
    tasks = report.task_cycles
    if "deint+demap" in tasks:  # pipelined pair measured as one stage
        deint, demap = tasks["deint+demap"], ""
    else:
        deint, demap = tasks["deint"], tasks["demap"]
    return {
        "case": report.case,
        "ifft_cycles": tasks["ifft"],
        "deint_cycles": deint,
        "demap_cycles": demap,
        "total_cycles": report.total_cycles,
        "bottleneck_cycles": report.bottleneck_cycles,
        "throughput_sps": report.throughput_sps,
        "latency_us": f"{report.latency_us:.3f}",
        "meets_throughput_budget": int(report.meets_throughput_budget),
        "meets_latency_budget": int(report.meets_latency_budget),
    }


def format_csv(records: list[dict], schema: str) -> str:
    """Render records under a named schema; byte-deterministic."""
    try:
        columns = CSV_SCHEMAS[schema]
    except KeyError:
        raise ValueError(f"unknown CSV schema {schema!r}") from None
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        if set(rec) != set(columns):
            raise ValueError(f"record fields {sorted(rec)} do not match schema {schema!r}")
        writer.writerow(rec)
    return buf.getvalue()


def write_csv(records: list[dict], schema: str, path: str) -> None:
    text = format_csv(records, schema)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def sweep_rows(pairs: list[tuple[int, int]], key: str) -> list[dict]:
    return [{key: a, "cycles": b} for a, b in pairs]
