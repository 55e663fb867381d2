"""CSV emission for runs and sweeps, plus run comparison.

Numeric fields are printed with six significant digits and no locale
dependence, so identical runs serialize to identical bytes.
"""

from __future__ import annotations

import copy
import csv
import io
import os
from typing import Dict, List, Optional, Sequence

from .baselines import QueueDiscipline, SchedulerKind
from .engine import RunResult, run_scenario
from .scenario import LinkDef, Scenario

JOBS_COLUMNS = ["job_id", "user", "site", "submit", "scheduled", "started",
                "completed", "queue_time", "exec_time", "migrations", "status"]

SUMMARY_COLUMNS = ["scheduler", "queue", "seed", "axis", "axis_value",
                   "submitted", "completed", "failed_unreachable",
                   "rejected_unschedulable", "pending", "mean_exec_time",
                   "total_exec_time", "mean_queue_time", "total_queue_time",
                   "mean_transfer_time", "message_count", "messages_per_job",
                   "makespan", "mean_utilization", "workload_hash"]

SWEEP_AXES = ("bandwidth", "sites", "scheduler")


def fmt_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".6g")
    return str(x)


def jobs_rows(result: RunResult) -> List[List[str]]:
    rows = []
    for rec in result.records():
        rows.append([
            rec.spec.job_id,
            rec.spec.user_id,
            rec.exec_site or "",
            fmt_value(rec.spec.submit_time),
            fmt_value(rec.scheduled),
            fmt_value(rec.started),
            fmt_value(rec.completed),
            fmt_value(rec.queue_time),
            fmt_value(rec.exec_time),
            str(rec.migrations),
            rec.status.value,
        ])
    return rows


def summary_row(result: RunResult, axis: str = "",
                axis_value: str = "") -> List[str]:
    s = result.summary()
    row = []
    for col in SUMMARY_COLUMNS:
        if col == "axis":
            row.append(axis)
        elif col == "axis_value":
            row.append(axis_value)
        else:
            row.append(fmt_value(s[col]))
    return row


def _write_csv(path: str, header: List[str], rows: List[List[str]]) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def read_csv(path: str) -> List[Dict[str, str]]:
    try:
        with open(path, newline="") as fh:
            return list(csv.DictReader(fh))
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc


def write_run(result: RunResult, out_dir: str) -> Dict[str, str]:
    """Write jobs.csv and summary.csv for a single run."""
    os.makedirs(out_dir, exist_ok=True)
    jobs_path = os.path.join(out_dir, "jobs.csv")
    summary_path = os.path.join(out_dir, "summary.csv")
    _write_csv(jobs_path, JOBS_COLUMNS, jobs_rows(result))
    _write_csv(summary_path, SUMMARY_COLUMNS, [summary_row(result)])
    return {"jobs": jobs_path, "summary": summary_path}


def apply_axis(scenario: Scenario, axis: str, value: str) -> Scenario:
    """Return a copy of the scenario with one sweep axis applied."""
    out = copy.deepcopy(scenario)
    if axis == "bandwidth":
        bw = float(value)
        if out.default_link is not None:
            d = out.default_link
            out.default_link = LinkDef(d.from_site, d.to_site, bw, d.latency, d.load)
        out.links = [LinkDef(l.from_site, l.to_site, bw, l.latency, l.load)
                     for l in out.links]
    elif axis == "sites":
        if out.site_template is None:
            raise ValueError("sites axis needs a site_template in the scenario")
        out.site_count = int(value)
    elif axis == "scheduler":
        out.scheduler = SchedulerKind(value)
        if (out.scheduler is not SchedulerKind.DIANA
                and out.queue is QueueDiscipline.PRIORITY_MULTIQUEUE):
            out.queue = QueueDiscipline.FCFS
    else:
        raise ValueError(f"unknown sweep axis {axis!r}; use one of {SWEEP_AXES}")
    out.validate()
    return out


def run_sweep(scenario: Scenario, axis: str, values: Sequence[str], seed: int,
              out_dir: Optional[str] = None) -> List[RunResult]:
    """One run per axis value; summary.csv gets one row per point."""
    results = []
    rows = []
    for value in values:
        result = run_scenario(apply_axis(scenario, axis, value), seed)
        results.append(result)
        rows.append(summary_row(result, axis=axis, axis_value=str(value)))
        if out_dir is not None:
            os.makedirs(out_dir, exist_ok=True)
            _write_csv(os.path.join(out_dir, f"jobs_{axis}_{value}.csv"),
                       JOBS_COLUMNS, jobs_rows(result))
    if out_dir is not None:
        _write_csv(os.path.join(out_dir, "summary.csv"), SUMMARY_COLUMNS, rows)
    return results


class CompareError(ValueError):
    pass


COMPARE_METRICS = ["mean_exec_time", "total_exec_time", "mean_queue_time",
                   "total_queue_time", "message_count", "messages_per_job",
                   "makespan"]


def compare(summaries: Sequence[Dict[str, str]]) -> str:
    """Side-by-side table of runs over the same workload, with ratios.

    Refuses to compare summaries whose workload hashes differ.
    """
    if len(summaries) < 2:
        raise CompareError("need at least two summaries to compare")
    hashes = {s["workload_hash"] for s in summaries}
    if len(hashes) != 1:
        raise CompareError(f"workload hash mismatch: {sorted(hashes)}")
    labels = [f"{s['scheduler']}/{s['queue']}" for s in summaries]
    width = max(18, *(len(l) + 2 for l in labels))
    out = io.StringIO()
    out.write("metric".ljust(22))
    for label in labels:
        out.write(label.rjust(width))
    out.write("\n")
    for metric in COMPARE_METRICS:
        out.write(metric.ljust(22))
        for s in summaries:
            out.write(s[metric].rjust(width))
        out.write("\n")
        base = float(summaries[0][metric])
        out.write((metric + " ratio").ljust(22))
        for s in summaries:
            ratio = float(s[metric]) / base if base else float("nan")
            out.write(format(ratio, ".4g").rjust(width))
        out.write("\n")
    return out.getvalue()
