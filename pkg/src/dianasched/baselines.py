"""Baseline placement policies and queue orderings used for comparison.

Round Robin ignores cost, queues and network conditions entirely; the
FLOP-greedy policy polls every site before every decision and grabs the
most powerful idle capacity.
"""

from __future__ import annotations

from enum import Enum
from typing import List, Sequence, Tuple

from .core import JobSpec


class SchedulerKind(str, Enum):
    DIANA = "diana"
    ROUND_ROBIN = "round_robin"
    FLOP_GREEDY = "flop_greedy"


class QueueDiscipline(str, Enum):
    FCFS = "fcfs"
    SJF = "sjf"
    PRIORITY_MULTIQUEUE = "priority"


def rr_schedule(sites: Sequence[str], cursor: int) -> Tuple[str, int]:
    """Next site in cyclic order; returns (site, advanced cursor)."""
    if not sites:
        raise ValueError("site list must be nonempty")
    return sites[cursor % len(sites)], (cursor + 1) % len(sites)


def flop_schedule(job: JobSpec, sites: Sequence) -> str:
    """Site with the most idle capacity (node_power * idle_nodes).

    `sites` are objects with site_id, node_power and idle_nodes.  Ties
    break to the lexically smallest site id.
    """
    if not sites:
        raise ValueError("site list must be nonempty")
    best = min(sites, key=lambda s: (-(s.node_power * s.idle_nodes), s.site_id))
    return best.site_id


def sjf_order(jobs: Sequence[JobSpec]) -> List[JobSpec]:
    """Ascending by processors required; ties by submit time then job id."""
    return sorted(jobs, key=lambda j: (j.processors_required, j.submit_time, j.job_id))


def fcfs_order(jobs: Sequence[JobSpec]) -> List[JobSpec]:
    """Submission order; ties by job id."""
    return sorted(jobs, key=lambda j: (j.submit_time, j.job_id))
