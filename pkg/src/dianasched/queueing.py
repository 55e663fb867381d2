"""Quota-weighted multi-queue priority management for bulk submissions.

Every queued job carries a priority in [-1, 1] derived from its owner's
quota and the aggregate load already queued.  Priorities of *all* jobs
are recomputed on every arrival and departure (reprioritization), which
removes any need for aging.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .core import JobSpec, UserProfile

DEFAULT_BAND_BOUNDARIES = (1.0, 0.5, 0.0, -0.5, -1.0)


@dataclass(frozen=True)
class PriorityInputs:
    """The aggregate counts behind one job's priority.

    n: jobs of this user across all queues, including the new job.
    t: processors required by the new job.
    T: processors required by all queued jobs, including t.
    q: this user's quota.
    Q: sum of quotas of users with queued jobs (each counted once).
    L: total jobs across all queues, including the new job.
    """

    n: int
    t: int
    T: int
    q: float
    Q: float
    L: int

    def __post_init__(self):
        if not 1 <= self.n <= self.L:
            raise ValueError("need 1 <= n <= L")
        if not 1 <= self.t <= self.T:
            raise ValueError("need 1 <= t <= T")
        if not 0 < self.q <= self.Q:
            raise ValueError("need 0 < q <= Q")


def threshold(inputs: PriorityInputs) -> float:
    """Dynamic per-job threshold N = (q * T) / (Q * t)."""
    if inputs.t == 0 or inputs.Q == 0:
        raise ZeroDivisionError("t and Q must be nonzero")
    return (inputs.q * inputs.T) / (inputs.Q * inputs.t)


def priority(n: int, big_n: float) -> float:
    """Two-branch priority rule; non-negative exactly when n <= N."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if big_n <= 0:
        raise ValueError("N must be > 0")
    if n <= big_n:
        return (big_n - n) / big_n
    return (big_n - n) / n


@dataclass
class QueueConfig:
    thrs: float = 0.3  # congestion threshold, administrator-configurable
    band_boundaries: Tuple[float, ...] = DEFAULT_BAND_BOUNDARIES
    batch_size: int = 10
    migration_cutoff: float = 0.0  # only jobs with priority < cutoff migrate

    def __post_init__(self):
        if not 0 <= self.thrs <= 1:
            raise ValueError("thrs must be in [0, 1]")
        b = self.band_boundaries
        if len(b) < 2 or any(b[i] <= b[i + 1] for i in range(len(b) - 1)):
            raise ValueError("band_boundaries must be strictly descending")
        if b[0] > 1 or b[-1] < -1:
            raise ValueError("band_boundaries must lie within [-1, 1]")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


class DuplicateJobError(Exception):
    pass


class MultilevelQueue:
    """The per-site meta-scheduler queue with priority bands.

    Aggregates (per-user counts, T, Q, L) are maintained incrementally and
    must always match a from-scratch recomputation; the test suite checks
    that equivalence after random operation sequences.
    """

    def __init__(self, users: Mapping[str, UserProfile],
                 config: Optional[QueueConfig] = None):
        self.users = users
        self.config = config or QueueConfig()
        self.jobs: Dict[str, JobSpec] = {}
        self.priorities: Dict[str, float] = {}
        self._user_counts: Dict[str, int] = {}
        self._total_processors = 0

    def __len__(self) -> int:
        return len(self.jobs)

    def __contains__(self, job_id: str) -> bool:
        return job_id in self.jobs

    # -- aggregates ----------------------------------------------------

    @property
    def total_jobs(self) -> int:
        return len(self.jobs)

    @property
    def total_processors(self) -> int:
        return self._total_processors

    @property
    def quota_sum(self) -> float:
        return sum(self.users[u].quota for u in self._user_counts)

    def user_count(self, user_id: str) -> int:
        return self._user_counts.get(user_id, 0)

    def inputs_for(self, job: JobSpec) -> PriorityInputs:
        return PriorityInputs(
            n=self._user_counts[job.user_id],
            t=job.processors_required,
            T=self._total_processors,
            q=self.users[job.user_id].quota,
            Q=self.quota_sum,
            L=len(self.jobs),
        )

    # -- transitions ---------------------------------------------------

    def enqueue(self, job: JobSpec) -> float:
        """Add a job, reprioritize everything, return the job's priority."""
        if job.job_id in self.jobs:
            raise DuplicateJobError(job.job_id)
        if job.user_id not in self.users:
            raise KeyError(f"unknown user {job.user_id}")
        self.jobs[job.job_id] = job
        self._user_counts[job.user_id] = self._user_counts.get(job.user_id, 0) + 1
        self._total_processors += job.processors_required
        self.reprioritize()
        return self.priorities[job.job_id]

    def remove(self, job_id: str) -> JobSpec:
        job = self.jobs.pop(job_id)
        self._user_counts[job.user_id] -= 1
        if self._user_counts[job.user_id] == 0:
            del self._user_counts[job.user_id]
        self._total_processors -= job.processors_required
        self.reprioritize()
        return job

    def reprioritize(self) -> None:
        """Recompute every job's priority from the current aggregates.

        Idempotent: priorities are a pure function of the queued multiset
        and the user profiles.
        """
        self.priorities = {}
        if not self.jobs:
            return
        big_q = self.quota_sum
        big_t = self._total_processors
        for job in self.jobs.values():
            n = self._user_counts[job.user_id]
            big_n = (self.users[job.user_id].quota * big_t) / (big_q * job.processors_required)
            self.priorities[job.job_id] = priority(n, big_n)

    # -- views ---------------------------------------------------------

    def _sort_key(self, job_id: str):
        job = self.jobs[job_id]
        return (-self.priorities[job_id], job.submit_time, job.job_id)

    def ordered(self) -> List[JobSpec]:
        """All queued jobs in descending priority order, deterministic."""
        return [self.jobs[j] for j in sorted(self.jobs, key=self._sort_key)]

    def bands(self) -> List[List[str]]:
        """Job ids binned into priority bands, each band in queue order.

        Band i covers (boundaries[i+1], boundaries[i]]; the last band is
        closed at -1.
        """
        bounds = self.config.band_boundaries
        out: List[List[str]] = [[] for _ in range(len(bounds) - 1)]
        for job in self.ordered():
            p = self.priorities[job.job_id]
            for i in range(len(bounds) - 1):
                if p > bounds[i + 1] or i == len(bounds) - 2:
                    out[i].append(job.job_id)
                    break
        return out

    def jobs_ahead(self, probe_priority: float) -> int:
        """Queued jobs strictly ahead of a job with the probed priority."""
        return sum(1 for p in self.priorities.values() if p > probe_priority)

    def migration_candidates(self, batch_size: Optional[int] = None,
                             cutoff: Optional[float] = None) -> List[str]:
        """Lowest-priority job ids below the migration cutoff, worst first."""
        if batch_size is None:
            batch_size = self.config.batch_size
        if cutoff is None:
            cutoff = self.config.migration_cutoff
        if batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        tail = [j for j in sorted(self.jobs, key=self._sort_key, reverse=True)
                if self.priorities[j] < cutoff]
        return tail[:batch_size]


def congestion_ratio(arrival_rate: float, service_rate: float) -> float:
    """(arrival - service) / arrival; 0 for an idle site (no arrivals)."""
    if arrival_rate == 0:
        return 0.0
    return (arrival_rate - service_rate) / arrival_rate


def is_congested(ratio: float, config: QueueConfig) -> bool:
    return ratio > config.thrs
