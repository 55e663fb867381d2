"""Shared domain types and unit conventions.

All quantities use decimal units: 1 GB = 10^9 bytes, 1 Mbps = 10^6 bits/s,
1 MFLOP = 10^6 floating-point operations.  Durations are seconds of
simulated time throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sized

BYTES_PER_GB = 10**9
BITS_PER_MBPS = 10**6
FLOP_PER_MFLOP = 10**6


def gb_to_bytes(gb):
    return gb * BYTES_PER_GB


def bytes_to_gb(n):
    return n / BYTES_PER_GB


class JobKind(str, Enum):
    COMPUTE_INTENSIVE = "compute_intensive"
    DATA_INTENSIVE = "data_intensive"
    MIXED = "mixed"


@dataclass(frozen=True)
class JobSpec:
    """An abstract job: compute demand, processor need, and input data."""

    job_id: str
    user_id: str
    compute_demand: float  # MFLOP
    processors_required: int
    data_size: float  # bytes
    data_site: str
    submit_time: float
    kind: JobKind = JobKind.MIXED

    def __post_init__(self):
        if self.processors_required < 1:
            raise ValueError(f"job {self.job_id}: processors_required must be >= 1")
        if self.compute_demand < 0:
            raise ValueError(f"job {self.job_id}: compute_demand must be >= 0")
        if self.data_size < 0:
            raise ValueError(f"job {self.job_id}: data_size must be >= 0")


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    quota: float  # jobs permitted per quota period, used as a static weight

    def __post_init__(self):
        if self.quota <= 0:
            raise ValueError(f"user {self.user_id}: quota must be > 0")


@dataclass
class NetworkLink:
    from_site: str
    to_site: str
    bandwidth: float  # Mbps
    latency: float = 0.0  # seconds
    background_load: float = 0.0  # fraction of bandwidth in [0, 1)

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise ValueError("link bandwidth must be > 0")
        if self.latency < 0:
            raise ValueError("link latency must be >= 0")
        if not 0 <= self.background_load < 1:
            raise ValueError("link background_load must be in [0, 1)")


def available_bandwidth(link: NetworkLink) -> float:
    """Bandwidth left over after competing background traffic, in Mbps."""
    return link.bandwidth * (1.0 - link.background_load)


@dataclass
class SiteState:
    """Per-site resource view used by the cost model and the schedulers.

    ``local_queue`` holds jobs already allocated to the local resource
    manager; ``diana_queue`` is any sized container backing the
    meta-scheduler queue (None for bare sites in unit tests).
    """

    site_id: str
    node_count: int
    node_power: float  # MFLOPS per node
    local_queue: list = field(default_factory=list)
    diana_queue: Optional[Sized] = None
    arrival_rate: float = 0.0  # jobs/s, EWMA estimate
    service_rate: float = 0.0  # jobs/s, EWMA estimate

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError(f"site {self.site_id}: node_count must be >= 1")
        if self.node_power <= 0:
            raise ValueError(f"site {self.site_id}: node_power must be > 0")
        if self.arrival_rate < 0 or self.service_rate < 0:
            raise ValueError(f"site {self.site_id}: rates must be >= 0")

    @property
    def backlog(self) -> int:
        """Jobs waiting at this site: local queue plus meta-scheduler queue."""
        n = len(self.local_queue)
        if self.diana_queue is not None:
            n += len(self.diana_queue)
        return n


class RateEstimator:
    """Exponentially weighted moving average of an event rate.

    Updated once per measurement window with the count of events observed
    in that window; robust to burst arrivals (no per-event intervals).
    """

    def __init__(self, alpha: float = 0.2, initial: float = 0.0):
        if not 0 < alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        self.alpha = alpha
        self.value = initial

    def update(self, count: int, window: float) -> float:
        if window <= 0:
            raise ValueError("window must be > 0")
        self.value = self.alpha * (count / window) + (1 - self.alpha) * self.value
        return self.value


class UnreachableSiteError(Exception):
    """No network path exists between two distinct sites."""


class Topology:
    """Site and link lookup with an optional default link for absent pairs."""

    def __init__(self, sites, links=None, default_link: Optional[NetworkLink] = None):
        self.sites = {s.site_id: s for s in sites}
        self._links = {}
        for link in links or []:
            self._links[(link.from_site, link.to_site)] = link
            self._links[(link.to_site, link.from_site)] = link
        self.default_link = default_link

    def site_ids(self):
        return sorted(self.sites)

    def link_between(self, a: str, b: str) -> Optional[NetworkLink]:
        """Link connecting two sites; None when they are the same site."""
        if a == b:
            return None
        link = self._links.get((a, b))
        if link is not None:
            return link
        if self.default_link is not None:
            return NetworkLink(a, b, self.default_link.bandwidth,
                               self.default_link.latency,
                               self.default_link.background_load)
        raise UnreachableSiteError(f"no link between {a} and {b}")
