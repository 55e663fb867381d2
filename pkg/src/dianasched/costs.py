"""Cost model behind site selection.

Computation cost, data-transfer cost and a bandwidth-normalized network
cost, combined into a weighted aggregate.  All formulas are deliberately
minimal and isolated here so alternates can be swapped without touching
the schedulers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import JobKind, JobSpec, NetworkLink, UnreachableSiteError, available_bandwidth

EPSILON = 1e-9  # guards the cold-start division before any job completes
REFERENCE_BANDWIDTH = 1000.0  # Mbps


@dataclass(frozen=True)
class CostWeights:
    w_c: float
    w_d: float
    w_n: float

    def __post_init__(self):
        if self.w_c < 0 or self.w_d < 0 or self.w_n < 0:
            raise ValueError("cost weights must be non-negative")
        if self.w_c + self.w_d + self.w_n <= 0:
            raise ValueError("at least one cost weight must be positive")


# Category presets; configurable per scenario.
PRESET_WEIGHTS = {
    JobKind.COMPUTE_INTENSIVE: CostWeights(1.0, 0.25, 0.25),
    JobKind.DATA_INTENSIVE: CostWeights(0.25, 1.0, 1.0),
    JobKind.MIXED: CostWeights(1.0, 1.0, 1.0),
}

UNIT_WEIGHTS = CostWeights(1.0, 1.0, 1.0)


@dataclass(frozen=True)
class CostBreakdown:
    compute_cost: float  # seconds
    transfer_cost: float  # seconds
    network_cost: float  # dimensionless
    total: float  # weighted aggregate, seconds


def compute_cost(job: JobSpec, site) -> float:
    """Service time on `site` plus the estimated wait behind its queues.

    `site` needs node_count, node_power, service_rate and backlog; both
    real SiteState values and peer-snapshot estimates qualify.
    """
    effective = site.node_power * min(job.processors_required, site.node_count)
    service = job.compute_demand / effective if job.compute_demand else 0.0
    delay = site.backlog / max(site.service_rate, EPSILON)
    return service + delay


def transfer_cost(job: JobSpec, source: str, dest: str,
                  link: Optional[NetworkLink]) -> float:
    """Seconds to move the job's input data from `source` to `dest`."""
    if source == dest:
        return 0.0
    if link is None:
        raise UnreachableSiteError(f"no link between {source} and {dest}")
    bits = job.data_size * 8.0
    return link.latency + bits / (available_bandwidth(link) * 1e6)


def network_cost(link: Optional[NetworkLink],
                 b_ref: float = REFERENCE_BANDWIDTH) -> float:
    """Reference bandwidth over available bandwidth; 0 for intra-site."""
    if link is None:
        return 0.0
    return b_ref / available_bandwidth(link)


def total_cost(job: JobSpec, site, link: Optional[NetworkLink],
               weights: CostWeights,
               b_ref: float = REFERENCE_BANDWIDTH) -> CostBreakdown:
    """Weighted aggregate of the three cost components for one candidate site.

    `link` is the path from the job's data site to the candidate (None when
    co-located).  Raises UnreachableSiteError when data cannot be staged.
    """
    c = compute_cost(job, site)
    d = transfer_cost(job, job.data_site, site.site_id, link)
    n = network_cost(link, b_ref)
    total = weights.w_c * c + weights.w_d * d + weights.w_n * n
    return CostBreakdown(c, d, n, total)
