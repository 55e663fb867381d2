"""Deterministic discrete-event simulator.

Single-threaded event loop over (time, seq)-ordered events; all
randomness comes from one seeded generator used only during workload
expansion, so identical (scenario, seed) pairs produce bit-identical
results.
"""

from __future__ import annotations

import hashlib
import heapq
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from .baselines import QueueDiscipline, SchedulerKind, flop_schedule, rr_schedule
from .core import (JobSpec, NetworkLink, RateEstimator, SiteState, Topology,
                   UnreachableSiteError, UserProfile)
from .costs import transfer_cost
from .discovery import PeerRegistry
from .queueing import (MultilevelQueue, QueueConfig, congestion_ratio,
                       is_congested)
from .scenario import Scenario, SiteDef
from .scheduler import PeerSnapshot, UnschedulableError, migrate_batch, schedule

# Stop tick rescheduling after this many consecutive ticks without any job
# progress; prevents a crashed-and-never-revived site from spinning the
# clock forever.
MAX_IDLE_TICKS = 2000


class JobStatus(str, Enum):
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED_UNREACHABLE = "failed_unreachable"
    REJECTED_UNSCHEDULABLE = "rejected_unschedulable"


@dataclass
class JobRecord:
    spec: JobSpec
    submit_site: str
    status: JobStatus = JobStatus.PENDING
    scheduled: Optional[float] = None  # placement decision time
    started: Optional[float] = None
    completed: Optional[float] = None
    exec_site: Optional[str] = None
    transfer_total: float = 0.0
    migrations: int = 0
    allocated_time: Optional[float] = None

    @property
    def queue_time(self) -> Optional[float]:
        if self.started is None:
            return None
        return self.started - self.spec.submit_time - self.transfer_total

    @property
    def exec_time(self) -> Optional[float]:
        if self.completed is None:
            return None
        return self.completed - self.spec.submit_time


class FcfsQueue:
    """Single queue in arrival order (dict insertion order)."""

    def __init__(self):
        self.jobs: Dict[str, JobSpec] = {}

    def __len__(self):
        return len(self.jobs)

    def __contains__(self, job_id):
        return job_id in self.jobs

    def add(self, job: JobSpec):
        self.jobs[job.job_id] = job

    def remove(self, job_id: str) -> JobSpec:
        return self.jobs.pop(job_id)

    def ordered(self) -> List[JobSpec]:
        return list(self.jobs.values())


class SjfQueue(FcfsQueue):
    """Shortest-job-first by processor requirement."""

    def ordered(self) -> List[JobSpec]:
        return sorted(self.jobs.values(),
                      key=lambda j: (j.processors_required, j.submit_time, j.job_id))


class SiteRuntime:
    def __init__(self, sdef: SiteDef, scenario: Scenario,
                 users: Dict[str, UserProfile], qconfig: QueueConfig):
        if scenario.queue is QueueDiscipline.PRIORITY_MULTIQUEUE:
            self.queue = MultilevelQueue(users, qconfig)
        elif scenario.queue is QueueDiscipline.SJF:
            self.queue = SjfQueue()
        else:
            self.queue = FcfsQueue()
        self.state = SiteState(site_id=sdef.site_id, node_count=sdef.nodes,
                               node_power=sdef.power, diana_queue=self.queue)
        self.idle_nodes = sdef.nodes
        self.crashed = False
        self.parked: List[str] = []  # job ids submitted while crashed
        self.snapshots: Dict[str, PeerSnapshot] = {}
        self.last_poll: Optional[float] = None
        self.arr_est = RateEstimator(scenario.alpha)
        self.svc_est = RateEstimator(scenario.alpha)
        self.arrivals_window = 0
        self.completions_window = 0
        self.busy_node_seconds = 0.0

    @property
    def site_id(self):
        return self.state.site_id

    @property
    def node_count(self):
        return self.state.node_count

    @property
    def node_power(self):
        return self.state.node_power


def generate_workload(scenario: Scenario,
                      seed: int) -> List[Tuple[JobSpec, str]]:
    """Expand the scenario's bursts into (job, submit site) pairs.

    Deterministic under the seed; job ids are sequential in declaration
    order so same-time bursts keep a stable ordering.
    """
    rng = random.Random(seed)
    site_count = len(scenario.resolved_sites())
    out = []
    counter = 0
    for burst in scenario.bursts:
        count = burst.count * (site_count if burst.per_site else 1)
        for _ in range(count):
            counter += 1
            if isinstance(burst.demand, tuple):
                lo, hi = burst.demand
                demand = lo if lo == hi else rng.uniform(lo, hi)
            else:
                demand = burst.demand
            job = JobSpec(job_id=f"j{counter:05d}", user_id=burst.user,
                          compute_demand=demand,
                          processors_required=burst.procs,
                          data_size=burst.data, data_site=burst.data_site,
                          submit_time=burst.time, kind=burst.kind)
            out.append((job, burst.site))
    return out


def workload_hash(jobs: List[Tuple[JobSpec, str]]) -> str:
    h = hashlib.sha256()
    for job, site in jobs:
        h.update(f"{job.job_id}|{job.user_id}|{job.compute_demand!r}|"
                 f"{job.processors_required}|{job.data_size!r}|{job.data_site}|"
                 f"{job.submit_time!r}|{job.kind.value}|{site}\n".encode())
    return h.hexdigest()[:16]


@dataclass
class RunResult:
    scenario: Scenario
    seed: int
    jobs: Dict[str, JobRecord]
    job_order: List[str]
    trace: List[dict]
    messages: int
    end_time: float
    utilization: Dict[str, float]
    workload_hash: str

    def records(self) -> List[JobRecord]:
        return [self.jobs[j] for j in self.job_order]

    def count(self, status: JobStatus) -> int:
        return sum(1 for r in self.jobs.values() if r.status is status)

    def summary(self) -> Dict[str, object]:
        done = [r for r in self.jobs.values() if r.status is JobStatus.COMPLETED]
        n = len(done)
        total_exec = sum(r.exec_time for r in done)
        total_queue = sum(r.queue_time for r in done)
        total_transfer = sum(r.transfer_total for r in done)
        submitted = len(self.jobs)
        mean_util = (sum(self.utilization.values()) / len(self.utilization)
                     if self.utilization else 0.0)
        return {
            "scheduler": self.scenario.scheduler.value,
            "queue": self.scenario.queue.value,
            "seed": self.seed,
            "submitted": submitted,
            "completed": n,
            "failed_unreachable": self.count(JobStatus.FAILED_UNREACHABLE),
            "rejected_unschedulable": self.count(JobStatus.REJECTED_UNSCHEDULABLE),
            "pending": sum(1 for r in self.jobs.values()
                           if r.status in (JobStatus.PENDING, JobStatus.RUNNING)),
            "mean_exec_time": total_exec / n if n else 0.0,
            "total_exec_time": total_exec,
            "mean_queue_time": total_queue / n if n else 0.0,
            "total_queue_time": total_queue,
            "mean_transfer_time": total_transfer / n if n else 0.0,
            "message_count": self.messages,
            "messages_per_job": self.messages / submitted if submitted else 0.0,
            "makespan": max((r.completed for r in done), default=0.0),
            "mean_utilization": mean_util,
            "workload_hash": self.workload_hash,
        }


class Simulation:
    """One deterministic run of a scenario under a seed."""

    def __init__(self, scenario: Scenario, seed: int):
        scenario.validate()
        self.scenario = scenario
        self.seed = seed
        self.now = 0.0
        self._seq = 0
        self._heap: List[tuple] = []
        self.trace: List[dict] = []
        self.messages = 0
        self.users = {u.user_id: UserProfile(u.user_id, u.quota)
                      for u in scenario.users}
        self.qconfig = QueueConfig(thrs=scenario.thrs,
                                   band_boundaries=scenario.bands,
                                   batch_size=scenario.batch_size,
                                   migration_cutoff=scenario.migration_cutoff)
        self.sites: Dict[str, SiteRuntime] = {}
        for sdef in scenario.resolved_sites():
            self.sites[sdef.site_id] = SiteRuntime(sdef, scenario, self.users,
                                                   self.qconfig)
        default = None
        if scenario.default_link is not None:
            d = scenario.default_link
            default = NetworkLink("*", "*", d.bandwidth, d.latency, d.load)
        links = [NetworkLink(l.from_site, l.to_site, l.bandwidth, l.latency,
                             l.load) for l in scenario.links]
        self.topology = Topology([s.state for s in self.sites.values()],
                                 links, default)
        self.registry = PeerRegistry(scenario.echo_interval,
                                     scenario.echo_timeout,
                                     scenario.echo_retries)
        for sid in self.sites:
            self.registry.register(sid, 0.0)
        self.workload = generate_workload(scenario, seed)
        self.workload_digest = workload_hash(self.workload)
        self.jobs: Dict[str, JobRecord] = {}
        self.job_order: List[str] = []
        self.pending = 0
        self.rr_cursor = 0
        self._idle_ticks = 0
        self._ran = False

    # -- event machinery ----------------------------------------------

    def _at(self, time: float, fn, *args) -> None:
        assert time >= self.now - 1e-12, "event scheduled in the past"
        self._seq += 1
        heapq.heappush(self._heap, (time, self._seq, fn, args))

    def _trace(self, kind: str, **data) -> None:
        entry = {"t": self.now, "kind": kind}
        entry.update(data)
        self.trace.append(entry)

    def run(self) -> RunResult:
        if self._ran:
            raise RuntimeError("Simulation instances are single-use")
        self._ran = True
        for job, site in self.workload:
            rec = JobRecord(spec=job, submit_site=site)
            self.jobs[job.job_id] = rec
            self.job_order.append(job.job_id)
            self.pending += 1
            self._at(job.submit_time, self._on_submit, rec)
        for fault in self.scenario.faults:
            self._at(fault.time, self._on_fault, fault)
        if self.jobs:
            self._at(self.scenario.rate_interval, self._on_rate_tick)
            self._at(self.scenario.echo_interval, self._on_echo_tick)
        cap = self.scenario.duration_cap
        while self._heap:
            time, _, fn, args = heapq.heappop(self._heap)
            if cap > 0 and time > cap:
                break
            assert time >= self.now - 1e-12
            self.now = max(self.now, time)
            fn(*args)
        util = {}
        horizon = self.now
        for sid, site in self.sites.items():
            cap_seconds = site.node_count * horizon
            util[sid] = site.busy_node_seconds / cap_seconds if cap_seconds else 0.0
        return RunResult(scenario=self.scenario, seed=self.seed,
                         jobs=self.jobs, job_order=self.job_order,
                         trace=self.trace, messages=self.messages,
                         end_time=self.now, utilization=util,
                         workload_hash=self.workload_digest)

    # -- job lifecycle -------------------------------------------------

    def _terminal(self, rec: JobRecord, status: JobStatus, **extra) -> None:
        rec.status = status
        self.pending -= 1
        self._idle_ticks = 0
        self._trace(status.value, job=rec.spec.job_id, **extra)

    def _on_submit(self, rec: JobRecord) -> None:
        self._idle_ticks = 0
        site = self.sites[rec.submit_site]
        site.arrivals_window += 1
        self._trace("submit", job=rec.spec.job_id, site=site.site_id)
        if site.crashed:
            site.parked.append(rec.spec.job_id)
            return
        self._place(rec)

    def _place(self, rec: JobRecord) -> None:
        job = rec.spec
        site = self.sites[rec.submit_site]
        kind = self.scenario.scheduler
        if not any(job.processors_required <= s.node_count
                   for s in self.sites.values()):
            self._terminal(rec, JobStatus.REJECTED_UNSCHEDULABLE)
            return
        if kind is SchedulerKind.ROUND_ROBIN:
            order = [s.site_id for s in map(lambda d: self.sites[d],
                                            sorted(self.sites))]
            chosen = None
            for _ in range(len(order)):
                cand, self.rr_cursor = rr_schedule(order, self.rr_cursor)
                if job.processors_required <= self.sites[cand].node_count:
                    chosen = cand
                    break
            assert chosen is not None
        elif kind is SchedulerKind.FLOP_GREEDY:
            # Polls every site for its current idle capacity, every job.
            self.messages += 2 * len(self.sites)
            fits = [s for s in self.sites.values()
                    if job.processors_required <= s.node_count]
            chosen = flop_schedule(job, fits)
        else:
            self._maybe_poll(site)
            peers = self._peer_estimates(site)
            try:
                decision = schedule(job, site.state, peers, self.topology,
                                    b_ref=self.scenario.b_ref,
                                    weight_overrides=self.scenario.weights)
            except UnschedulableError:
                self._terminal(rec, JobStatus.REJECTED_UNSCHEDULABLE)
                return
            except UnreachableSiteError:
                self._terminal(rec, JobStatus.FAILED_UNREACHABLE)
                return
            chosen = decision.chosen_site
            if chosen != site.site_id and chosen in site.snapshots:
                site.snapshots[chosen].sent_since += 1
        rec.scheduled = self.now
        self._send(rec, chosen, migration=False)

    def _send(self, rec: JobRecord, dest: str, migration: bool) -> None:
        """Move a job (and stage its data) to `dest`, then enqueue it there."""
        job = rec.spec
        delay = 0.0
        if job.data_site != dest:
            try:
                link = self.topology.link_between(job.data_site, dest)
            except UnreachableSiteError:
                self._terminal(rec, JobStatus.FAILED_UNREACHABLE, dest=dest)
                return
            delay = transfer_cost(job, job.data_site, dest, link)
            rec.transfer_total += delay
        self._trace("migrate" if migration else "place", job=job.job_id,
                    dest=dest, transfer=delay)
        self._at(self.now + delay, self._on_arrival, rec, dest)

    def _on_arrival(self, rec: JobRecord, dest: str) -> None:
        self._idle_ticks = 0
        site = self.sites[dest]
        if isinstance(site.queue, MultilevelQueue):
            site.queue.enqueue(rec.spec)
        else:
            site.queue.add(rec.spec)
        self._try_allocate(site)

    def _try_allocate(self, site: SiteRuntime) -> None:
        if site.crashed:
            return
        while len(site.queue):
            head = site.queue.ordered()[0]
            if head.processors_required > site.idle_nodes:
                break  # head-of-line blocking, no backfilling
            site.queue.remove(head.job_id)
            rec = self.jobs[head.job_id]
            rec.allocated_time = self.now
            rec.started = self.now
            rec.exec_site = site.site_id
            rec.status = JobStatus.RUNNING
            site.idle_nodes -= head.processors_required
            site.state.local_queue.append(head.job_id)
            duration = (head.compute_demand /
                        (site.node_power * head.processors_required)
                        if head.compute_demand else 0.0)
            self._trace("allocate", job=head.job_id, site=site.site_id,
                        duration=duration)
            self._at(self.now + duration, self._on_complete, rec, duration)

    def _on_complete(self, rec: JobRecord, duration: float) -> None:
        site = self.sites[rec.exec_site]
        rec.completed = self.now
        site.idle_nodes += rec.spec.processors_required
        site.state.local_queue.remove(rec.spec.job_id)
        site.completions_window += 1
        site.busy_node_seconds += duration * rec.spec.processors_required
        self._terminal(rec, JobStatus.COMPLETED, site=site.site_id)
        self._try_allocate(site)

    # -- peer communication --------------------------------------------

    def _maybe_poll(self, site: SiteRuntime, force: bool = False,
                    reference_priority: Optional[float] = None) -> None:
        """Rate-limited poll of discovery plus every alive peer.

        Polling is demand-driven: it only happens from scheduling or
        migration events, never per job (the interval gate amortizes it).
        """
        if site.crashed:
            return
        interval = self.scenario.poll_interval
        if (not force and site.last_poll is not None
                and self.now - site.last_poll < interval):
            return
        site.last_poll = self.now
        self.messages += 2  # discovery request/reply
        alive = self.registry.list_peers(site.site_id)
        for sid in list(site.snapshots):
            if sid not in alive:
                del site.snapshots[sid]
        for sid in alive:
            peer = self.sites[sid]
            if peer.crashed:
                self.messages += 1  # request sent, no reply
                continue
            self.messages += 2
            ahead = 0
            if (reference_priority is not None
                    and isinstance(peer.queue, MultilevelQueue)):
                ahead = peer.queue.jobs_ahead(reference_priority)
            site.snapshots[sid] = PeerSnapshot(
                site_id=sid, node_count=peer.node_count,
                node_power=peer.node_power,
                diana_queue_length=len(peer.queue),
                local_queue_length=len(peer.state.local_queue),
                service_rate=peer.svc_est.value,
                snapshot_time=self.now, jobs_ahead=ahead)
        self._trace("poll", site=site.site_id, peers=len(site.snapshots))

    def _peer_estimates(self, site: SiteRuntime) -> List[PeerSnapshot]:
        """Fresh snapshots of peers the registry still considers alive."""
        horizon = 2 * self.scenario.poll_interval
        return [snap.as_of(self.now)
                for sid, snap in sorted(site.snapshots.items())
                if self.now - snap.snapshot_time <= horizon
                and self.registry.is_alive(sid)]

    # -- periodic ticks ------------------------------------------------

    def _on_rate_tick(self) -> None:
        window = self.scenario.rate_interval
        for sid in sorted(self.sites):
            site = self.sites[sid]
            if site.crashed:
                site.arrivals_window = 0
                site.completions_window = 0
                continue
            site.state.arrival_rate = site.arr_est.update(site.arrivals_window, window)
            site.state.service_rate = site.svc_est.update(site.completions_window, window)
            site.arrivals_window = 0
            site.completions_window = 0
            self._check_congestion(site)
        self._idle_ticks += 1
        if self.pending > 0 and self._idle_ticks < MAX_IDLE_TICKS:
            self._at(self.now + window, self._on_rate_tick)

    def _check_congestion(self, site: SiteRuntime) -> None:
        if (self.scenario.scheduler is not SchedulerKind.DIANA
                or not self.scenario.migration_enabled
                or not isinstance(site.queue, MultilevelQueue)):
            return
        ratio = congestion_ratio(site.state.arrival_rate,
                                 site.state.service_rate)
        if not is_congested(ratio, self.qconfig) or not len(site.queue):
            return
        cands = site.queue.migration_candidates()
        if not cands:
            return
        ref_pr = max(site.queue.priorities[c] for c in cands)
        self._maybe_poll(site, force=True, reference_priority=ref_pr)
        peers = self._peer_estimates(site)
        if not peers:
            return
        batch = [site.queue.jobs[c] for c in cands]
        local_ahead = site.queue.jobs_ahead(ref_pr)
        target = migrate_batch(batch, site.state, local_ahead, peers,
                               self.topology, self.scenario.b_ref)
        if target is None:
            self._trace("migration_stay_local", site=site.site_id,
                        batch=len(batch), ratio=ratio)
            return
        self._idle_ticks = 0
        # Selection-time priorities; removals below reprioritize the rest.
        picked_pr = {jid: site.queue.priorities[jid] for jid in cands}
        for jid in cands:
            pr = picked_pr[jid]
            site.queue.remove(jid)
            rec = self.jobs[jid]
            rec.migrations += 1
            self._trace("migration_pick", job=jid, source=site.site_id,
                        dest=target, priority=pr, ratio=ratio)
            if target in site.snapshots:
                site.snapshots[target].sent_since += 1
            self._send(rec, target, migration=True)

    def _on_echo_tick(self) -> None:
        responder = lambda sid: not self.sites[sid].crashed
        alive = self.registry.list_peers()
        for sid in alive:
            self.messages += 2 if responder(sid) else 1
        removed = self.registry.echo_sweep(self.now, responder)
        for sid in removed:
            # Discovery pushes the removal to the surviving sites so none
            # keeps exporting to a dead peer on a stale snapshot.
            survivors = self.registry.list_peers()
            self.messages += len(survivors)
            for other in survivors:
                self.sites[other].snapshots.pop(sid, None)
            self._trace("peer_removed", site=sid)
        if self.pending > 0 and self._idle_ticks < MAX_IDLE_TICKS:
            self._at(self.now + self.scenario.echo_interval, self._on_echo_tick)

    # -- faults --------------------------------------------------------

    def _on_fault(self, fault) -> None:
        site = self.sites[fault.site]
        if fault.action == "crash":
            site.crashed = True
            self._trace("crash", site=fault.site)
        elif fault.action == "deregister":
            self.registry.deregister(fault.site)
            for other in self.registry.list_peers():
                self.sites[other].snapshots.pop(fault.site, None)
            self._trace("peer_deregistered", site=fault.site)
        elif fault.action == "register":
            site.crashed = False
            self.registry.register(fault.site, self.now)
            self._trace("peer_registered", site=fault.site)
            self._idle_ticks = 0
            parked, site.parked = site.parked, []
            for jid in parked:
                self._place(self.jobs[jid])
            self._try_allocate(site)


def run_scenario(scenario: Scenario, seed: int) -> RunResult:
    return Simulation(scenario, seed).run()
