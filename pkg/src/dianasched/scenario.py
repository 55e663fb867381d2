"""Scenario file parsing, validation and canonical serialization.

The format is line-oriented: one `key value` or record line per
statement, `#` comments, blank lines ignored.  See docs/scenario-format.md
for the full grammar.  Unknown keys are rejected and every validation
error names the offending line and field.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple, Union

from .baselines import QueueDiscipline, SchedulerKind
from .core import JobKind
from .costs import CostWeights
from .queueing import DEFAULT_BAND_BOUNDARIES

DemandSpec = Union[float, Tuple[float, float]]  # point value or uniform range


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class SiteDef:
    site_id: str
    nodes: int
    power: float


@dataclass(frozen=True)
class LinkDef:
    from_site: str
    to_site: str
    bandwidth: float
    latency: float = 0.0
    load: float = 0.0


@dataclass(frozen=True)
class UserDef:
    user_id: str
    quota: float


@dataclass(frozen=True)
class BurstDef:
    time: float
    user: str
    site: str
    count: int
    demand: DemandSpec  # MFLOP
    procs: int
    data: float  # bytes
    data_site: str
    kind: JobKind
    per_site: bool = False  # multiply count by the resolved site count


@dataclass(frozen=True)
class FaultDef:
    action: str  # crash | register | deregister
    site: str
    time: float


@dataclass
class Scenario:
    scheduler: SchedulerKind = SchedulerKind.DIANA
    queue: QueueDiscipline = QueueDiscipline.PRIORITY_MULTIQUEUE
    thrs: float = 0.3
    bands: Tuple[float, ...] = DEFAULT_BAND_BOUNDARIES
    batch_size: int = 10
    migration_cutoff: float = 0.0
    migration_enabled: bool = True
    poll_interval: float = 30.0
    echo_interval: float = 60.0
    echo_timeout: float = 5.0
    echo_retries: int = 1
    rate_interval: float = 10.0
    alpha: float = 0.2
    b_ref: float = 1000.0
    duration_cap: float = 0.0  # 0 disables the cap
    weights: Dict[JobKind, CostWeights] = field(default_factory=dict)
    sites: List[SiteDef] = field(default_factory=list)
    site_template: Optional[SiteDef] = None  # site_id is a name prefix
    site_count: int = 0
    default_link: Optional[LinkDef] = None
    links: List[LinkDef] = field(default_factory=list)
    users: List[UserDef] = field(default_factory=list)
    bursts: List[BurstDef] = field(default_factory=list)
    faults: List[FaultDef] = field(default_factory=list)

    def resolved_sites(self) -> List[SiteDef]:
        """Explicit sites plus the template expansion, in declaration order."""
        out = list(self.sites)
        if self.site_template is not None and self.site_count > 0:
            prefix = self.site_template.site_id
            out += [SiteDef(f"{prefix}{i:03d}", self.site_template.nodes,
                            self.site_template.power)
                    for i in range(1, self.site_count + 1)]
        return out

    def validate(self) -> None:
        site_ids = [s.site_id for s in self.resolved_sites()]
        if not site_ids:
            raise ScenarioError("scenario defines no sites")
        if len(set(site_ids)) != len(site_ids):
            raise ScenarioError("duplicate site ids")
        if not 0 <= self.thrs <= 1:
            raise ScenarioError(f"thrs {self.thrs} outside the [0, 1] interval")
        if self.alpha <= 0 or self.alpha > 1:
            raise ScenarioError(f"alpha {self.alpha} outside (0, 1]")
        for name, value in (("poll_interval", self.poll_interval),
                            ("echo_interval", self.echo_interval),
                            ("rate_interval", self.rate_interval)):
            if value <= 0:
                raise ScenarioError(f"{name} must be > 0, got {value}")
        if self.echo_timeout < 0:
            raise ScenarioError("echo_timeout must be >= 0")
        if self.batch_size < 1:
            raise ScenarioError("batch_size must be >= 1")
        if (self.queue is QueueDiscipline.PRIORITY_MULTIQUEUE
                and self.scheduler is not SchedulerKind.DIANA):
            raise ScenarioError("priority queue discipline requires the diana scheduler")
        known_sites = set(site_ids)
        for link in self.links:
            for end in (link.from_site, link.to_site):
                if end not in known_sites:
                    raise ScenarioError(f"link references undefined site {end!r}")
        users = {u.user_id for u in self.users}
        if len(users) != len(self.users):
            raise ScenarioError("duplicate user ids")
        for b in self.bursts:
            if b.user not in users:
                raise ScenarioError(f"burst references undefined user {b.user!r}")
            if b.site not in known_sites:
                raise ScenarioError(f"burst references undefined site {b.site!r}")
            if b.data_site not in known_sites:
                raise ScenarioError(f"burst data_site {b.data_site!r} is undefined")
            if b.count < 1:
                raise ScenarioError("burst count must be >= 1")
            if b.procs < 1:
                raise ScenarioError("burst procs must be >= 1")
        for f in self.faults:
            if f.site not in known_sites:
                raise ScenarioError(f"fault references undefined site {f.site!r}")
            if f.action not in ("crash", "register", "deregister"):
                raise ScenarioError(f"unknown fault action {f.action!r}")


_SCALAR_KEYS = {
    "scheduler": lambda v: SchedulerKind(v),
    "queue": lambda v: QueueDiscipline(v),
    "thrs": float,
    "batch_size": int,
    "migration_cutoff": float,
    "migration_enabled": lambda v: v in ("1", "true", "yes"),
    "poll_interval": float,
    "echo_interval": float,
    "echo_timeout": float,
    "echo_retries": int,
    "rate_interval": float,
    "alpha": float,
    "b_ref": float,
    "duration_cap": float,
    "site_count": int,
}


def _parse_kv(parts: List[str], required: List[str], lineno: int,
              optional: Optional[Dict[str, str]] = None) -> Dict[str, str]:
    got = dict(optional or {})
    seen = set()
    for part in parts:
        if "=" not in part:
            raise ScenarioError(f"line {lineno}: expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        if k not in required and k not in (optional or {}):
            raise ScenarioError(f"line {lineno}: unknown field {k!r}")
        got[k] = v
        seen.add(k)
    missing = [k for k in required if k not in seen]
    if missing:
        raise ScenarioError(f"line {lineno}: missing field(s) {', '.join(missing)}")
    return got


def _parse_demand(text: str, lineno: int) -> DemandSpec:
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo, hi = float(lo), float(hi)
        if hi < lo:
            raise ScenarioError(f"line {lineno}: demand range {text!r} is inverted")
        return (lo, hi)
    return float(text)


def parse_scenario(text: str) -> Scenario:
    """Parse and validate scenario text; errors carry line numbers."""
    from .presets import scenario_preset  # late import, presets build Scenarios

    scenario = Scenario()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key, args = parts[0], parts[1:]
        try:
            if key in _SCALAR_KEYS:
                if len(args) != 1:
                    raise ScenarioError(f"line {lineno}: {key} takes one value")
                setattr(scenario, key, _SCALAR_KEYS[key](args[0]))
            elif key == "preset":
                if len(args) != 1:
                    raise ScenarioError(f"line {lineno}: preset takes one name")
                scenario = scenario_preset(args[0])
            elif key == "bands":
                scenario.bands = tuple(float(a) for a in args)
            elif key == "weights":
                if len(args) != 4:
                    raise ScenarioError(f"line {lineno}: weights takes kind wc wd wn")
                kind = JobKind(args[0])
                scenario.weights[kind] = CostWeights(*(float(a) for a in args[1:]))
            elif key == "site":
                kv = _parse_kv(args[1:], ["nodes", "power"], lineno)
                scenario.sites.append(SiteDef(args[0], int(kv["nodes"]), float(kv["power"])))
            elif key == "site_template":
                kv = _parse_kv(args, ["nodes", "power"], lineno, {"prefix": "site"})
                scenario.site_template = SiteDef(kv["prefix"], int(kv["nodes"]),
                                                 float(kv["power"]))
            elif key == "default_link":
                kv = _parse_kv(args, ["bandwidth"], lineno, {"latency": "0", "load": "0"})
                scenario.default_link = LinkDef("*", "*", float(kv["bandwidth"]),
                                                float(kv["latency"]), float(kv["load"]))
            elif key == "link":
                if len(args) < 3:
                    raise ScenarioError(f"line {lineno}: link takes two sites plus fields")
                kv = _parse_kv(args[2:], ["bandwidth"], lineno, {"latency": "0", "load": "0"})
                scenario.links.append(LinkDef(args[0], args[1], float(kv["bandwidth"]),
                                              float(kv["latency"]), float(kv["load"])))
            elif key == "user":
                kv = _parse_kv(args[1:], ["quota"], lineno)
                scenario.users.append(UserDef(args[0], float(kv["quota"])))
            elif key == "burst":
                kv = _parse_kv(args, ["time", "user", "site", "count", "demand",
                                      "procs", "data_site"],
                               lineno, {"data": "0", "kind": "mixed",
                                        "per_site": "false"})
                scenario.bursts.append(BurstDef(
                    time=float(kv["time"]), user=kv["user"], site=kv["site"],
                    count=int(kv["count"]),
                    demand=_parse_demand(kv["demand"], lineno),
                    procs=int(kv["procs"]), data=float(kv["data"]),
                    data_site=kv["data_site"], kind=JobKind(kv["kind"]),
                    per_site=kv["per_site"] in ("1", "true", "yes")))
            elif key == "fault":
                if len(args) != 3:
                    raise ScenarioError(f"line {lineno}: fault takes action site time")
                scenario.faults.append(FaultDef(args[0], args[1], float(args[2])))
            else:
                raise ScenarioError(f"line {lineno}: unknown key {key!r}")
        except ScenarioError:
            raise
        except (ValueError, KeyError) as exc:
            raise ScenarioError(f"line {lineno}: invalid {key} entry: {exc}") from exc
    scenario.validate()
    return scenario


def _fmt(x: float) -> str:
    return format(x, ".12g")


def serialize_scenario(s: Scenario) -> str:
    """Canonical text form; parsing it back yields an equal Scenario."""
    lines = []
    lines.append(f"scheduler {s.scheduler.value}")
    lines.append(f"queue {s.queue.value}")
    for key in ("thrs", "migration_cutoff", "poll_interval", "echo_interval",
                "echo_timeout", "rate_interval", "alpha", "b_ref", "duration_cap"):
        lines.append(f"{key} {_fmt(getattr(s, key))}")
    lines.append(f"batch_size {s.batch_size}")
    lines.append(f"echo_retries {s.echo_retries}")
    lines.append(f"migration_enabled {'true' if s.migration_enabled else 'false'}")
    lines.append("bands " + " ".join(_fmt(b) for b in s.bands))
    for kind in JobKind:
        if kind in s.weights:
            w = s.weights[kind]
            lines.append(f"weights {kind.value} {_fmt(w.w_c)} {_fmt(w.w_d)} {_fmt(w.w_n)}")
    for site in s.sites:
        lines.append(f"site {site.site_id} nodes={site.nodes} power={_fmt(site.power)}")
    if s.site_template is not None:
        t = s.site_template
        lines.append(f"site_template prefix={t.site_id} nodes={t.nodes} power={_fmt(t.power)}")
        lines.append(f"site_count {s.site_count}")
    if s.default_link is not None:
        d = s.default_link
        lines.append(f"default_link bandwidth={_fmt(d.bandwidth)} "
                     f"latency={_fmt(d.latency)} load={_fmt(d.load)}")
    for link in s.links:
        lines.append(f"link {link.from_site} {link.to_site} "
                     f"bandwidth={_fmt(link.bandwidth)} latency={_fmt(link.latency)} "
                     f"load={_fmt(link.load)}")
    for user in s.users:
        lines.append(f"user {user.user_id} quota={_fmt(user.quota)}")
    for b in s.bursts:
        demand = (f"{_fmt(b.demand[0])}:{_fmt(b.demand[1])}"
                  if isinstance(b.demand, tuple) else _fmt(b.demand))
        lines.append(f"burst time={_fmt(b.time)} user={b.user} site={b.site} "
                     f"count={b.count} demand={demand} procs={b.procs} "
                     f"data={_fmt(b.data)} data_site={b.data_site} kind={b.kind.value}"
                     + (" per_site=true" if b.per_site else ""))
    for f in s.faults:
        lines.append(f"fault {f.action} {f.site} {_fmt(f.time)}")
    return "\n".join(lines) + "\n"
