"""Scenario parsing, validation and canonical serialization."""

import pytest

from dianasched.baselines import QueueDiscipline, SchedulerKind
from dianasched.core import JobKind
from dianasched.presets import PRESET_NAMES, scenario_preset
from dianasched.scenario import (Scenario, ScenarioError, parse_scenario,
                                 serialize_scenario)

MINIMAL = """
site s1 nodes=2 power=1.0
user alice quota=1
burst time=0 user=alice site=s1 count=1 demand=5 procs=1 data_site=s1
"""


class TestParsing:
    def test_minimal_scenario(self):
        s = parse_scenario(MINIMAL)
        assert s.sites[0].site_id == "s1"
        assert s.users[0].quota == 1.0
        assert s.bursts[0].demand == 5.0

    def test_comments_and_blanks_ignored(self):
        s = parse_scenario("# header\n\n" + MINIMAL + "\nthrs 0.4  # inline\n")
        assert s.thrs == 0.4

    def test_demand_range(self):
        s = parse_scenario(MINIMAL.replace("demand=5", "demand=5:30"))
        assert s.bursts[0].demand == (5.0, 30.0)

    def test_inverted_demand_range_rejected(self):
        with pytest.raises(ScenarioError, match="inverted"):
            parse_scenario(MINIMAL.replace("demand=5", "demand=30:5"))

    def test_unknown_key_names_line(self):
        with pytest.raises(ScenarioError, match="line 1"):
            parse_scenario("frobnicate 3\n" + MINIMAL)

    def test_unknown_burst_field_rejected(self):
        with pytest.raises(ScenarioError, match="color"):
            parse_scenario(MINIMAL.replace("procs=1", "procs=1 color=red"))

    def test_missing_burst_field_named(self):
        with pytest.raises(ScenarioError, match="procs"):
            parse_scenario(MINIMAL.replace(" procs=1", ""))

    def test_scheduler_and_queue_keys(self):
        s = parse_scenario("scheduler round_robin\nqueue sjf\n" + MINIMAL)
        assert s.scheduler is SchedulerKind.ROUND_ROBIN
        assert s.queue is QueueDiscipline.SJF

    def test_weights_key(self):
        s = parse_scenario("weights mixed 2 0.5 0\n" + MINIMAL)
        w = s.weights[JobKind.MIXED]
        assert (w.w_c, w.w_d, w.w_n) == (2.0, 0.5, 0.0)

    def test_site_template_expansion(self):
        s = parse_scenario(
            "site_template prefix=node nodes=5 power=2\nsite_count 3\n"
            "user u quota=1\n"
            "burst time=0 user=u site=node001 count=1 demand=1 procs=1"
            " data_site=node001\n")
        ids = [d.site_id for d in s.resolved_sites()]
        assert ids == ["node001", "node002", "node003"]

    def test_fault_lines(self):
        s = parse_scenario(MINIMAL + "fault crash s1 10\nfault register s1 60\n")
        assert [(f.action, f.site, f.time) for f in s.faults] == \
            [("crash", "s1", 10.0), ("register", "s1", 60.0)]

    def test_preset_key_loads_preset(self):
        s = parse_scenario("preset P1\n")
        assert len(s.bursts) == 200
        assert s.sites[0].site_id == "site1"


class TestValidation:
    def test_thrs_out_of_bounds_names_field_and_interval(self):
        with pytest.raises(ScenarioError, match=r"thrs.*\[0, 1\]"):
            parse_scenario("thrs 1.5\n" + MINIMAL)

    def test_link_to_undefined_site(self):
        with pytest.raises(ScenarioError, match="undefined site 'ghost'"):
            parse_scenario(MINIMAL + "link s1 ghost bandwidth=100\n")

    def test_burst_with_unknown_user(self):
        with pytest.raises(ScenarioError, match="undefined user"):
            parse_scenario(MINIMAL.replace("user=alice", "user=bob"))

    def test_no_sites(self):
        with pytest.raises(ScenarioError, match="no sites"):
            parse_scenario("thrs 0.3\n")

    def test_duplicate_sites(self):
        with pytest.raises(ScenarioError, match="duplicate site"):
            parse_scenario("site s1 nodes=1 power=1\n" + MINIMAL)

    def test_priority_queue_needs_diana(self):
        with pytest.raises(ScenarioError, match="priority queue"):
            parse_scenario("scheduler round_robin\nqueue priority\n" + MINIMAL)

    def test_unknown_fault_action(self):
        with pytest.raises(ScenarioError, match="fault action"):
            parse_scenario(MINIMAL + "fault explode s1 10\n")


class TestSerialization:
    def test_minimal_round_trip(self):
        s = parse_scenario(MINIMAL)
        assert parse_scenario(serialize_scenario(s)) == s

    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_preset_round_trip(self, name):
        s = scenario_preset(name)
        text = serialize_scenario(s)
        assert parse_scenario(text) == s
        # Canonical form is a fixed point.
        assert serialize_scenario(parse_scenario(text)) == text


class TestPresets:
    def test_unknown_preset(self):
        with pytest.raises(KeyError):
            scenario_preset("P99")

    def test_all_presets_validate(self):
        for name in PRESET_NAMES:
            scenario_preset(name).validate()

    def test_five_site_topology_shape(self):
        sites = scenario_preset("P1").sites
        assert [(s.site_id, s.nodes) for s in sites] == \
            [("site1", 4), ("site2", 5), ("site3", 5), ("site4", 5), ("site5", 5)]
        assert all(s.power == 1.0 for s in sites)
