"""Command line interface: run, sweep, compare."""

import pytest

from dianasched.cli import main

SCENARIO = """
site s1 nodes=2 power=1.0
site s2 nodes=2 power=1.0
default_link bandwidth=1000
user u quota=1
burst time=0 user=u site=s1 count=6 demand=2:9 procs=1 data_site=s1
"""


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.txt"
    path.write_text(SCENARIO)
    return str(path)


class TestRun:
    def test_writes_csvs(self, scenario_file, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["run", "--scenario", scenario_file, "--seed", "5",
                     "--out", str(out)])
        assert code == 0
        assert (out / "jobs.csv").exists()
        assert (out / "summary.csv").exists()
        assert "completed 6/6" in capsys.readouterr().out

    def test_same_seed_byte_identical(self, scenario_file, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main(["run", "--scenario", scenario_file, "--seed", "11",
                         "--out", str(out)]) == 0
            outs.append(out)
        for fname in ("jobs.csv", "summary.csv"):
            assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()

    def test_missing_scenario_is_diagnosed(self, tmp_path, capsys):
        code = main(["run", "--scenario", str(tmp_path / "nope.txt"),
                     "--seed", "1", "--out", str(tmp_path)])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_invalid_scenario_is_diagnosed(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("thrs 7\nsite s1 nodes=1 power=1\n")
        code = main(["run", "--scenario", str(bad), "--seed", "1",
                     "--out", str(tmp_path / "out")])
        assert code == 2
        assert "thrs" in capsys.readouterr().err


class TestSweepAndCompare:
    def test_sweep_then_compare(self, scenario_file, tmp_path, capsys):
        out = tmp_path / "sweep"
        code = main(["sweep", "--scenario", scenario_file,
                     "--axis", "scheduler", "--values", "diana,round_robin",
                     "--seed", "2", "--out", str(out)])
        assert code == 0
        code = main(["compare", str(out / "summary.csv")])
        assert code == 0
        table = capsys.readouterr().out
        assert "mean_queue_time ratio" in table

    def test_sweep_rejects_empty_values(self, scenario_file, tmp_path, capsys):
        code = main(["sweep", "--scenario", scenario_file, "--axis",
                     "bandwidth", "--values", "", "--seed", "1",
                     "--out", str(tmp_path)])
        assert code == 2
        assert "values" in capsys.readouterr().err
