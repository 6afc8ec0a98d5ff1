import logging

import pytest

from harness.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main
from harness.recorder import TRAJECTORY_HEADER
from stability.scan import STABILITY_HEADER

BASE = """
[controller]
a = 0.18
omega = 4.18879020478639
K = 1.5

[estimator]
kernel_width = 40
kernel_height = 10
feedback = "oracle"
"""


def write_config(tmp_path, extra="", name="run.toml"):
    path = tmp_path / name
    path.write_text(BASE + extra)
    return path


@pytest.fixture(autouse=True)
def restore_root_level():
    root = logging.getLogger()
    level = root.level
    yield
    root.setLevel(level)


class TestStability:
    def test_prints_the_operating_point(self, tmp_path, capsys):
        path = write_config(tmp_path, "\n[sim]\nscan_points = 3\n")
        code = main(["stability", "--config", str(path), "--out", str(tmp_path / "out"), "--quiet"])
        assert code == EXIT_OK
        assert capsys.readouterr().out.strip() == "delta=0.0486 delta_dagger=0.2841 floquet_radius<1"
        header = (tmp_path / "out" / "stability.csv").read_text().splitlines()[0]
        assert header == ",".join(STABILITY_HEADER)


class TestSimulate:
    def test_artifacts_and_reruns_are_identical(self, tmp_path, capsys):
        path = write_config(tmp_path, "\n[sim]\nduration = 0.5\n")
        first, second = tmp_path / "first", tmp_path / "second"
        assert main(["simulate", "--config", str(path), "--out", str(first), "--seed", "3"]) in (EXIT_OK, EXIT_FAILED)
        assert main(["simulate", "--config", str(path), "--out", str(second), "--seed", "3"]) in (EXIT_OK, EXIT_FAILED)
        assert capsys.readouterr().out.startswith("simulate: mean_radius=")

        trajectory = (first / "trajectory.csv").read_text().splitlines()
        assert trajectory[0] == ",".join(TRAJECTORY_HEADER)
        assert len(trajectory) == 51
        assert (first / "events.csv").read_text().splitlines()[0] == "t_us,u,v,p"
        for name in ("trajectory.csv", "events.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_output_directory_from_environment(self, tmp_path, monkeypatch):
        path = write_config(tmp_path, "\n[sim]\nduration = 0.1\nrecord_events = false\n")
        monkeypatch.setenv("EVSERVO_OUTPUT_DIR", str(tmp_path / "env"))
        main(["simulate", "--config", str(path), "--quiet"])
        assert (tmp_path / "env" / "trajectory.csv").exists()
        assert not (tmp_path / "env" / "events.csv").exists()

    def test_divergence_exits_with_failure(self, tmp_path, capsys):
        path = write_config(tmp_path, "\n[scene]\nextent = 0.05\n\n[sim]\nduration = 1.0\n")
        code = main(["simulate", "--config", str(path), "--out", str(tmp_path / "out"), "--quiet"])
        assert code == EXIT_FAILED
        assert "aborted" in capsys.readouterr().err


class TestConfigErrors:
    def test_missing_file(self, tmp_path, capsys):
        code = main(["simulate", "--config", str(tmp_path / "absent.toml"), "--out", str(tmp_path), "--quiet"])
        assert code == EXIT_CONFIG
        assert "config error" in capsys.readouterr().err

    def test_missing_required_key(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("[controller]\nomega = 4.18879020478639\nK = 1.5\n")
        assert main(["simulate", "--config", str(path), "--out", str(tmp_path), "--quiet"]) == EXIT_CONFIG

    def test_unknown_experiment(self, tmp_path):
        path = write_config(tmp_path)
        with pytest.raises(SystemExit):
            main(["teleport", "--config", str(path)])


class TestDeterminism:
    @pytest.mark.parametrize("experiment, extra", [
        ("simulate", "\n[sim]\nduration = 0.5\n"),
        ("calibrate", "preamble = 3.0\n"),
        ("bounds", "trajectories = 3\n"),
        ("stability", "\n[sim]\nscan_points = 3\n"),
        ("sweep", "sweep_duration = 3.0\nsweep_sigma = [330.0]\nsweep_k = [1.299e-3, 2.205e-3]\n"),
    ])
    def test_same_seed_writes_identical_files(self, tmp_path, experiment, extra):
        path = write_config(tmp_path, extra)
        first, second = tmp_path / "first", tmp_path / "second"
        for out in (first, second):
            code = main([experiment, "--config", str(path), "--out", str(out), "--seed", "5", "--quiet"])
            assert code in (EXIT_OK, EXIT_FAILED)
        written = sorted(p.name for p in first.glob("*.csv"))
        assert written
        assert written == sorted(p.name for p in second.glob("*.csv"))
        for name in written:
            assert (first / name).read_bytes() == (second / name).read_bytes()
