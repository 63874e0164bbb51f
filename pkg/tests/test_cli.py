"""Command-line interface: subcommands, flags, exit codes, output files."""

import subprocess
import sys

import pytest

from pass_trihybrid.cli import EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_OK, main

MINI_SWEEP = "\n".join(
    [
        "sweep = N",
        "sweep_values = 2,4",
        "user = uniform",
        "draws = 30",
        "modes = single,baseline",
        "seed = 99",
    ]
)


@pytest.fixture
def mini_config(tmp_path):
    path = tmp_path / "mini.cfg"
    path.write_text(MINI_SWEEP + "\n")
    return str(path)


class TestSweep:
    def test_writes_csv_to_file(self, mini_config, tmp_path, capsys):
        out = tmp_path / "rows.csv"
        assert main(["sweep", "--config", mini_config, "--out", str(out)]) == EXIT_OK
        text = out.read_text()
        assert text.startswith("# pass-trihybrid v1, cfg=")
        assert "snr_db" in text.splitlines()[1]
        assert capsys.readouterr().out == ""

    def test_stdout_default(self, mini_config, capsys):
        assert main(["sweep", "--config", mini_config]) == EXIT_OK
        assert "capacity_bits" in capsys.readouterr().out

    def test_identical_bytes_across_runs(self, mini_config, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sweep", "--config", mini_config, "--out", str(a)])
        main(["sweep", "--config", mini_config, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_seed_and_mode_overrides(self, mini_config, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["sweep", "--config", mini_config, "--out", str(a), "--seed", "1"])
        main(["sweep", "--config", mini_config, "--out", str(b), "--seed", "2"])
        assert a.read_text() != b.read_text()
        main(["sweep", "--config", mini_config, "--out", str(a), "--mode", "multi"])
        rows = a.read_text().strip().splitlines()[2:]
        assert all(",multi," in row for row in rows)
        assert len(rows) == 2

    def test_case_override(self, mini_config, tmp_path):
        out = tmp_path / "c.csv"
        main(["sweep", "--config", mini_config, "--out", str(out), "--case", "2"])
        assert all(row.split(",")[2] == "2" for row in out.read_text().strip().splitlines()[2:])


class TestErrors:
    def test_bad_config_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("nonsense_key = 1\n")
        assert main(["sweep", "--config", str(bad)]) == EXIT_CONFIG
        assert "config error" in capsys.readouterr().err

    def test_missing_config_file(self, capsys):
        assert main(["sweep", "--config", "/no/such/file"]) == EXIT_CONFIG
        capsys.readouterr()

    def test_infeasible_geometry_exit_code(self, tmp_path, capsys):
        cramped = tmp_path / "cramped.cfg"
        cramped.write_text("dx_m = 0.05\nnum_pas = 32\nuser = fixed\nsweep_values = 32\n")
        assert main(["placement", "--config", str(cramped)]) == EXIT_INFEASIBLE
        assert "infeasible" in capsys.readouterr().err

    def test_invalid_flag_value(self):
        with pytest.raises(SystemExit):
            main(["sweep", "--case", "9"])


class TestOtherSubcommands:
    def test_placement_dump(self, capsys):
        assert main(["placement"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.splitlines()[1].startswith("waveguide,pa_index")

    def test_bounds_table(self, capsys):
        assert main(["bounds"]) == EXIT_OK
        assert "snr1_upper" in capsys.readouterr().out

    def test_selftest_passes(self, tmp_path):
        out = tmp_path / "self.txt"
        assert main(["selftest", "--out", str(out)]) == EXIT_OK
        assert all(line.startswith("[PASS]") for line in out.read_text().strip().splitlines())


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pass_trihybrid.cli", "bounds"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == EXIT_OK
    assert proc.stdout.startswith("# pass-trihybrid v1")
