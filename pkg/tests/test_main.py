"""Tests for the command-line entry point."""

import json
import math
from pathlib import Path

import pytest
import yaml

from droplet_dft.config import RunConfig
from droplet_dft.main import EXIT_NOT_CONVERGED, EXIT_OK, EXIT_UNSTABLE, EXIT_VALIDATION, main, run
from droplet_dft.mixture import equilibrium_density, healing_length


def write_config(tmp_path: Path, data: dict, name: str = "run.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def eos_config(**extra) -> dict:
    return {
        "command": "eos",
        "params": {
            "a11_bohr": 60.0,
            "a12_bohr": -66.0,
            "density": {"start": 1e-8, "stop": 1e-4, "points": 5, "spacing": "log"},
        },
        **extra,
    }


def stability_config() -> dict:
    return {
        "command": "stability",
        "params": {"a_bohr": 60.0, "eps_dd": {"start": 1.05, "stop": 1.5, "points": 10}},
    }


def gprime_config(**params) -> dict:
    return {
        "command": "gprime",
        "params": {
            "a_bohr": 60.0,
            "eps_dd": 1.5,
            "density": {"start": 1e-6, "stop": 1e-5, "points": 4, "spacing": "log"},
            **params,
        },
    }


class TestMain:
    """Test argument handling and exit statuses."""

    def test_eos(self, tmp_path: Path):
        """Test a successful eos run with CSV and sidecar."""
        out = tmp_path / "eos.csv"
        status = main(["eos", "--config", str(write_config(tmp_path, eos_config())), "--out", str(out)])
        assert status == EXIT_OK

        lines = out.read_text().splitlines()
        assert lines[0] == (
            "n [L^-3],e_per_particle [E],e_per_particle_lhy_approx [E],e_per_particle_mf [E]"
        )
        assert len(lines) == 6
        assert lines[1].split(",")[0] == "1.00000000000e-08"

        meta = json.loads((tmp_path / "eos.csv.meta.json").read_text())
        assert meta["command"] == "eos"
        assert meta["diagnostics"]["equilibrium_density"] > 0

    def test_overrides_reach_the_run(self, tmp_path: Path):
        """Test that --out replaces the config's output path and is echoed in the sidecar."""
        ignored = tmp_path / "from-config.csv"
        out = tmp_path / "from-cli.csv"
        config = write_config(tmp_path, eos_config(output_path=str(ignored)))
        assert main(["eos", "--config", str(config), "--out", str(out)]) == EXIT_OK
        assert out.exists()
        assert not ignored.exists()
        meta = json.loads((tmp_path / "from-cli.csv.meta.json").read_text())
        assert meta["config"]["output_path"] == str(out)

    def test_yaml_config_and_output_path(self, tmp_path: Path):
        """Test a YAML config that names its own output file."""
        out = tmp_path / "nested" / "eos.csv"
        config = tmp_path / "run.yaml"
        config.write_text(yaml.safe_dump(eos_config(output_path=str(out))))
        assert main(["eos", "--config", str(config)]) == EXIT_OK
        assert out.exists()

    def test_malformed_json(self, tmp_path: Path):
        """Test exit 2 and no output for malformed JSON."""
        config = tmp_path / "bad.json"
        config.write_text('{"command": "eos", "params": {')
        out = tmp_path / "out.csv"
        assert main(["eos", "--config", str(config), "--out", str(out)]) == EXIT_VALIDATION
        assert not out.exists()

    def test_missing_config_file(self, tmp_path: Path):
        """Test exit 2 for a config file that does not exist."""
        assert main(["eos", "--config", str(tmp_path / "missing.json"), "--out", "x.csv"]) == EXIT_VALIDATION

    def test_command_mismatch(self, tmp_path: Path):
        """Test exit 2 when the command line and the config disagree."""
        config = write_config(tmp_path, eos_config())
        out = tmp_path / "out.csv"
        assert main(["stability", "--config", str(config), "--out", str(out)]) == EXIT_VALIDATION
        assert not out.exists()

    def test_missing_output_path(self, tmp_path: Path):
        """Test exit 2 when no output path is given."""
        assert main(["eos", "--config", str(write_config(tmp_path, eos_config()))]) == EXIT_VALIDATION

    def test_domain_error(self, tmp_path: Path):
        """Test exit 2 for scattering lengths outside the equation of state's domain."""
        data = eos_config()
        data["params"]["a12_bohr"] = 90.0
        out = tmp_path / "out.csv"
        assert main(["eos", "--config", str(write_config(tmp_path, data)), "--out", str(out)]) == EXIT_VALIDATION
        assert not out.exists()

    def test_unstable_is_fatal(self, tmp_path: Path):
        """Test exit 4 and no output below the critical density."""
        out = tmp_path / "gprime.csv"
        assert main(["gprime", "--config", str(write_config(tmp_path, gprime_config())), "--out", str(out)]) == (
            EXIT_UNSTABLE
        )
        assert not out.exists()
        assert not (tmp_path / "gprime.csv.meta.json").exists()

    def test_unstable_marked(self, tmp_path: Path):
        """Test that on_unstable=mark writes NaN rows flagged as unstable."""
        out = tmp_path / "gprime.csv"
        config = write_config(tmp_path, gprime_config(on_unstable="mark"))
        assert main(["gprime", "--config", str(config), "--out", str(out)]) == EXIT_OK
        header, *rows = out.read_text().splitlines()
        assert header.split(",")[-1] == "stable [1]"
        for row in rows:
            fields = row.split(",")
            assert fields[-1] == "0"
            assert math.isnan(float(fields[1]))

    def test_iteration_limit(self, tmp_path: Path):
        """Test exit 3 when the profile solver runs out of steps."""
        params = {"a11_bohr": 60.0, "a12_bohr": -66.0, "atom_number": 1e7, "max_steps": 1}
        data = {"command": "profile", "params": params}
        out = tmp_path / "profile.csv"
        assert main(["profile", "--config", str(write_config(tmp_path, data)), "--out", str(out)]) == (
            EXIT_NOT_CONVERGED
        )
        assert not out.exists()

    def test_reference_overlay(self, tmp_path: Path):
        """Test the reference column next to the eos output."""
        ref = tmp_path / "ref.dat"
        ref.write_text("# n E\n1e-9 -1\n1e-3 -1\n")
        out = tmp_path / "eos.csv"
        config = write_config(tmp_path, eos_config())
        argv = ["eos", "--config", str(config), "--out", str(out), "--ref", str(ref)]
        status = main([*argv, "--ref-xscale", "1", "--ref-yscale", "2"])
        assert status == EXIT_OK
        header, first, *_, last = out.read_text().splitlines()
        assert header.endswith(",reference [E]")
        assert float(first.split(",")[-1]) == pytest.approx(-2.0)
        assert float(last.split(",")[-1]) == pytest.approx(-2.0)

    def test_reference_not_available_for_tables(self, tmp_path: Path):
        """Test exit 2 when overlaying reference data on a 2-D table."""
        ref = tmp_path / "ref.dat"
        ref.write_text("1 2\n")
        data = {
            "command": "selfconsistent",
            "params": {
                "a11_bohr": 60.0,
                "a12_bohr": -30.0,
                "grid": {"axis1": {"lo": {"value": 1e-9}, "hi": {"value": 1e-8}, "points": 33}},
            },
        }
        out = tmp_path / "table.csv"
        config = write_config(tmp_path, data)
        assert main(["selfconsistent", "--config", str(config), "--out", str(out), "--ref", str(ref)]) == (
            EXIT_VALIDATION
        )
        assert not out.exists()

    def test_selfconsistent_table(self, tmp_path: Path):
        """Test the table layout of the selfconsistent command."""
        data = {
            "command": "selfconsistent",
            "params": {
                "a11_bohr": 60.0,
                "a12_bohr": -30.0,
                "grid": {"axis1": {"lo": {"value": 1e-9}, "hi": {"value": 1e-8}, "points": 33}},
            },
        }
        out = tmp_path / "table.csv"
        assert main(["selfconsistent", "--config", str(write_config(tmp_path, data)), "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "n1 [L^-3],n2 [L^-3],ec [E L^-3],chi11 [E L^3],chi12 [E L^3],chi22 [E L^3]"
        assert len(lines) == 1 + 33 * 33
        meta = json.loads((tmp_path / "table.csv.meta.json").read_text())
        assert meta["diagnostics"]["converged"] is True

    def test_si_units(self, tmp_path: Path):
        """Test SI column headers."""
        out = tmp_path / "eos.csv"
        config = write_config(tmp_path, eos_config(units="si"))
        assert main(["eos", "--config", str(config), "--out", str(out)]) == EXIT_OK
        assert out.read_text().splitlines()[0].startswith("n [m^-3],e_per_particle [J]")

    def test_profile_footer(self, tmp_path: Path):
        """Test the profile CSV with its trailing metadata line."""
        radius = 15.0 * healing_length(1.0, -1.1)
        N = 4.0 * math.pi / 3.0 * radius**3 * equilibrium_density(1.0, -1.1)
        data = {
            "command": "profile",
            "params": {"a11_bohr": 60.0, "a12_bohr": -66.0, "atom_number": N, "points_per_healing": 2.0},
        }
        out = tmp_path / "profile.csv"
        assert main(["profile", "--config", str(write_config(tmp_path, data)), "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "r [L],n [L^-3]"
        assert lines[-1].startswith("# N=")
        assert ", mu=" in lines[-1] and ", E=" in lines[-1]


class TestDeterminism:
    """Test byte-identical output."""

    @pytest.mark.parametrize("threads", ["1", "4"])
    def test_stability_independent_of_threads(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch, threads: str):
        """Test identical CSV bytes for serial and parallel sweeps."""
        config = write_config(tmp_path, stability_config())
        reference = tmp_path / "serial.csv"
        monkeypatch.setenv("DROPLET_DFT_THREADS", "1")
        assert main(["stability", "--config", str(config), "--out", str(reference)]) == EXIT_OK

        out = tmp_path / f"threads-{threads}.csv"
        monkeypatch.setenv("DROPLET_DFT_THREADS", threads)
        assert main(["stability", "--config", str(config), "--out", str(out)]) == EXIT_OK
        assert out.read_bytes() == reference.read_bytes()

    def test_repeated_runs(self, tmp_path: Path):
        """Test that run() twice with the same config gives identical bytes."""
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        data = gprime_config(eps_dd=1.2, density={"start": 1e-3, "stop": 1e-2, "points": 8})
        assert run(RunConfig.model_validate({**data, "output_path": str(first)})) == EXIT_OK
        assert run(RunConfig.model_validate({**data, "output_path": str(second)})) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
