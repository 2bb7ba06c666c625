"""Tests for the command-line harness: config validation, all five
subcommands, byte-identical determinism under a fixed seed, the exit-code
contract, and output schema validity.
"""

import csv
import json
import os

import pytest

from rslax import cli


def write_config(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def verify_cfg(tmp_path, out="out", checks=None, seed=42):
    params = {} if checks is None else {"checks": checks}
    return write_config(
        tmp_path,
        "verify.json",
        {
            "schema_version": 1,
            "command": "verify",
            "seed": seed,
            "output_dir": str(tmp_path / out),
            "params": params,
        },
    )


EVOLVE_PARAMS = {
    "lattice": {"kind": "elliptic", "omega1": 1.0, "omega2": {"re": 0.0, "im": 2.5}},
    "q": [{"re": 0.12, "im": 0.02}, {"re": 0.48, "im": -0.03}],
    "P": [0.12, -0.1],
    "hbar": {"re": 0.08, "im": 0.03},
    "t_end": 0.05,
    "dt": 0.002,
}


class TestConfigValidation:
    def test_wrong_schema_version(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"schema_version": 2, "params": {}})
        assert cli.main(["verify", "--config", cfg]) == 2

    def test_command_mismatch(self, tmp_path):
        cfg = write_config(
            tmp_path, "c.json", {"schema_version": 1, "command": "evolve", "params": {}}
        )
        assert cli.main(["verify", "--config", cfg]) == 2

    def test_missing_file(self, tmp_path):
        assert cli.main(["verify", "--config", str(tmp_path / "nope.json")]) == 2

    def test_nonpositive_dt(self, tmp_path):
        params = dict(EVOLVE_PARAMS, dt=-1.0)
        cfg = write_config(
            tmp_path,
            "e.json",
            {
                "schema_version": 1,
                "command": "evolve",
                "output_dir": str(tmp_path / "o"),
                "params": params,
            },
        )
        assert cli.main(["evolve", "--config", cfg]) == 2


class TestVerify:
    def test_default_suite_passes(self, tmp_path):
        cfg = verify_cfg(tmp_path)
        assert cli.main(["verify", "--config", cfg]) == 0
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["checks"]
        assert all(c["status"] == "pass" for c in report["checks"])

    def test_empty_check_list(self, tmp_path):
        cfg = verify_cfg(tmp_path, checks=[])
        assert cli.main(["verify", "--config", cfg]) == 0
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["checks"] == []

    def test_zero_tolerance_forces_failure(self, tmp_path):
        cfg = verify_cfg(tmp_path, checks=["legendre_relation"])
        assert cli.main(["verify", "--config", cfg, "--tol-scale", "0"]) == 1

    def test_determinism_byte_identical(self, tmp_path):
        cfg = verify_cfg(tmp_path)
        cli.main(["verify", "--config", cfg, "--out", str(tmp_path / "a")])
        cli.main(["verify", "--config", cfg, "--out", str(tmp_path / "b")])
        ra = (tmp_path / "a" / "report.json").read_bytes()
        rb = (tmp_path / "b" / "report.json").read_bytes()
        assert ra == rb


class TestEvolve:
    def _cfg(self, tmp_path, **over):
        params = dict(EVOLVE_PARAMS, **over)
        return write_config(
            tmp_path,
            "e.json",
            {
                "schema_version": 1,
                "command": "evolve",
                "seed": 1,
                "output_dir": str(tmp_path / "out"),
                "params": params,
            },
        )

    def test_trajectory_files_written_and_parse(self, tmp_path):
        cfg = self._cfg(tmp_path)
        assert cli.main(["evolve", "--config", cfg]) == 0
        with open(tmp_path / "out" / "trajectory.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "t"
        assert rows[0][-1] == "spectral_drift"
        assert len(rows) == 1 + 26  # header + 25 steps + initial point
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["max_spectral_drift"] < 1e-6

    def test_free_particle_linear_motion(self, tmp_path):
        cfg = self._cfg(
            tmp_path,
            q=[0.1],
            P=[0.3],
            hbar=0.0,
            t_end=0.1,
            dt=0.01,
        )
        assert cli.main(["evolve", "--config", cfg]) == 0
        with open(tmp_path / "out" / "trajectory.csv", newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        import numpy as np

        ts = np.array([float(r[0]) for r in rows])
        qs = np.array([float(r[1]) for r in rows])
        fit = np.polyfit(ts, qs, 1)
        assert abs(fit[0] - np.exp(0.3)) < 1e-9
        assert abs(fit[1] - 0.1) < 1e-12

    def test_determinism(self, tmp_path):
        cfg = self._cfg(tmp_path)
        cli.main(["evolve", "--config", cfg, "--out", str(tmp_path / "a")])
        cli.main(["evolve", "--config", cfg, "--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "trajectory.csv").read_bytes() == (
            tmp_path / "b" / "trajectory.csv"
        ).read_bytes()


class TestLimit:
    def test_degeneration_sweep_monotone(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "l.json",
            {
                "schema_version": 1,
                "command": "limit",
                "output_dir": str(tmp_path / "out"),
                "params": {
                    "sweep": "degeneration",
                    "im_tau_values": [5, 10, 20],
                    "lattice": {"kind": "elliptic", "omega1": 1.0, "omega2": {"re": 0, "im": 5}},
                    "q": [0.1, 0.45],
                    "P": [0.1, -0.07],
                    "hbar": {"re": 0.08, "im": 0.02},
                },
            },
        )
        assert cli.main(["limit", "--config", cfg]) == 0
        with open(tmp_path / "out" / "sweep.csv", newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        residuals = [float(r[1]) for r in rows]
        assert residuals[1] <= residuals[0] + 1e-12
        assert residuals[2] <= residuals[1] + 1e-12

    def test_cm_sweep_fitted_order(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "l.json",
            {
                "schema_version": 1,
                "command": "limit",
                "output_dir": str(tmp_path / "out"),
                "params": {
                    "sweep": "cm",
                    "hbar_values": [1e-2, 5e-3, 2.5e-3],
                    "lattice": {"kind": "elliptic", "omega1": 1.0, "omega2": {"re": 0, "im": 2.5}},
                    "q": [0.1, 0.45],
                    "P": [0.0, 0.0],
                    "hbar": 1e-2,
                    "p": [0.3, -0.2],
                },
            },
        )
        assert cli.main(["limit", "--config", cfg]) == 0
        sweep = json.loads((tmp_path / "out" / "sweep.json").read_text())
        assert abs(sweep["fitted_order"] - 1.0) < 0.15

    def test_single_point_sweep_null_order(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "l.json",
            {
                "schema_version": 1,
                "command": "limit",
                "output_dir": str(tmp_path / "out"),
                "params": {
                    "sweep": "cm",
                    "hbar_values": [1e-3],
                    "lattice": {"kind": "elliptic", "omega1": 1.0, "omega2": {"re": 0, "im": 2.5}},
                    "q": [0.1, 0.45],
                    "P": [0.0, 0.0],
                    "hbar": 1e-3,
                    "p": [0.3, -0.2],
                },
            },
        )
        assert cli.main(["limit", "--config", cfg]) == 0
        sweep = json.loads((tmp_path / "out" / "sweep.json").read_text())
        assert sweep["fitted_order"] is None


class TestReduceAndLax:
    def test_reduce_trig_cm(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "r.json",
            {
                "schema_version": 1,
                "command": "reduce",
                "output_dir": str(tmp_path / "out"),
                "params": {"kind": "trig_cm", "q": [0, 1], "g": 1.0, "gauge": [1, 1]},
            },
        )
        assert cli.main(["reduce", "--config", cfg]) == 0
        data = json.loads((tmp_path / "out" / "reduce.json").read_text())
        assert data["residual"] < 1e-10
        # complex encoding convention
        assert set(data["X"][0][0]) == {"re", "im"}

    def test_lax_matrix_dump(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "x.json",
            {
                "schema_version": 1,
                "command": "lax",
                "output_dir": str(tmp_path / "out"),
                "params": {
                    "family": "hasegawa",
                    "lattice": {"kind": "elliptic", "omega1": 1.0, "omega2": {"re": 0, "im": 2}},
                    "q": [0.1, 0.45],
                    "P": [0.1, -0.07],
                    "hbar": {"re": 0.08, "im": 0.02},
                },
            },
        )
        assert cli.main(["lax", "--config", cfg]) == 0
        with open(tmp_path / "out" / "lax.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["row", "col", "re", "im"]
        assert len(rows) == 1 + 4
