"""Driving the toolkit through the rslax command-line harness.

Every capability is reachable through the `rslax` entry point with a JSON
config: verify (built-in identity checks), lax, evolve, limit, and reduce.
Reports are written as deterministic JSON/CSV artifacts.  This script
prepares a config, runs the verify suite in-process, and prints the report.
"""

import json
import pathlib
import tempfile

from rslax import cli

with tempfile.TemporaryDirectory() as tmp:
    out = pathlib.Path(tmp) / "out"
    cfg = pathlib.Path(tmp) / "verify.json"
    cfg.write_text(
        json.dumps(
            {
                "schema_version": 1,
                "command": "verify",
                "seed": 42,
                "output_dir": str(out),
                "params": {},
            }
        )
    )
    # Equivalent shell invocation:  rslax verify --config verify.json
    code = cli.main(["verify", "--config", str(cfg)])
    print(f"exit code: {code}  (0 = all checks passed)")
    report = json.loads((out / "report.json").read_text())
    for check in report["checks"]:
        print(
            f"  {check['name']:<28} {check['status']:<6} "
            f"residual = {check['residual']:.3e}  (tol {check['tolerance']:.0e})"
        )
