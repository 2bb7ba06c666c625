"""Command-line harness: verification suites, Lax-matrix dumps, flow
integration, limit sweeps, and moment-map reductions, driven by a versioned
JSON experiment config.

Usage:
    rslax <verify|lax|evolve|limit|reduce> --config path.json
          [--seed N] [--out DIR] [--tol-scale X]

All randomness flows from a single seeded NumPy PCG64 stream, so outputs are
byte-identical across reruns with the same config and seed.  Tabular data is
written as RFC-4180 CSV with complex values split into real/imaginary column
pairs; summaries are JSON with complex values as {"re": ..., "im": ...}.
Files are written atomically (temp file + rename).  Exit status is 0 iff
every scheduled check passes.  RSLAX_THREADS caps BLAS/OpenMP parallelism.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile
import time
import zlib
from dataclasses import dataclass, field

# Honor the thread cap before numpy initializes its BLAS backend.
_threads = os.environ.get("RSLAX_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

import numpy as np

from . import dynamics, elliptic, lax, limits, reductions
from .cauchy import CauchyMatrixSpec, build_elliptic_cauchy, frobenius_determinant
from .errors import CollisionImminent, ConfigInvalid, RslaxError

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed experiment file: command, seed, command params, output dir."""

    command: str
    seed: int
    params: dict
    output_dir: str
    tol_scale: float = 1.0


@dataclass(frozen=True)
class CheckRow:
    name: str
    status: str  # "pass" | "fail"
    residual: float
    tolerance: float


@dataclass
class RunReport:
    """Outcome of one CLI run: one row per scheduled check plus wall time."""

    command: str
    checks: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def add(self, name, residual, tolerance):
        residual = float(residual)
        status = "pass" if residual < tolerance else "fail"
        self.checks.append(CheckRow(name, status, residual, float(tolerance)))

    def to_dict(self):
        # wall_time deliberately excluded: report files must be
        # byte-identical across reruns.
        return {
            "command": self.command,
            "checks": [
                {
                    "name": c.name,
                    "status": c.status,
                    "residual": c.residual,
                    "tolerance": c.tolerance,
                }
                for c in self.checks
            ],
        }


# ---------------------------------------------------------------------------
# JSON / CSV plumbing


def _as_complex(v, field_name):
    if isinstance(v, (int, float, complex)):
        return complex(v)
    if isinstance(v, dict) and set(v) <= {"re", "im"}:
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    if isinstance(v, str):
        try:
            return complex(v)
        except ValueError:
            pass
    raise ConfigInvalid("expected a number, a complex string, or {re, im}", field=field_name)


def _complex_list(v, field_name):
    if not isinstance(v, list):
        raise ConfigInvalid("expected a list", field=field_name)
    return [_as_complex(x, f"{field_name}[{i}]") for i, x in enumerate(v)]


def _jsonify(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_jsonify(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(x) for x in obj]
    return obj


def _write_atomic(path, data: bytes):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-rslax-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    text = json.dumps(_jsonify(obj), sort_keys=True, indent=2, allow_nan=False)
    _write_atomic(path, (text + "\n").encode("utf-8"))


def write_csv(path, header, rows):
    import io

    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    _write_atomic(path, buf.getvalue().encode("utf-8"))


def load_config(path, command, seed_override=None, out_override=None, tol_scale=1.0):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigInvalid(str(exc), field="config")
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"not valid JSON: {exc}", field="config")
    if not isinstance(raw, dict):
        raise ConfigInvalid("top level must be an object", field="config")
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise ConfigInvalid(
            f"schema_version must be {SCHEMA_VERSION}", field="schema_version"
        )
    cfg_command = raw.get("command", command)
    if cfg_command != command:
        raise ConfigInvalid(
            f"config declares command {cfg_command!r} but {command!r} was invoked",
            field="command",
        )
    seed = seed_override if seed_override is not None else raw.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigInvalid("seed must be an integer", field="seed")
    out = out_override or raw.get("output_dir", ".")
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ConfigInvalid("params must be an object", field="params")
    return ExperimentConfig(command, seed, params, out, float(tol_scale))


def _lattice_from_params(p, field_name="lattice"):
    if not isinstance(p, dict):
        raise ConfigInvalid("expected an object", field=field_name)
    kind = p.get("kind", "elliptic")
    if kind == "trig":
        return elliptic.trig_lattice()
    if kind == "rational":
        return elliptic.rational_lattice()
    if kind == "elliptic":
        o1 = _as_complex(p.get("omega1", 1.0), f"{field_name}.omega1")
        o2 = _as_complex(p.get("omega2", 2j), f"{field_name}.omega2")
        return elliptic.lattice_from_periods(o1, o2)
    raise ConfigInvalid(f"unknown lattice kind {kind!r}", field=f"{field_name}.kind")


def _rs_config_from_params(p, field_name="params"):
    for key in ("q", "P", "hbar"):
        if key not in p:
            raise ConfigInvalid("missing required field", field=f"{field_name}.{key}")
    lat = _lattice_from_params(p.get("lattice", {}), f"{field_name}.lattice")
    return lax.rs_config(
        _complex_list(p["q"], f"{field_name}.q"),
        _complex_list(p["P"], f"{field_name}.P"),
        _as_complex(p["hbar"], f"{field_name}.hbar"),
        lat,
        mu=_as_complex(p["mu"], f"{field_name}.mu") if "mu" in p else None,
        q_inf=_as_complex(p.get("q_inf", 0.0), f"{field_name}.q_inf"),
    )


# ---------------------------------------------------------------------------
# verify


def _random_lattice(rng):
    o1 = 1.0 + 0.2 * rng.normal() + 0.1j * rng.normal()
    ratio = 0.3 * rng.normal() + 1j * (1.5 + abs(rng.normal()))
    return elliptic.lattice_from_periods(o1, o1 * ratio)


def _check_sigma_quasi_periodicity(rng, n_points=30, n_lattices=4):
    worst = 0.0
    for _ in range(n_lattices):
        lat = _random_lattice(rng)
        z = 0.3 * (rng.normal(size=n_points) + 1j * rng.normal(size=n_points))
        for om, eta in ((lat.omega1, lat.eta1), (lat.omega2, lat.eta2)):
            lhs = elliptic.sigma(z + om, lat)
            rhs = -np.exp(2 * eta * (z + om / 2)) * elliptic.sigma(z, lat)
            worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.abs(rhs))))
    return worst


def _check_legendre(rng, n_lattices=6):
    return max(
        abs(elliptic.legendre_residual(_random_lattice(rng))) for _ in range(n_lattices)
    )


def _check_frobenius(rng, trials=25):
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 5))
        lat = _random_lattice(rng)
        qs = 0.25 * (rng.normal(size=n) + 1j * rng.normal(size=n)) + np.arange(n) * 0.4
        rs = qs + 0.13 + 0.07j + 0.05 * rng.normal(size=n)
        lam = 0.21 + 0.17j
        spec = CauchyMatrixSpec(tuple(qs), tuple(rs), 0.0, lat)
        det_closed = frobenius_determinant(spec, lam)
        det_lu = np.linalg.det(build_elliptic_cauchy(spec, lam).entries)
        worst = max(worst, abs(det_closed - det_lu) / abs(det_lu))
    return worst


def _check_lax_equivalence(rng, trials=10):
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 4))
        lat = _random_lattice(rng)
        q = 0.12 * (rng.normal(size=n) + 1j * rng.normal(size=n)) + np.arange(n) * 0.3
        P = 0.2 * (rng.normal(size=n) + 1j * rng.normal(size=n))
        conf = lax.rs_config(q, P, 0.11 + 0.04j, lat)
        z = 0.19 + 0.27j
        A = lax.hasegawa_lax(conf, z).entries
        B = lax.composition_lax(conf, z).entries
        worst = max(worst, float(np.max(np.abs(A - B)) / np.max(np.abs(A))))
    return worst


def _check_rational_cm_moment(rng):
    n = 4
    q = np.sort(rng.normal(size=n)) + 1j * 0.1 * rng.normal(size=n)
    p = rng.normal(size=n) + 1j * 0.1 * rng.normal(size=n)
    orb = reductions.OrbitSpec(g=0.7 + 0.2j)
    pair = reductions.solve_rational_cm(q, p, orb)
    return reductions.moment_residual(pair, orb)


def _check_trig_cm_moment(rng):
    n = 4
    q = np.sort(rng.normal(size=n)) * 1.3 + 1j * 0.2 * rng.normal(size=n)
    orb = reductions.OrbitSpec(g=0.6 + 0.1j)
    pair = reductions.solve_trig_cm(q, orb, np.ones(n))
    return reductions.moment_residual(pair, orb)


def _check_rational_rs_moment(rng):
    n = 3
    th = rng.normal(size=n) + 1j * 0.3 * rng.normal(size=n)
    orb = reductions.OrbitSpec(g=0.4)
    pair = reductions.solve_rational_rs(th, orb, rng.normal(size=n))
    return reductions.moment_residual(pair, orb)


def _check_degeneration(rng):
    q = [0.1 + 0.03j, 0.45 - 0.02j]
    P = [0.1, -0.07]
    lat = elliptic.lattice_from_periods(1.0, 20j)
    conf = lax.rs_config(q, P, 0.08 + 0.02j, lat)
    sweep = limits.degeneration_sweep(conf, [20.0])
    return sweep.errors[0]


def _check_cm_limit_order(rng):
    q = [0.1 + 0.03j, 0.45 - 0.02j, 0.8 + 0.01j]
    p = [0.3, -0.2, 0.1]
    lat = elliptic.lattice_from_periods(1.0, 2.5j)
    conf = lax.rs_config(q, [0.0] * 3, 1e-2, lat)
    sweep = limits.cm_limit_sweep(conf, lax.cm_config(q, p, 1.0, lat), [1e-2, 5e-3, 2.5e-3])
    return abs(sweep.fitted_order - 1.0)


_VERIFY_CHECKS = {
    "sigma_quasi_periodicity": (_check_sigma_quasi_periodicity, 1e-9),
    "legendre_relation": (_check_legendre, 1e-10),
    "frobenius_determinant": (_check_frobenius, 1e-8),
    "lax_equivalence": (_check_lax_equivalence, 1e-7),
    "rational_cm_moment": (_check_rational_cm_moment, 1e-10),
    "trig_cm_moment": (_check_trig_cm_moment, 1e-10),
    "rational_rs_moment": (_check_rational_rs_moment, 1e-10),
    "degeneration_residual": (_check_degeneration, 1e-8),
    "cm_limit_order": (_check_cm_limit_order, 0.15),
}


def run_verify(cfg: ExperimentConfig) -> RunReport:
    report = RunReport("verify")
    t0 = time.perf_counter()
    names = cfg.params.get("checks")
    if names is None:
        names = list(_VERIFY_CHECKS)
    for name in names:
        if name not in _VERIFY_CHECKS:
            raise ConfigInvalid(f"unknown check {name!r}", field="params.checks")
        fn, tol = _VERIFY_CHECKS[name]
        rng = np.random.default_rng([cfg.seed, zlib.crc32(name.encode("utf-8"))])
        report.add(name, fn(rng), tol * cfg.tol_scale)
    report.wall_time = time.perf_counter() - t0
    write_json(os.path.join(cfg.output_dir, "report.json"), report.to_dict())
    return report


# ---------------------------------------------------------------------------
# lax


def run_lax(cfg: ExperimentConfig) -> RunReport:
    report = RunReport("lax")
    t0 = time.perf_counter()
    p = cfg.params
    family = p.get("family", "hasegawa")
    conf = _rs_config_from_params(p)
    z = _as_complex(p.get("z", 0.31 + 0.43j), "params.z")
    if family == "hasegawa":
        M = lax.hasegawa_lax(conf, z)
    elif family == "composition":
        M = lax.composition_lax(conf, z)
    elif family == "ruijsenaars":
        M = lax.ruijsenaars_lax(conf, lax.LaxParams(), z)
    elif family == "krichever":
        lam = _as_complex(p.get("lam", 0.23 + 0.11j), "params.lam")
        M = lax.krichever_lax(conf, z, lam)
    else:
        raise ConfigInvalid(f"unknown Lax family {family!r}", field="params.family")

    rows = [
        (i, j, float(M.entries[i, j].real), float(M.entries[i, j].imag))
        for i in range(conf.n)
        for j in range(conf.n)
    ]
    write_csv(
        os.path.join(cfg.output_dir, "lax.csv"),
        ["row", "col", "re", "im"],
        rows,
    )
    write_json(
        os.path.join(cfg.output_dir, "lax.json"),
        {"family": family, "n": conf.n, "z": z, "entries": M.entries},
    )
    finite = 0.0 if np.all(np.isfinite(M.entries)) else np.inf
    report.add("entries_finite", finite, 1.0)
    report.wall_time = time.perf_counter() - t0
    write_json(os.path.join(cfg.output_dir, "report.json"), report.to_dict())
    return report


# ---------------------------------------------------------------------------
# evolve


def run_evolve(cfg: ExperimentConfig) -> RunReport:
    report = RunReport("evolve")
    t0 = time.perf_counter()
    p = cfg.params
    dt = p.get("dt", 1e-3)
    t_end = p.get("t_end", 1.0)
    if not isinstance(dt, (int, float)) or dt <= 0:
        raise ConfigInvalid("dt must be a positive number", field="params.dt")
    if not isinstance(t_end, (int, float)) or t_end <= 0:
        raise ConfigInvalid("t_end must be a positive number", field="params.t_end")
    conf = _rs_config_from_params(p)
    hspec = dynamics.HamiltonianSpec(
        family=p.get("family", "trace_power"),
        index=int(p.get("index", 1)),
        lax_family=p.get("lax_family", "hasegawa"),
    )
    start = dynamics.PhasePoint(conf.q, conf.P)
    drift_tol = float(p.get("drift_tolerance", 1e-6)) * cfg.tol_scale

    collided = False
    try:
        traj = dynamics.integrate(
            hspec, start, conf, float(t_end), float(dt), p.get("coordinates", "p")
        )
    except CollisionImminent as exc:
        traj = exc.trajectory
        collided = True

    n = conf.n
    header = ["t"]
    for i in range(n):
        header += [f"re_q{i}", f"im_q{i}"]
    for i in range(n):
        header += [f"re_p{i}", f"im_p{i}"]
    header.append("spectral_drift")
    rows = []
    for t, pt, drift in zip(traj.times, traj.points, traj.spectral_drift):
        row = [float(t)]
        for i in range(n):
            row += [pt.q[i].real, pt.q[i].imag]
        for i in range(n):
            row += [pt.p[i].real, pt.p[i].imag]
        row.append(float(drift))
        rows.append(row)
    write_csv(os.path.join(cfg.output_dir, "trajectory.csv"), header, rows)

    max_drift = max((float(d) for d in traj.spectral_drift), default=0.0)
    write_json(
        os.path.join(cfg.output_dir, "summary.json"),
        {
            "n": n,
            "steps": len(traj.times) - 1 if traj.times else 0,
            "t_end_reached": traj.times[-1] if traj.times else None,
            "max_spectral_drift": max_drift,
            "collision": collided,
        },
    )
    report.add("spectral_drift", max_drift, drift_tol)
    if collided:
        report.add("completed", np.inf, 1.0)
    else:
        report.add("completed", 0.0, 1.0)
    report.wall_time = time.perf_counter() - t0
    write_json(os.path.join(cfg.output_dir, "report.json"), report.to_dict())
    return report


# ---------------------------------------------------------------------------
# limit


def run_limit(cfg: ExperimentConfig) -> RunReport:
    report = RunReport("limit")
    t0 = time.perf_counter()
    p = cfg.params
    sweep_kind = p.get("sweep")
    if sweep_kind not in ("degeneration", "cm"):
        raise ConfigInvalid("sweep must be 'degeneration' or 'cm'", field="params.sweep")
    conf = _rs_config_from_params(p)

    if sweep_kind == "degeneration":
        values = p.get("im_tau_values")
        if not isinstance(values, list) or not values:
            raise ConfigInvalid("im_tau_values must be a non-empty list", field="params.im_tau_values")
        sweep = limits.degeneration_sweep(conf, [float(v) for v in values])
        tail = [e for t, e in zip(sweep.values, sweep.errors) if t >= 5.0]
        mono = 0.0
        for a, b in zip(tail, tail[1:]):
            mono = max(mono, b - a)
        report.add("tail_monotone", mono, 1e-12)
        report.add("final_residual", sweep.errors[-1], float(p.get("residual_tolerance", 1e-8)) * cfg.tol_scale)
    else:
        values = p.get("hbar_values")
        if not isinstance(values, list) or not values:
            raise ConfigInvalid("hbar_values must be a non-empty list", field="params.hbar_values")
        pvec = _complex_list(p.get("p", [0.0] * conf.n), "params.p")
        cmc = lax.cm_config(conf.q, pvec, 1.0, conf.lat)
        sweep = limits.cm_limit_sweep(conf, cmc, [float(v) for v in values])
        if sweep.fitted_order is not None:
            report.add("fitted_order_near_one", abs(sweep.fitted_order - 1.0), 0.15 * cfg.tol_scale)

    write_csv(
        os.path.join(cfg.output_dir, "sweep.csv"),
        ["parameter", "residual"],
        list(zip((float(v) for v in sweep.values), (float(e) for e in sweep.errors))),
    )
    write_json(
        os.path.join(cfg.output_dir, "sweep.json"),
        {
            "parameter": sweep.parameter,
            "values": list(sweep.values),
            "errors": list(sweep.errors),
            "fitted_order": sweep.fitted_order,
        },
    )
    report.wall_time = time.perf_counter() - t0
    write_json(os.path.join(cfg.output_dir, "report.json"), report.to_dict())
    return report


# ---------------------------------------------------------------------------
# reduce


def run_reduce(cfg: ExperimentConfig) -> RunReport:
    report = RunReport("reduce")
    t0 = time.perf_counter()
    p = cfg.params
    kind = p.get("kind")
    g = _as_complex(p.get("g", 1.0), "params.g")
    if kind == "rational_cm":
        q = _complex_list(p.get("q", []), "params.q")
        mom = _complex_list(p.get("p", [0.0] * len(q)), "params.p")
        orb = reductions.OrbitSpec(g=g)
        pair = reductions.solve_rational_cm(q, mom, orb)
    elif kind == "trig_cm":
        q = _complex_list(p.get("q", []), "params.q")
        gauge = _complex_list(p.get("gauge", [1.0] * len(q)), "params.gauge")
        orb = reductions.OrbitSpec(g=g)
        pair = reductions.solve_trig_cm(q, orb, gauge)
    elif kind == "rational_rs":
        th = _complex_list(p.get("theta", []), "params.theta")
        orb = reductions.OrbitSpec(g=g)
        diag = _complex_list(p.get("diag_free", [0.0] * len(th)), "params.diag_free")
        pair = reductions.solve_rational_rs(th, orb, diag)
    elif kind == "trig_rs":
        th = _complex_list(p.get("theta", []), "params.theta")
        u = _complex_list(p.get("u", []), "params.u")
        v = _complex_list(p.get("v", []), "params.v")
        diag = _complex_list(p.get("diag_free", [1.0] * len(th)), "params.diag_free")
        orb = reductions.OrbitSpec(g=0.0, u=tuple(u), v=tuple(v))
        pair = reductions.solve_trig_rs(th, orb, diag)
    else:
        raise ConfigInvalid(
            "kind must be rational_cm, trig_cm, rational_rs, or trig_rs",
            field="params.kind",
        )

    for name, M in (("X", pair.X), ("Y", pair.Y)):
        rows = [
            (i, j, float(M[i, j].real), float(M[i, j].imag))
            for i in range(M.shape[0])
            for j in range(M.shape[1])
        ]
        write_csv(os.path.join(cfg.output_dir, f"{name}.csv"), ["row", "col", "re", "im"], rows)
    residual = reductions.moment_residual(pair, orb)
    write_json(
        os.path.join(cfg.output_dir, "reduce.json"),
        {"kind": kind, "residual": residual, "X": pair.X, "Y": pair.Y},
    )
    report.add("moment_residual", residual, 1e-10 * cfg.tol_scale)
    report.wall_time = time.perf_counter() - t0
    write_json(os.path.join(cfg.output_dir, "report.json"), report.to_dict())
    return report


# ---------------------------------------------------------------------------
# entry point

_RUNNERS = {
    "verify": run_verify,
    "lax": run_lax,
    "evolve": run_evolve,
    "limit": run_limit,
    "reduce": run_reduce,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rslax",
        description="Numerical toolkit for Ruijsenaars-Schneider and Calogero-Moser Lax matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="JSON experiment config")
        sp.add_argument("--seed", type=int, default=None, help="override config seed")
        sp.add_argument("--out", default=None, help="override output directory")
        sp.add_argument(
            "--tol-scale",
            type=float,
            default=1.0,
            help="multiply every check tolerance by this factor",
        )
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config, args.command, args.seed, args.out, args.tol_scale)
        report = _RUNNERS[args.command](cfg)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RslaxError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    for c in report.checks:
        print(f"{c.status:4s}  {c.name}  residual={c.residual:.3e}  tol={c.tolerance:.3e}")
    print(f"wall time: {report.wall_time:.2f}s")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
