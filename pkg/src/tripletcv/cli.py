"""
Command-line interface.

    tripletcv bell table
    tripletcv bell correlate --state psi+ --nx 0 --ny 0 --nz 1
    tripletcv cv sweep --config configs/paper.config --mode fixed --phi2 45
    tripletcv cv fig2 --config configs/paper.config
    tripletcv validate --seed 12345 --samples 1000000

Exit codes: 0 success, 1 validation failure, 2 usage or config error.
"""

from __future__ import annotations

import json
import math
import sys
import warnings

import click
import numpy as np

from . import config as cfgio
from . import dv_bell, experiment_sim, gaussian_core, validation
from .errors import InvalidArgument
from .reporting import ResultTable, RunManifest, digest, fmt, text_rows, write_output

EXIT_VALIDATION = 1
EXIT_USAGE = 2


def _fail(message: str, code: int = EXIT_USAGE):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit(table: ResultTable, name: str, out_dir: str | None, text: str | None = None):
    payload = table.to_csv() if text is None else text
    click.echo(payload, nl=False)
    path = write_output(name, payload, out_dir)
    if path:
        click.echo(f"wrote {path}", err=True)


def _load_config(path: str) -> tuple[experiment_sim.ExperimentConfig, str]:
    try:
        cfg = cfgio.load(path)
    except cfgio.ConfigError as exc:
        _fail(str(exc))
    return cfg, digest(cfgio.dumps(cfg))


out_option = click.option("--out-dir", default=None, help="Also write the output file here (or set TRIPLETCV_OUTPUT_DIR).")


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Triplet-like correlations: CV entangled pairs vs. two-qubit Bell states."""


@main.group()
def bell():
    """Two-qubit Bell-state symmetry commands."""


def bell_table_result() -> ResultTable:
    table = dv_bell.invariance_table()
    names = [dv_bell.transform_name(a, c) for a, c in dv_bell.TRANSFORMS]
    columns = ("state", *names, *(f"witness_alpha_{n}" for n in names))
    rows = []
    for label, entries in table.items():
        rows.append(
            (label.pretty, *(e.invariant for e in entries), *(e.witness_alpha for e in entries))
        )
    return ResultTable(columns, tuple(rows), RunManifest("bell table"))


@bell.command("table")
@click.option("--format", "fmt_", type=click.Choice(["text", "csv"]), default="text", show_default=True)
@out_option
def bell_table(fmt_, out_dir):
    """Invariance of each Bell state under U(x)U and U(x)U* coordinate rotations."""
    result = bell_table_result()
    if fmt_ == "csv":
        _emit(result, "bell_table.csv", out_dir)
        return
    k = 1 + len(dv_bell.TRANSFORMS)
    header = "# transforms: " + " ".join(result.columns[1:k]) + "\n"
    body = text_rows([r[0] for r in result.rows], [[fmt(v) for v in r[1:k]] for r in result.rows])
    witnesses = "".join(
        f"# witness {r[0]} {result.columns[j]}: alpha={fmt(r[j + k - 1])}\n"
        for r in result.rows
        for j in range(1, k)
        if not r[j]
    )
    _emit(result, "bell_table.txt", out_dir, header + body + witnesses)


def bell_correlate_result(state: str, n: np.ndarray) -> ResultTable:
    norm = float(np.linalg.norm(n))
    if norm == 0:
        raise InvalidArgument("direction must be non-zero")
    if abs(norm - 1) > 1e-6:
        raise InvalidArgument(f"direction has norm {norm:.6g}; give a unit vector")
    if abs(norm - 1) > 1e-12:
        warnings.warn(f"normalizing direction with norm {norm!r}")
    label = dv_bell.BellLabel(state)
    nb = dv_bell.BlochVector.from_array(n)
    out = dv_bell.correlated_direction(label, nb).to_array()
    m = dv_bell.mirror_matrix(label)
    rows = [("correlated", *map(float, out))]
    rows += [(f"matrix_row_{i}", *map(float, m[i])) for i in range(3)]
    manifest = RunManifest("bell correlate", metadata={"state": label.pretty, "plane": dv_bell.mirror_plane(m) or "inversion"})
    return ResultTable(("quantity", "x", "y", "z"), tuple(rows), manifest)


@bell.command("correlate")
@click.option("--state", type=click.Choice([b.value for b in dv_bell.BellLabel], case_sensitive=False), required=True)
@click.option("--nx", type=float, required=True)
@click.option("--ny", type=float, required=True)
@click.option("--nz", type=float, required=True)
@out_option
def bell_correlate(state, nx, ny, nz, out_dir):
    """Direction of qubit B perfectly correlated with qubit A found along +n."""
    try:
        result = bell_correlate_result(state.lower(), np.array([nx, ny, nz]))
    except InvalidArgument as exc:
        _fail(str(exc))
    _emit(result, "bell_correlate.csv", out_dir)


@main.group()
def cv():
    """Continuous-variable experiment model commands."""


def sweep_result(cfg, cfg_digest: str, mode: str, phi2: float, grid, waveplate: bool) -> ResultTable:
    if waveplate:
        phi2 = experiment_sim.waveplate_to_stokes(phi2)
        if grid is not None:
            grid = tuple(experiment_sim.waveplate_to_stokes(g) for g in grid)
    res = experiment_sim.sweep(cfg, "fixed_phi2" if mode == "fixed" else "mirror", phi2, grid)
    rows = tuple((r.phi1_deg, r.phi2_deg, r.variance_linear, r.variance_db) for r in res.rows)
    manifest = RunManifest(
        f"cv sweep --mode {mode}",
        cfg_digest,
        metadata={**cfg.metadata, "shot_reference": res.shot_reference, "phi2_fixed_deg": phi2 if mode == "fixed" else None},
    )
    return ResultTable(("phi1_deg", "phi2_deg", "variance_linear", "variance_db"), rows, manifest)


@cv.command("sweep")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--mode", type=click.Choice(["fixed", "mirror"]), required=True)
@click.option("--phi2", type=float, default=45.0, show_default=True, help="Fixed phi2 (deg) for --mode fixed.")
@click.option("--start", type=float, default=None)
@click.option("--stop", type=float, default=None)
@click.option("--step", type=float, default=None)
@click.option("--waveplate", is_flag=True, help="Interpret angles as half-wave-plate rotations (x2).")
@out_option
def cv_sweep(config_path, mode, phi2, start, stop, step, waveplate, out_dir):
    """Correlation variance of S_C(theta_asq+phi1) -+ g S_D(theta_asq+phi2) over an angle grid."""
    cfg, d = _load_config(config_path)
    default = (0.0, -90.0, 5.0) if mode == "fixed" else (0.0, 90.0, 5.0)
    grid = tuple(default[i] if v is None else v for i, v in enumerate((start, stop, step)))
    try:
        result = sweep_result(cfg, d, mode, phi2, grid, waveplate)
    except InvalidArgument as exc:
        _fail(str(exc))
    _emit(result, f"sweep_{mode}.csv", out_dir)


def fig2_result(cfg, cfg_digest: str) -> ResultTable:
    s = experiment_sim.fig2_summary(cfg)
    rows = (
        ("individual_C_theta_sq", s.excess_c_db),
        ("individual_D_theta_sq", s.excess_d_db),
        ("sum_theta_sq", s.sum_db),
        ("difference_theta_asq", s.difference_db),
    )
    return ResultTable(("quantity", "variance_db"), rows, RunManifest("cv fig2", cfg_digest, metadata=dict(cfg.metadata)))


@cv.command("fig2")
@click.option("--config", "config_path", required=True, type=click.Path())
@out_option
def cv_fig2(config_path, out_dir):
    """Individual-beam excess noise and sum/difference correlations."""
    cfg, d = _load_config(config_path)
    _emit(fig2_result(cfg, d), "fig2.csv", out_dir)


def _cov_file_check(path: str, n_samples: int, seed: int) -> validation.CheckResult:
    try:
        with open(path) as fh:
            raw = json.load(fh)
        mean = np.asarray(raw["mean"], dtype=float)
        cov = np.asarray(raw["cov"], dtype=float)
        state = gaussian_core.GaussianState(mean, cov)
    except (OSError, KeyError, ValueError) as exc:
        _fail(f"cannot read state file {path}: {exc}")
    obs = gaussian_core.QuadratureObservable.single(0)
    return validation.check(f"state file {path}", state, obs, n_samples, seed)


def validate_result(seed: int, n_samples: int, cov_file: str | None = None) -> tuple[ResultTable, bool]:
    checks = validation.run_suite(seed, n_samples)
    if cov_file:
        checks.append(_cov_file_check(cov_file, n_samples, seed))
    rows = tuple(
        (c.name, c.analytic, c.estimate, c.standard_error, c.z if c.status == "ok" else math.nan, "pass" if c.passed else c.status if c.status != "ok" else "fail")
        for c in checks
    )
    ok = all(c.passed for c in checks)
    manifest = RunManifest("validate", seed=seed, metadata={"n_samples": n_samples, "z_limit": validation.Z_LIMIT, "result": "pass" if ok else "fail"})
    return ResultTable(("check", "analytic", "monte_carlo", "standard_error", "z", "status"), rows, manifest), ok


@main.command("validate")
@click.option("--seed", type=int, default=20240611, show_default=True)
@click.option("--samples", "n_samples", type=int, default=1_000_000, show_default=True)
@click.option("--cov-file", type=click.Path(), default=None, help="Extra JSON state {mean, cov} to check.")
@out_option
def validate_cmd(seed, n_samples, cov_file, out_dir):
    """Compare analytic variances with Monte-Carlo estimates (fails beyond 5 standard errors)."""
    if n_samples < 10_000:
        _fail("--samples must be >= 10000")
    table, ok = validate_result(seed, n_samples, cov_file)
    _emit(table, "validate.csv", out_dir)
    if not ok:
        failed = [r[0] for r in table.rows if r[-1] != "pass"]
        click.echo(f"validation failed: {', '.join(failed)}", err=True)
        sys.exit(EXIT_VALIDATION)


if __name__ == "__main__":
    main()
