"""Command-line driver: ``rsidirac <experiment> [options]``.

Experiments: fig1-ci, fig1-rsi, fig2, amplitudes, verify-reduction, invariants.
Outputs go to ``--out`` as CSV files plus ``summary.json``.

Exit codes: 0 ok, 2 configuration error, 3 physics-contract violation, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .ci import CiExperiment, default_snapshot_times, run_ci, zbw_trace_ci
from .errors import ConfigurationError, PhysicsContractError
from .field import DEFAULT_LENGTH, DEFAULT_N, Grid1D, SpinorField2, gaussian_profile
from .numerics import is_power_of_two
from .propagator import build_modes, evolve
from .reduction4 import embedded_gaussian, evolve4, random_bandlimited4, verify_reduction
from .rsi import CHANNELS, RsiExperiment, centroid_trace_rsi, run_rsi

log = logging.getLogger("rsidirac")

EXPERIMENTS = ("fig1-ci", "fig1-rsi", "fig2", "amplitudes", "verify-reduction", "invariants")
EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_IO = 0, 2, 3, 4

# dt of the randomised reduction check
REDUCTION_RANDOM_DT = 17.3


@dataclass
class RunConfig:
    experiment: str = "amplitudes"
    n: int = DEFAULT_N
    length: float = DEFAULT_LENGTH
    mass: float = 1.0
    tf: float = 40.0
    snapshots: tuple[float, ...] = field(default_factory=lambda: default_snapshot_times(40.0))
    sample_dt: float = math.pi / 32
    channel: str = "positive"
    out: str = "out"
    seed: int = 0

    def validate(self) -> "RunConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigurationError(f"experiment: unknown {self.experiment!r}")
        if not is_power_of_two(self.n) or self.n < 8:
            raise ConfigurationError(f"--n: must be a power of two >= 8, got {self.n}")
        for flag, value in (("--length", self.length), ("--mass", self.mass),
                            ("--tf", self.tf), ("--sample-dt", self.sample_dt)):
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{flag}: must be positive, got {value}")
        if any(t < 0 or t > self.tf for t in self.snapshots):
            raise ConfigurationError(f"--snapshots: times must lie in [0, {self.tf}]")
        if self.channel not in CHANNELS:
            raise ConfigurationError(f"--channel: must be positive or negative, got {self.channel!r}")
        return self

    @property
    def grid(self) -> Grid1D:
        return Grid1D(self.n, self.length)


@dataclass
class ReportBundle:
    out_dir: Path
    summary: dict
    csv_paths: list[Path] = field(default_factory=list)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rsidirac", description=__doc__.splitlines()[0])
    p.add_argument("experiment", choices=EXPERIMENTS)
    # defaults are None so that explicitly given flags can be told apart from config-file values
    p.add_argument("--n", type=int)
    p.add_argument("--length", type=float)
    p.add_argument("--mass", type=float)
    p.add_argument("--tf", type=float)
    p.add_argument("--snapshots", type=str, help="comma separated times")
    p.add_argument("--sample-dt", dest="sample_dt", type=float)
    p.add_argument("--channel", choices=tuple(CHANNELS))
    p.add_argument("--out", type=str)
    p.add_argument("--config", type=str, help="JSON file with the same keys as the flags")
    p.add_argument("--seed", type=int)
    p.add_argument("--version", action="version", version=__version__)
    return p


def _parse_times(text, flag="--snapshots") -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        items = text
    else:
        items = [s for s in str(text).split(",") if s.strip()]
    try:
        return tuple(float(s) for s in items)
    except ValueError:
        raise ConfigurationError(f"{flag}: expected comma separated numbers, got {text!r}") from None


_KEYS = ("n", "length", "mass", "tf", "snapshots", "sample_dt", "channel", "out", "seed")


def parse_config(argv=None) -> RunConfig:
    """Defaults, then config file values, then explicit flags (flags win)."""
    args = _build_parser().parse_args(argv)
    values: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_values = json.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"--config: cannot read {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"--config: invalid JSON in {args.config}: {exc}") from exc
        unknown = set(file_values) - set(_KEYS) - {"sample-dt"}
        if unknown:
            raise ConfigurationError(f"--config: unknown keys {sorted(unknown)}")
        if "sample-dt" in file_values:
            file_values["sample_dt"] = file_values.pop("sample-dt")
        values.update(file_values)
    for key in _KEYS:
        flag_value = getattr(args, key)
        if flag_value is None:
            continue
        if key in values and values[key] != flag_value:
            log.warning("--%s overrides config file value %r", key.replace("_", "-"), values[key])
        values[key] = flag_value

    cfg = RunConfig(experiment=args.experiment)
    for key in ("n", "seed"):
        if key in values:
            try:
                setattr(cfg, key, int(values[key]))
            except (TypeError, ValueError):
                raise ConfigurationError(f"--{key}: expected an integer, got {values[key]!r}") from None
    for key in ("length", "mass", "tf", "sample_dt"):
        if key in values:
            try:
                setattr(cfg, key, float(values[key]))
            except (TypeError, ValueError):
                raise ConfigurationError(f"--{key.replace('_', '-')}: expected a number") from None
    if "channel" in values:
        cfg.channel = str(values["channel"])
    if "out" in values:
        cfg.out = str(values["out"])
    if "snapshots" in values:
        cfg.snapshots = _parse_times(values["snapshots"])
    else:
        cfg.snapshots = default_snapshot_times(cfg.tf)
    return cfg.validate()


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_csv(path: Path, header: tuple[str, ...], columns) -> Path:
    cols = [np.asarray(c, dtype=float) for c in columns]
    lines = [",".join(header)]
    lines.extend(",".join(fmt(c[i]) for c in cols) for i in range(cols[0].size))
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def _field_csv(path: Path, x, values) -> Path:
    values = np.asarray(values)
    return write_csv(path, ("x", "re", "im", "abs"),
                     (x, values.real, values.imag if np.iscomplexobj(values) else np.zeros_like(x),
                      np.abs(values)))


def _ci_experiment(cfg: RunConfig) -> CiExperiment:
    return CiExperiment(cfg.grid, cfg.mass, cfg.tf, cfg.snapshots, cfg.sample_dt)


def _rsi_experiment(cfg: RunConfig, channel: str | None = None) -> RsiExperiment:
    return RsiExperiment(cfg.grid, cfg.mass, 0.0, cfg.tf, channel=channel or cfg.channel,
                         snapshot_times=cfg.snapshots, sample_dt=cfg.sample_dt)


def _amplitudes(cfg: RunConfig) -> dict:
    ci = run_ci(_ci_experiment(cfg)).result
    rsi = run_rsi(_rsi_experiment(cfg))
    return {
        "A_re": ci.amplitude.real, "A_im": ci.amplitude.imag, "P": ci.probability,
        "As_re": rsi.result.amplitude.real, "As_im": rsi.result.amplitude.imag,
        "Ps": rsi.result.probability, "As_drift_max": rsi.amplitude_drift,
    }


def _reduction(cfg: RunConfig) -> dict:
    grid = cfg.grid
    modes = build_modes(grid, cfg.mass)
    rng = np.random.default_rng(cfg.seed)
    gauss = embedded_gaussian(grid, "a")
    err_gauss = verify_reduction(gauss, cfg.tf, cfg.mass, modes)
    err_rand = verify_reduction(random_bandlimited4(grid, rng), REDUCTION_RANDOM_DT, cfg.mass, modes)
    evolved = evolve4(gauss, cfg.tf, cfg.mass).values
    leak = float(np.max(np.abs(evolved[[1, 2]])))
    return {"reduction_max_err": max(err_gauss, err_rand), "reduction_gaussian_err": err_gauss,
            "reduction_random_err": err_rand, "reduction_block_leakage": leak}


def run_experiment(cfg: RunConfig) -> ReportBundle:
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    grid = cfg.grid
    summary: dict = {"experiment": cfg.experiment, "n": cfg.n, "L": cfg.length, "dx": grid.dx,
                     "mass": cfg.mass, "tf": cfg.tf, "sample_dt": cfg.sample_dt,
                     "channel": cfg.channel, "seed": cfg.seed,
                     "dt_policy": "exact per-mode exponential (no time stepping)",
                     "snapshots": list(cfg.snapshots)}
    paths: list[Path] = []
    exp = cfg.experiment

    if exp == "fig1-ci":
        run = run_ci(_ci_experiment(cfg))
        for i, snap in enumerate(run.snapshots):
            paths.append(_field_csv(out / f"ci_rho_{i:02d}.csv", grid.x, snap.density))
        summary.update({"A_re": run.result.amplitude.real, "A_im": run.result.amplitude.imag,
                        "P": run.result.probability,
                        "norm_drift_max": float(np.max(np.abs(run.norms.values - 1.0)))})
    elif exp == "fig1-rsi":
        run = run_rsi(_rsi_experiment(cfg))
        for i, snap in enumerate(run.snapshots):
            paths.append(_field_csv(out / f"rsi_rho_s_{cfg.channel}_{i:02d}.csv", grid.x, snap.density))
        summary.update({"As_re": run.result.amplitude.real, "As_im": run.result.amplitude.imag,
                        "Ps": run.result.probability, "As_drift_max": run.amplitude_drift})
    elif exp == "fig2":
        ci_tr = zbw_trace_ci(_ci_experiment(cfg))
        rsi_tr = centroid_trace_rsi(_rsi_experiment(cfg))
        for name, tr in (("ci", ci_tr), ("rsi", rsi_tr)):
            paths.append(write_csv(out / f"trace_{name}.csv", ("t", "mean_x", "residual"),
                                   (tr.times, tr.mean_x, tr.residual)))
        w, a = ci_tr.dominant_frequency()
        summary.update({"ci_zbw_frequency": w, "ci_zbw_amplitude": a,
                        "ci_max_residual": ci_tr.max_residual, "ci_drift_slope": ci_tr.slope,
                        "rsi_max_residual": rsi_tr.max_residual, "rsi_drift_slope": rsi_tr.slope,
                        "norm_drift_max": float(np.max(np.abs(ci_tr.total_weight - 1.0)))})
    elif exp == "amplitudes":
        summary.update(_amplitudes(cfg))
    elif exp == "verify-reduction":
        summary.update(_reduction(cfg))
    elif exp == "invariants":
        summary.update(_amplitudes(cfg))
        summary.update(_reduction(cfg))
        ci_tr = zbw_trace_ci(_ci_experiment(cfg))
        summary["norm_drift_max"] = float(np.max(np.abs(ci_tr.total_weight - 1.0)))
        summary.update(_projector_errors(cfg))
        summary.update(_unitarity_check(cfg))

    summary["csv_files"] = [p.name for p in paths]
    try:
        (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {out / 'summary.json'}: {exc}") from exc
    return ReportBundle(out, summary, paths)


def _projector_errors(cfg: RunConfig) -> dict:
    m = build_modes(cfg.grid, cfg.mass)
    eye = np.eye(2)
    pp, pm, h = m.p_plus, m.p_minus, m.hamiltonian
    return {
        "proj_completeness_err": float(np.max(np.abs(pp + pm - eye))),
        "proj_idempotence_err": float(max(np.max(np.abs(pp @ pp - pp)), np.max(np.abs(pm @ pm - pm)))),
        "proj_orthogonality_err": float(np.max(np.abs(pp @ pm))),
        "proj_commutator_err": float(max(np.max(np.abs(h @ pp - pp @ h)), np.max(np.abs(h @ pm - pm @ h)))),
    }


def _unitarity_check(cfg: RunConfig, trials: int = 4) -> dict:
    rng = np.random.default_rng(cfg.seed)
    modes = build_modes(cfg.grid, cfg.mass)
    worst = 0.0
    for _ in range(trials):
        spinor = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        psi = SpinorField2.from_profile(cfg.grid, gaussian_profile(cfg.grid), spinor).normalized()
        dt = float(rng.uniform(-cfg.tf, cfg.tf))
        worst = max(worst, abs(evolve(psi, dt, modes).norm2() - 1.0))
    return {"random_unitarity_drift_max": worst}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = parse_config(argv)
    except ConfigurationError as exc:
        print(f"rsidirac: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        bundle = run_experiment(cfg)
    except ConfigurationError as exc:
        print(f"rsidirac: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PhysicsContractError as exc:
        print(f"rsidirac: physics contract violated: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except OSError as exc:
        print(f"rsidirac: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(json.dumps({k: v for k, v in bundle.summary.items() if k != "csv_files"}, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
