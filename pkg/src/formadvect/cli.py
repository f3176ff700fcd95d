"""Experiment harness and command-line interface.

A small registry of advection scenarios plus the sweep engines used to
reproduce the convergence, dispersion, conservation and reversibility
studies.  Every engine writes schema-versioned CSV files and evaluates
its own pass/fail thresholds; the process exit code is 0 iff all checks
pass.  Given the same configuration and seed, reruns are byte-identical.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import advect, forms
from .forms import AnalyticForm, DiscreteForm
from .mesh import build_distorted, build_uniform, mesh_summary_csv
from .operators import VelocityField, mass_matrix

__all__ = [
    "RunConfig",
    "SCENARIOS",
    "run",
    "converge_h",
    "converge_p",
    "dispersion",
    "conservation",
    "reverse",
    "main",
]


@dataclass
class RunConfig:
    scenario: str = "sine_wave"
    nx: int = 4
    ny: int = 4
    p: int = 3
    p_t: int = 4
    dt: float = 0.1
    t_end: float = 1.0
    distortion: float = 0.0
    out: str = "results"
    seed: int = 0
    reverse_at: float | None = None

    def validate(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(
                f"unknown scenario {self.scenario!r}; choose from {sorted(SCENARIOS)}"
            )
        for name in ("nx", "ny", "p", "p_t"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.dt <= 0 or self.t_end <= 0:
            raise ConfigError("dt and t_end must be positive")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    """A named advection setup: domain, initial 2-form, velocity, exact."""

    domain: tuple
    initial: AnalyticForm
    velocity: VelocityField
    exact: object = None  # callable t -> AnalyticForm, when known


def _ones(x, y):
    return np.ones_like(np.asarray(x, dtype=float))


def _zeros(x, y):
    return np.zeros_like(np.asarray(x, dtype=float))


def _bell(x, y):
    inside = (x >= 0.0) & (x <= 0.5) & (y >= 0.0) & (y <= 0.5)
    return np.where(inside, np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y), 0.0)


def _translating(f, width):
    def exact(t):
        shift = t % width
        return AnalyticForm(2, (lambda x, y: f((x - shift) % width, y),))
    return exact


def _rudman_vx(x, y):
    return np.sin(np.pi * x) ** 2 * np.sin(2 * np.pi * y)


def _rudman_vy(x, y):
    return -np.sin(2 * np.pi * x) * np.sin(np.pi * y) ** 2


SCENARIOS = {
    # the pi-frequency sine wave needs an even domain extent to stay
    # smooth under periodic wraparound; four periods keep the spatial
    # resolution scale of a 4x4 mesh above the time-integration floor
    "sine_wave": Scenario(
        (0.0, 4.0, 0.0, 4.0),
        AnalyticForm(2, (lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y),)),
        VelocityField(_ones, _zeros),
        _translating(lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y), 4.0),
    ),
    "sine_wave_2pi": Scenario(
        (0.0, 1.0, 0.0, 1.0),
        AnalyticForm(2, (lambda x, y: np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y),)),
        VelocityField(_ones, _zeros),
        _translating(
            lambda x, y: np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y), 1.0
        ),
    ),
    # y-independent wave: the transport error then carries the extra
    # superconvergence order of the 1D scheme, which keeps refinement
    # studies in the clean density-approximation regime
    "sine_wave_x": Scenario(
        (0.0, 1.0, 0.0, 1.0),
        AnalyticForm(2, (lambda x, y: np.sin(2 * np.pi * x) * np.ones_like(y),)),
        VelocityField(_ones, _zeros),
        _translating(lambda x, y: np.sin(2 * np.pi * x) * np.ones_like(y), 1.0),
    ),
    "sine_bell": Scenario(
        (0.0, 1.0, 0.0, 1.0),
        AnalyticForm(2, (_bell,)),
        VelocityField(_ones, _zeros),
        _translating(_bell, 1.0),
    ),
    "static": Scenario(
        (0.0, 1.0, 0.0, 1.0),
        AnalyticForm(2, (lambda x, y: np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y),)),
        VelocityField(_zeros, _zeros),
        lambda t: AnalyticForm(
            2, (lambda x, y: np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y),)
        ),
    ),
    "rudman": Scenario(
        (0.0, 1.0, 0.0, 1.0),
        AnalyticForm(2, (lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y),)),
        VelocityField(_rudman_vx, _rudman_vy),
    ),
}


# ---------------------------------------------------------------------------
# output helpers

def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_csv(path: Path, schema: str, columns: list[str], rows):
    lines = [f"# schema={schema} v1", ",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def _write_manifest(path: Path, config: RunConfig, extras: dict):
    lines = []
    for f in fields(config):
        lines.append(f"{f.name} = {getattr(config, f.name)}")
    for k, v in extras.items():
        lines.append(f"{k} = {v}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def _field_grid_rows(form: DiscreteForm, samples_per_el: int = 12):
    """Reconstructed density samples (x, y, value) on a per-element grid."""
    pts = np.linspace(-1.0, 1.0, samples_per_el + 1)[:-1] + 1.0 / samples_per_el
    s = forms.reconstruct(form, pts)
    rows = []
    for el in range(s.x.shape[0]):
        for iy in range(pts.size):
            for ix in range(pts.size):
                rows.append(
                    (float(s.x[el, iy, ix]), float(s.y[el, iy, ix]),
                     float(s.values[el, iy, ix]))
                )
    return rows


def _build_mesh(config: RunConfig, domain):
    if config.distortion:
        return build_distorted(
            config.nx, config.ny, config.p, config.distortion, domain
        )
    return build_uniform(config.nx, config.ny, domain, True, True, config.p)


def _setup(config: RunConfig):
    scen = SCENARIOS[config.scenario]
    mesh = _build_mesh(config, scen.domain)
    rho0 = forms.reduce(scen.initial, mesh)
    problem = advect.AdvectionProblem(
        mesh, scen.velocity, rho0, config.p_t, config.dt, config.t_end,
        reverse_at=config.reverse_at,
    )
    return scen, mesh, problem


# ---------------------------------------------------------------------------
# subcommand engines

def run(config: RunConfig) -> int:
    """One solve: error-vs-time, mass-vs-time, final snapshot, manifest."""
    config.validate()
    out = Path(config.out)
    scen, mesh, problem = _setup(config)
    result = advect.solve(problem, exact=scen.exact)
    drift = advect.mass_history(result)

    err_by_step = {s: e for s, _, e in result.l2_errors}
    rows = [
        (step, float(result.times[step]), err_by_step.get(step), float(drift[step]))
        for step in range(problem.n_steps + 1)
    ]
    _write_csv(out / "error_vs_time.csv", "error_vs_time",
               ["step", "t", "l2_error", "mass_drift"], rows)
    _write_csv(out / "mass_vs_time.csv", "mass_vs_time",
               ["step", "t", "mass", "drift"],
               [(s, float(result.times[s]), float(result.mass[s]), float(drift[s]))
                for s in range(problem.n_steps + 1)])
    forms.dof_snapshot_csv(result.final, out / "final_snapshot.csv", result.times[-1])
    _write_csv(out / "final_field.csv", "field_grid", ["x", "y", "value"],
               _field_grid_rows(result.final))
    mesh_summary_csv(mesh, out / "mesh_summary.csv")
    _write_manifest(out / "run_manifest.txt", config,
                    {"n_steps": problem.n_steps, "final_mass_drift": drift[-1]})
    return 0


def converge_h(config: RunConfig, nx_list) -> int:
    """Mesh-refinement sweep; fits log error vs log h.

    The sweep parameter config.p is the polynomial degree of the
    advected density (the experiment-label convention, matching the
    reported rates of degree+1), so elements carry nodal order p+1.
    Refinement is in x with ny fixed from the config; the default
    scenario for this study is the y-independent sine wave.
    """
    config.validate()
    if len(nx_list) < 3:
        raise ConfigError("need at least 3 mesh sizes for a rate fit")
    out = Path(config.out)
    scen = SCENARIOS[config.scenario]
    width = scen.domain[1] - scen.domain[0]
    rows, errors, hs = [], [], []
    for nx in nx_list:
        cfg = replace(config, nx=nx, p=config.p + 1)
        _, _, problem = _setup(cfg)
        result = advect.solve(problem)
        err = forms.l2_error(result.final, scen.exact(result.times[-1]))
        h = width / nx
        rows.append((config.p, nx, float(h), float(err)))
        errors.append(err)
        hs.append(h)
    _write_csv(out / "h_convergence_points.csv", "h_convergence",
               ["degree", "nx", "h", "l2_error"], rows)

    exact_case = max(errors) < 1e-11
    if exact_case:
        slope, ok = float("nan"), True
        flag = "exactness: errors at roundoff; rate fit skipped"
    else:
        slope = float(np.polyfit(np.log(hs), np.log(errors), 1)[0])
        ok = abs(slope - (config.p + 1)) <= 0.4
        flag = ""
    _write_csv(out / "h_convergence_rates.csv", "h_convergence_rates",
               ["degree", "slope", "expected", "n_points", "flag"],
               [(config.p, slope, config.p + 1, len(nx_list), flag)])
    _write_manifest(out / "run_manifest.txt", config,
                    {"nx_list": ",".join(map(str, nx_list)), "slope": slope})
    return 0 if ok else 1


def converge_p(config: RunConfig, p_list) -> int:
    """Order sweep on a fixed mesh; exponential decay shows as log-linear.

    A p_t = 1 sweep is emitted alongside the configured time order to
    show the error floor set by the time integration.
    """
    config.validate()
    out = Path(config.out)
    scen = SCENARIOS[config.scenario]
    rows, errors = [], []
    time_orders = [config.p_t] + ([1] if config.p_t != 1 else [])
    for p_t in time_orders:
        for p in p_list:
            cfg = replace(config, p=p, p_t=p_t)
            _, _, problem = _setup(cfg)
            result = advect.solve(problem)
            err = forms.l2_error(result.final, scen.exact(result.times[-1]))
            rows.append((p, p_t, float(err)))
            if p_t == config.p_t:
                errors.append(err)
    _write_csv(out / "p_convergence.csv", "p_convergence",
               ["p", "p_t", "l2_error"], rows)
    corr = float(np.corrcoef(np.asarray(p_list, float), np.log(errors))[0, 1])
    ratio = errors[0] / errors[-1] if errors[-1] > 0 else float("inf")
    _write_manifest(out / "run_manifest.txt", config,
                    {"p_list": ",".join(map(str, p_list)),
                     "correlation": corr, "first_to_last_ratio": ratio})
    return 0 if corr <= -0.99 else 1


def _fit_phase(profile: np.ndarray, xs: np.ndarray, omega: float):
    """Least-squares fit of a sin(omega x) + b cos(omega x); returns (phase, amp)."""
    design = np.column_stack([np.sin(omega * xs), np.cos(omega * xs)])
    coef, *_ = np.linalg.lstsq(design, profile, rcond=None)
    a, b = coef
    amp = float(np.hypot(a, b))
    if amp < 1e-6:
        raise ValueError("degenerate amplitude; phase fit failed")
    return float(np.arctan2(b, a)), amp


def _wrap_angle(d: float) -> float:
    return (d + np.pi) % (2.0 * np.pi) - np.pi


def dispersion(config: RunConfig, omegas) -> int:
    """Phase-speed error of advected sine waves of increasing frequency.

    Runs its own wave family sin(omega x) under unit velocity on the
    periodic unit square (the scenario field only supplies mesh and time
    parameters).  The phase of the y-averaged profile is fitted after
    every step and the per-step deviations from the exact shift are
    accumulated, which keeps the measurement unambiguous even when the
    total numerical phase lag exceeds pi.
    """
    config.validate()
    out = Path(config.out)
    domain = (0.0, 1.0, 0.0, 1.0)
    width = domain[1] - domain[0]
    mesh = _build_mesh(config, domain)
    workspace = advect.AdvectionWorkspace(mesh, VelocityField(_ones, _zeros))
    rows = []
    for omega in omegas:
        if abs((omega * width) % (2 * np.pi)) > 1e-9 * max(1.0, omega):
            raise ConfigError(
                f"omega={omega} is not periodic-compatible with the unit domain"
            )
        rho0 = forms.reduce(AnalyticForm(2, (lambda x, y: np.sin(omega * x),)), mesh)
        problem = advect.AdvectionProblem(
            mesh, workspace.operator.velocity, rho0, config.p_t, config.dt,
            config.t_end,
        )
        result = advect.solve(problem, snapshot_stride=1, workspace=workspace)
        pts = np.linspace(-1.0, 1.0, 9)[:-1] + 1.0 / 8.0
        deviation = 0.0
        prev_phase = None
        for _, _, form in result.snapshots:
            s = forms.reconstruct(form, pts)
            profile = s.values.mean(axis=1).ravel()  # average over y
            xs = s.x[:, 0, :].ravel()
            phase, _amp = _fit_phase(profile, xs, omega)
            if prev_phase is not None:
                deviation += _wrap_angle(phase - prev_phase + omega * config.dt)
            prev_phase = phase
        vel_error = abs(deviation) / (omega * result.times[-1])
        rows.append((float(omega), config.p_t, float(vel_error)))
    _write_csv(out / "dispersion.csv", "dispersion",
               ["omega", "p_t", "velocity_error"], rows)
    _write_manifest(out / "run_manifest.txt", config,
                    {"omegas": ",".join(repr(float(o)) for o in omegas)})
    errs = [r[2] for r in rows]
    monotone = all(b >= a - 1e-12 for a, b in zip(errs, errs[1:]))
    return 0 if monotone else 1


def conservation(config: RunConfig) -> int:
    """Total-mass drift history of the sine-bell run."""
    config.validate()
    out = Path(config.out)
    scen, mesh, problem = _setup(config)
    result = advect.solve(problem)
    drift = advect.mass_history(result)
    _write_csv(out / "conservation.csv", "conservation",
               ["step", "t", "mass", "drift"],
               [(s, float(result.times[s]), float(result.mass[s]), float(drift[s]))
                for s in range(problem.n_steps + 1)])
    _write_manifest(out / "run_manifest.txt", config,
                    {"max_drift": float(np.max(np.abs(drift))),
                     "final_drift": float(drift[-1])})
    ok = abs(drift[-1]) < 1e-12
    if problem.n_steps >= 1000:
        ok = ok and abs(drift[1000]) <= 1e-13
    return 0 if ok else 1


def reverse(config: RunConfig) -> int:
    """Forward run, velocity reversal, and recovery-error measurement."""
    config.validate()
    out = Path(config.out)
    cfg = config if config.reverse_at is not None else replace(
        config, reverse_at=config.t_end / 2.0
    )
    out.mkdir(parents=True, exist_ok=True)
    scen, mesh, problem = _setup(cfg)
    result = advect.solve(problem)
    initial, final = problem.initial, result.final
    diff = final.coeffs - initial.coeffs
    m2 = mass_matrix(mesh, mesh.top_degree())
    recovery_l2 = float(np.sqrt(diff @ (m2.mat @ diff)))
    recovery_max = float(np.max(np.abs(diff)))
    forms.dof_snapshot_csv(initial, out / "reverse_before.csv", 0.0)
    forms.dof_snapshot_csv(final, out / "reverse_after.csv", result.times[-1])
    _write_csv(out / "reverse_before_field.csv", "field_grid",
               ["x", "y", "value"], _field_grid_rows(initial))
    _write_csv(out / "reverse_after_field.csv", "field_grid",
               ["x", "y", "value"], _field_grid_rows(final))
    _write_csv(out / "reverse_summary.csv", "reverse_summary",
               ["metric", "value"],
               [("recovery_l2", recovery_l2), ("recovery_max", recovery_max)])
    _write_manifest(out / "run_manifest.txt", cfg,
                    {"recovery_l2": recovery_l2, "recovery_max": recovery_max})
    return 0 if recovery_l2 <= 1e-9 else 1


# ---------------------------------------------------------------------------
# argument parsing

def _load_config_file(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    return values


_INT_KEYS = {"nx", "ny", "p", "p_t", "seed"}
_FLOAT_KEYS = {"dt", "t_end", "distortion", "reverse_at"}


def _coerce(key: str, val: str):
    if key in _INT_KEYS:
        return int(val)
    if key in _FLOAT_KEYS:
        return float(val)
    return val


def _config_from_args(args) -> RunConfig:
    config = RunConfig()
    if args.config:
        for key, val in _load_config_file(args.config).items():
            if key not in {f.name for f in fields(RunConfig)}:
                raise ConfigError(f"unknown config key {key!r}")
            setattr(config, key, _coerce(key, val))
    overrides = {
        "scenario": args.scenario, "nx": args.nx, "ny": args.ny, "p": args.p,
        "p_t": args.pt, "dt": args.dt, "t_end": args.t_end,
        "distortion": args.distortion, "out": args.out, "seed": args.seed,
        "reverse_at": getattr(args, "reverse_at", None),
    }
    for key, val in overrides.items():
        if val is not None:
            setattr(config, key, val)
    return config


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="formadvect",
        description="Structure-preserving spectral advection experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "run": run, "converge-h": converge_h, "converge-p": converge_p,
        "dispersion": dispersion, "conservation": conservation, "reverse": reverse,
    }
    for name in commands:
        p = sub.add_parser(name)
        p.add_argument("--scenario")
        p.add_argument("--nx", type=int)
        p.add_argument("--ny", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--pt", type=int)
        p.add_argument("--dt", type=float)
        p.add_argument("--t-end", type=float, dest="t_end")
        p.add_argument("--distortion", type=float)
        p.add_argument("--out")
        p.add_argument("--config")
        p.add_argument("--seed", type=int)
        if name == "reverse":
            p.add_argument("--reverse-at", type=float, dest="reverse_at")
        if name == "converge-h":
            p.add_argument("--nx-list", default="4,8,16", dest="nx_list")
        if name == "converge-p":
            p.add_argument("--p-list", default="2,4,6,8,10,12", dest="p_list")
        if name == "dispersion":
            p.add_argument("--omega-list", default="", dest="omega_list")

    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "converge-h":
            return converge_h(config, _int_list(args.nx_list))
        if args.command == "converge-p":
            return converge_p(config, _int_list(args.p_list))
        if args.command == "dispersion":
            omegas = (_float_list(args.omega_list)
                      or [2 * np.pi, 4 * np.pi, 6 * np.pi, 8 * np.pi])
            return dispersion(config, omegas)
        return commands[args.command](config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
