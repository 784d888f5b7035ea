"""Run loop, configuration resolution and the convergence harness."""
from __future__ import annotations

import csv
import logging
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .diagnostics import CSV_COLUMNS, DiagnosticsTracker, convergence_orders, error_norms, restrict
from .grid import MIN_NODES, ScalarField, write_snapshot
from .integrator import RK4_CFL_LIMIT, SchemeConfig, compute_dt, rk4_step
from .models import CASES, default_ny, exact_solution, get_case, initial_condition
from .reconstruction import SCHEMES

log = logging.getLogger(__name__)

OUTPUT_ENV = "MPPFLOW_OUTPUT_DIR"
CONVERGENCE_COLUMNS = ("N", "l1_error", "l1_order", "linf_error", "linf_order", "min", "max")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    case: str
    scheme: str = "hermite_linear"
    limiter: bool = True
    nx: int | None = None
    ny: int | None = None
    cfl: float = 0.6
    tfinal: float | None = None
    diag_every: int = 10
    snapshot_times: tuple[float, ...] = ()
    output: str | None = None
    x_min: float | None = None
    x_max: float | None = None
    y_min: float | None = None
    y_max: float | None = None
    backend: str | None = None

    def resolved(self) -> "RunConfig":
        """Copy with every case default filled in."""
        case = get_case(self.case)
        out = RunConfig(**asdict(self))
        out.nx = out.nx or case.n_x
        out.ny = out.ny or default_ny(case, out.nx)
        out.tfinal = case.t_final if out.tfinal is None else out.tfinal
        for name, value in zip(("x_min", "x_max", "y_min", "y_max"), case.domain):
            if getattr(out, name) is None:
                setattr(out, name, value)
        if out.output is None:
            out.output = str(Path(os.environ.get(OUTPUT_ENV, "runs")) / out.case)
        return out

    @property
    def domain(self):
        return (self.x_min, self.x_max, self.y_min, self.y_max)

    def scheme_config(self) -> SchemeConfig:
        return SchemeConfig(scheme=self.scheme, limiter=self.limiter, cfl=self.cfl, backend=self.backend)


CONFIG_KEYS = {f.name for f in fields(RunConfig)}


def _to_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("on", "true", "yes", "1"):
        return True
    if text in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"limiter: expected on/off, got {value!r}")


def _convert(key, value):
    try:
        if key in ("nx", "ny", "diag_every"):
            return int(value)
        if key in ("cfl", "tfinal", "x_min", "x_max", "y_min", "y_max"):
            return float(value)
        if key == "limiter":
            return _to_bool(value)
        if key == "snapshot_times":
            if isinstance(value, str):
                value = value.replace(",", " ").split()
            return tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: cannot parse {value!r} ({exc})") from None
    return value


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    entries = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        entries[key] = value
    return entries


def parse_config(flags: dict, config_file=None) -> RunConfig:
    """Merge explicit flags over file entries over case defaults, then validate."""
    merged = read_config_file(config_file) if config_file else {}
    merged.update({k: v for k, v in flags.items() if v is not None})
    unknown = set(merged) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "case" not in merged:
        raise ConfigError("case: no case given")
    if merged["case"] not in CASES:
        raise ConfigError(f"case: unknown case {merged['case']!r}; valid cases: {', '.join(CASES)}")
    values = {k: _convert(k, v) for k, v in merged.items()}
    cfg = RunConfig(**values).resolved()
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    if cfg.scheme not in SCHEMES:
        raise ConfigError(f"scheme: unknown scheme {cfg.scheme!r}; expected one of {sorted(SCHEMES)}")
    for key in ("nx", "ny"):
        if getattr(cfg, key) < MIN_NODES:
            raise ConfigError(f"{key}: {getattr(cfg, key)} is below the minimum of {MIN_NODES} nodes")
    if not 0.0 < cfg.cfl <= RK4_CFL_LIMIT:
        raise ConfigError(f"cfl: {cfg.cfl} outside (0, 2/3], the RK4 linear stability range")
    if not cfg.tfinal > 0.0:
        raise ConfigError(f"tfinal: must be positive, got {cfg.tfinal}")
    if cfg.diag_every < 1:
        raise ConfigError(f"diag_every: must be at least 1, got {cfg.diag_every}")
    if not (cfg.x_max > cfg.x_min and cfg.y_max > cfg.y_min):
        raise ConfigError(f"domain: degenerate extents {cfg.domain}")
    if cfg.backend not in (None, "numpy", "cython"):
        raise ConfigError(f"backend: expected numpy or cython, got {cfg.backend!r}")


@dataclass
class RunResult:
    field: ScalarField
    time: float
    steps: int
    tracker: DiagnosticsTracker
    snapshots: dict = field(default_factory=dict)


def simulate(rho0: ScalarField, model, cfg: SchemeConfig, t_final: float, diag_every: int = 10,
             snapshot_times=(), on_snapshot=None, dt=None) -> RunResult:
    """Advance ``rho0`` to ``t_final``; a step is shortened to land on each output time.

    ``dt`` fixes the step size instead of the CFL rule.
    """
    grid = model.grid
    tracker = DiagnosticsTracker(grid, model.is_kinetic)
    rho = rho0.values.copy()
    vel = model.velocity(rho)
    t, step = 0.0, 0
    tracker.record(step, t, rho, efield=vel.efield)

    snaps = sorted({float(s) for s in snapshot_times if 0.0 <= s <= t_final})
    snapshots = {}
    if snaps and snaps[0] == 0.0:
        snapshots[0.0] = ScalarField(grid, rho.copy())
        if on_snapshot:
            on_snapshot(snapshots[0.0], 0.0)
    targets = [s for s in snaps if s > 0.0] + [t_final]

    theta_min = None
    while targets:
        target = targets[0]
        step_dt = dt if dt is not None else compute_dt(vel.alpha_x, vel.alpha_y, grid, cfg.cfl)
        landing = t + step_dt >= target * (1.0 - 1e-14)
        if landing:
            step_dt = target - t
        result = rk4_step(rho, model, cfg, step_dt, velocity=vel)
        rho = result.rho
        ScalarField(grid, rho).check_finite()
        step += 1
        t = target if landing else t + step_dt
        if result.theta_min is not None:
            theta_min = result.theta_min if theta_min is None else min(theta_min, result.theta_min)
        vel = model.velocity(rho)
        if landing:
            targets.pop(0)
        if step % diag_every == 0 or not targets:
            tracker.record(step, t, rho, dt=step_dt, efield=vel.efield, theta_min=theta_min)
            theta_min = None
        if landing and t in snaps:
            snapshots[t] = ScalarField(grid, rho.copy())
            if on_snapshot:
                on_snapshot(snapshots[t], t)
    return RunResult(ScalarField(grid, rho), t, step, tracker, snapshots)


def write_diagnostics(path, records) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.csv_row())


def write_meta(path, cfg: RunConfig, bounds, extra=None) -> None:
    lines = [f"{k} = {v}" for k, v in asdict(cfg).items()]
    lines += [f"rho_m = {bounds.rho_m!r}", f"rho_M = {bounds.rho_M!r}"]
    lines += [f"{k} = {v}" for k, v in (extra or {}).items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def run_case(cfg: RunConfig) -> RunResult:
    """Run a resolved configuration and write ``diagnostics.csv``, snapshots and ``run.meta``."""
    cfg = cfg.resolved()
    validate(cfg)
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    rho0, bounds, model = initial_condition(cfg.case, cfg.nx, cfg.ny, cfg.domain)
    from .kernels import BACKEND

    write_meta(out / "run.meta", cfg, bounds, {"kernel_backend": cfg.backend or BACKEND})

    def save(snapshot, time):
        write_snapshot(out / f"snapshot_t{time:.6g}.dat", snapshot, time)

    log.info("running %s on %dx%d to t=%g", cfg.case, cfg.nx, cfg.ny, cfg.tfinal)
    result = simulate(rho0, model, cfg.scheme_config(), cfg.tfinal, cfg.diag_every, cfg.snapshot_times, save)
    write_diagnostics(out / "diagnostics.csv", result.tracker.records)
    return result


def final_solution(cfg: RunConfig, n_x: int) -> tuple[ScalarField, RunResult]:
    case = get_case(cfg.case)
    rc = RunConfig(**{**asdict(cfg), "nx": n_x, "ny": default_ny(case, n_x)})
    rho0, _, model = initial_condition(rc.case, rc.nx, rc.ny, cfg.domain if cfg.x_min is not None else None)
    result = simulate(rho0, model, rc.scheme_config(), cfg.tfinal if cfg.tfinal is not None else case.t_final,
                      diag_every=10**9)
    return result.field, result


def converge(cfg: RunConfig, meshes) -> list[dict]:
    """Error/order table over doubled meshes.

    Cases with a closed-form solution are compared to it; the others against
    the next finer mesh restricted to the shared nodes.
    """
    meshes = [int(n) for n in meshes]
    if len(meshes) < 2:
        raise ConfigError("meshes: at least two meshes are needed")
    case = get_case(cfg.case)
    cfg = RunConfig(**{**asdict(cfg)})
    cfg.tfinal = case.t_final if cfg.tfinal is None else cfg.tfinal
    fields_ = {}
    for n in meshes:
        fields_[n], _ = final_solution(cfg, n)
    errors = []
    if case.exact is not None:
        for n in meshes:
            exact = exact_solution(cfg.case, fields_[n].grid, cfg.tfinal)
            errors.append(error_norms(fields_[n].values, exact.values))
    else:
        finer = 2 * meshes[-1]
        fields_[finer], _ = final_solution(cfg, finer)
        for n in meshes:
            ref = fields_.get(2 * n)
            if ref is None:
                ref, _ = final_solution(cfg, 2 * n)
                fields_[2 * n] = ref
            errors.append(error_norms(fields_[n].values, restrict(ref.values)))
    l1_orders = [None] + convergence_orders([e[0] for e in errors])
    linf_orders = [None] + convergence_orders([e[1] for e in errors])
    rows = []
    for k, n in enumerate(meshes):
        rows.append({
            "N": n, "l1_error": errors[k][0], "l1_order": l1_orders[k],
            "linf_error": errors[k][1], "linf_order": linf_orders[k],
            "min": float(fields_[n].values.min()), "max": float(fields_[n].values.max()),
        })
    return rows


def write_convergence(path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CONVERGENCE_COLUMNS)
        for row in rows:
            writer.writerow(["" if row[c] is None else repr(row[c]) for c in CONVERGENCE_COLUMNS])


def format_table(rows) -> str:
    def fmt(v, spec):
        return "--" if v is None else format(v, spec)

    head = f"{'N':>6} {'L1 error':>10} {'order':>6} {'Linf error':>10} {'order':>6} {'min':>12} {'max':>12}"
    body = [
        f"{r['N']:>6} {r['l1_error']:>10.3e} {fmt(r['l1_order'], '6.2f'):>6} {r['linf_error']:>10.3e} "
        f"{fmt(r['linf_order'], '6.2f'):>6} {r['min']:>12.4e} {r['max']:>12.4e}"
        for r in rows
    ]
    return "\n".join([head, *body])
