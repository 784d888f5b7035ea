"""Conserved quantities, field norms, errors and convergence orders."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .grid import Grid2D

CSV_COLUMNS = (
    "step", "time", "dt", "l1_rel", "l2_rel", "mass_rel", "energy_rel", "kinetic_rel",
    "entropy_rel", "efield_l2", "efield_linf", "min", "max", "theta_min",
)

# below this fraction of the L1 norm an initial value counts as zero
ZERO_REFERENCE = 1e-10


def lp_norm(values, grid: Grid2D, p: int = 1) -> float:
    a = np.abs(np.asarray(values, dtype=np.float64))
    if p == 1:
        return float(grid.dx * grid.dy * a.sum())
    if p == 2:
        return math.sqrt(grid.dx * grid.dy * float((a * a).sum()))
    raise ValueError(f"p must be 1 or 2, got {p}")


def mass(values, grid: Grid2D) -> float:
    return float(grid.dx * grid.dy * np.asarray(values).sum())


def kinetic_energy(f, grid: Grid2D) -> float:
    v = grid.y
    return float(grid.dx * grid.dy * (np.asarray(f) * (v * v)[:, None]).sum())


def vp_energy(f, efield, grid: Grid2D) -> float:
    """Kinetic plus field energy ``sum f v^2 dx dv + sum E^2 dx``."""
    e = np.asarray(efield, dtype=np.float64)
    return kinetic_energy(f, grid) + float(grid.dx * (e * e).sum())


def vp_entropy(f, grid: Grid2D) -> float:
    """``sum f log f dx dv`` with the integrand taken as 0 where ``f <= 0``."""
    f = np.asarray(f, dtype=np.float64)
    positive = f > 0.0
    s = np.zeros_like(f)
    s[positive] = f[positive] * np.log(f[positive])
    return float(grid.dx * grid.dy * s.sum())


def efield_norms(efield, dx: float) -> tuple[float, float]:
    e = np.asarray(efield, dtype=np.float64)
    return math.sqrt(dx * float((e * e).sum())), float(np.abs(e).max())


def error_norms(numerical, reference) -> tuple[float, float]:
    """Mean absolute (discrete L1) and maximum error."""
    diff = np.abs(np.asarray(numerical) - np.asarray(reference))
    return float(diff.mean()), float(diff.max())


def restrict(fine: np.ndarray, factor: int = 2) -> np.ndarray:
    """Fine-grid values at the nodes shared with a grid ``factor`` times coarser."""
    return np.asarray(fine)[::factor, ::factor]


def convergence_orders(errors) -> list[float | None]:
    """``log2(e_k / e_{k+1})`` for successive doublings; ``None`` where undefined."""
    orders = []
    for coarse, fine in zip(errors[:-1], errors[1:]):
        if coarse > 0 and fine > 0:
            orders.append(math.log2(coarse / fine))
        else:
            orders.append(None)
    return orders


def relative_deviation(value: float, initial: float, scale: float) -> float:
    """``(Q - Q0)/|Q0|``; falls back to ``scale`` as denominator when ``Q0`` is zero."""
    denom = abs(initial)
    if denom <= ZERO_REFERENCE * scale:
        denom = scale
    return (value - initial) / denom


@dataclass
class DiagnosticsRecord:
    step: int
    time: float
    dt: float | None
    l1: float
    l2: float
    mass: float
    l1_rel: float
    l2_rel: float
    mass_rel: float
    min: float
    max: float
    energy: float | None = None
    kinetic: float | None = None
    entropy: float | None = None
    energy_rel: float | None = None
    kinetic_rel: float | None = None
    entropy_rel: float | None = None
    efield_l2: float | None = None
    efield_linf: float | None = None
    theta_min: float | None = None

    def csv_row(self) -> list[str]:
        data = asdict(self)
        return ["" if data[c] is None else repr(data[c]) for c in CSV_COLUMNS]


class DiagnosticsTracker:
    """Computes records relative to the quantities cached at the first call."""

    def __init__(self, grid: Grid2D, kinetic: bool):
        self.grid = grid
        self.kinetic = kinetic
        self.initial = None
        self.records: list[DiagnosticsRecord] = []

    def _quantities(self, values, efield):
        g = self.grid
        q = {"l1": lp_norm(values, g, 1), "l2": lp_norm(values, g, 2), "mass": mass(values, g)}
        if self.kinetic:
            q["kinetic"] = kinetic_energy(values, g)
            q["energy"] = vp_energy(values, efield, g)
            q["entropy"] = vp_entropy(values, g)
        return q

    def record(self, step, time, values, dt=None, efield=None, theta_min=None) -> DiagnosticsRecord:
        values = np.asarray(values)
        q = self._quantities(values, efield)
        if self.initial is None:
            self.initial = q
        scale = self.initial["l1"] or 1.0
        rel = {f"{k}_rel": relative_deviation(v, self.initial[k], max(scale, abs(self.initial[k]))) for k, v in q.items()}
        rec = DiagnosticsRecord(
            step=step, time=float(time), dt=dt, min=float(values.min()), max=float(values.max()),
            theta_min=theta_min, **q, **rel,
        )
        if self.kinetic and efield is not None:
            rec.efield_l2, rec.efield_linf = efield_norms(efield, self.grid.dx)
        self.records.append(rec)
        return rec

