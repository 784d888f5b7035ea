"""Uniform periodic grids, node fields and the snapshot text format.

Arrays are stored row-major with shape ``(n_y, n_x)``: ``values[j, i]`` is the
value at ``(x_i, y_j)``, so sweeps along x are contiguous.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

MIN_NODES = 8

X_AXIS = 1
Y_AXIS = 0


@dataclass(frozen=True)
class Grid2D:
    """Periodic node grid; the right/top endpoint is identified with the left/bottom one."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    n_x: int
    n_y: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValueError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})")
        if not self.y_max > self.y_min:
            raise ValueError(f"y_max ({self.y_max}) must exceed y_min ({self.y_min})")
        if self.n_x < MIN_NODES:
            raise ValueError(f"n_x = {self.n_x} is below the minimum of {MIN_NODES} nodes")
        if self.n_y < MIN_NODES:
            raise ValueError(f"n_y = {self.n_y} is below the minimum of {MIN_NODES} nodes")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_x

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.n_y

    @property
    def length_x(self) -> float:
        return self.x_max - self.x_min

    @property
    def length_y(self) -> float:
        return self.y_max - self.y_min

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_y, self.n_x)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_x)

    @property
    def y(self) -> np.ndarray:
        return self.y_min + self.dy * np.arange(self.n_y)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        """Node coordinates ``(X, Y)``, each of shape ``(n_y, n_x)``."""
        return np.meshgrid(self.x, self.y, indexing="xy")


def make_grid(x_min, x_max, y_min, y_max, n_x, n_y) -> Grid2D:
    return Grid2D(float(x_min), float(x_max), float(y_min), float(y_max), int(n_x), int(n_y))


@dataclass
class ScalarField:
    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise ValueError(f"field shape {self.values.shape} does not match grid {self.grid.shape}")

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy())

    def line(self, axis: str, index: int) -> np.ndarray:
        """Copy of the row (``axis="x"``, fixed y index) or column (``axis="y"``, fixed x index)."""
        if axis == "x":
            return self.values[index % self.grid.n_y, :].copy()
        if axis == "y":
            return self.values[:, index % self.grid.n_x].copy()
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")

    def set_line(self, axis: str, index: int, data) -> None:
        if axis == "x":
            self.values[index % self.grid.n_y, :] = data
        elif axis == "y":
            self.values[:, index % self.grid.n_x] = data
        else:
            raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")

    def at(self, i: int, j: int) -> float:
        """Node value with periodic index wrap."""
        return float(self.values[j % self.grid.n_y, i % self.grid.n_x])

    def check_finite(self) -> None:
        bad = np.argwhere(~np.isfinite(self.values))
        if bad.size:
            j, i = bad[0]
            raise FloatingPointError(f"non-finite value {self.values[j, i]} at node (i={i}, j={j})")


@dataclass
class VelocityField:
    """Node velocities. ``phi`` (stream potential) or ``efield`` (VP field line) ride along when known."""

    u_x: np.ndarray
    u_y: np.ndarray
    phi: np.ndarray | None = None
    efield: np.ndarray | None = None

    @property
    def alpha_x(self) -> float:
        return float(np.max(np.abs(self.u_x)))

    @property
    def alpha_y(self) -> float:
        return float(np.max(np.abs(self.u_y)))


def sample(grid: Grid2D, func: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> ScalarField:
    """Evaluate ``func(X, Y)`` (vectorised) at every node."""
    X, Y = grid.meshgrid()
    values = np.broadcast_to(np.asarray(func(X, Y), dtype=np.float64), grid.shape).copy()
    field = ScalarField(grid, values)
    field.check_finite()
    return field


def write_snapshot(path, field: ScalarField, time: float) -> None:
    g = field.grid
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n_x} {g.n_y} {g.x_min!r} {g.x_max!r} {g.y_min!r} {g.y_max!r} {float(time)!r}\n")
        np.savetxt(fh, field.values, fmt="%.17e")


def read_snapshot(path) -> tuple[ScalarField, float]:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    head = text[0].split()
    n_x, n_y = int(head[0]), int(head[1])
    x_min, x_max, y_min, y_max, time = (float(v) for v in head[2:7])
    grid = make_grid(x_min, x_max, y_min, y_max, n_x, n_y)
    values = np.loadtxt(text[1:], dtype=np.float64, ndmin=2)
    return ScalarField(grid, values), time
