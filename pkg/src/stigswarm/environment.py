"""Simplified cellular wildfire and scenario layout.

This is a transparent stand-in for a physics-based fire model: a square-cell
grid holding fuel mass and temperature, advanced with synchronous rules.

* burning cell (T >= ignition and fuel > 0): burns fuel, relaxes toward the
  flame temperature and heats its four neighbours;
* any other cell cools toward ambient (Newtonian) while still receiving heat
  from burning neighbours.

Nothing here is random.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .swarm_dynamics import ConfigError

Point = tuple[float, float]


@dataclass(frozen=True)
class FireParams:
    ambient_temperature: float = 300.0
    ignition_temperature: float = 550.0
    flame_temperature: float = 1100.0
    fuel_per_cell: float = 1.0  # kg
    burn_rate: float = 0.05  # kg/s
    heating_rate: float = 0.5  # 1/s, burning cell toward flame temperature
    diffusion_rate: float = 0.15  # 1/s per burning neighbour
    cooling_rate: float = 0.08  # 1/s toward ambient
    quench_per_unit: float = 2000.0  # K removed by a full payload

    def __post_init__(self) -> None:
        if not 0.0 <= self.ambient_temperature < self.ignition_temperature < self.flame_temperature:
            raise ConfigError(
                "fire temperatures violate 0 <= ambient_temperature < ignition_temperature < flame_temperature"
            )
        for name in ("fuel_per_cell", "burn_rate", "heating_rate", "diffusion_rate", "cooling_rate", "quench_per_unit"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"{name} = {getattr(self, name)} violates {name} >= 0")


@dataclass(frozen=True)
class ScenarioLayout:
    width: float = 100.0
    height: float = 100.0
    cell_size: float = 1.0
    ignition_points: tuple[Point, ...] = ((65.0, 75.0), (80.0, 45.0), (35.0, 80.0))
    water_source: Point = (5.0, 95.0)
    dock: Point = (5.0, 5.0)
    # (x_min, y_min, x_max, y_max)
    waiting_area: tuple[float, float, float, float] = (60.0, 5.0, 95.0, 30.0)

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.height > 0):
            raise ConfigError("domain size violates width > 0 and height > 0")
        if not self.cell_size > 0:
            raise ConfigError(f"cell_size = {self.cell_size} violates cell_size > 0")
        named = [("water_source", self.water_source), ("dock", self.dock)]
        named += [(f"ignition_points[{i}]", p) for i, p in enumerate(self.ignition_points)]
        x0, y0, x1, y1 = self.waiting_area
        named += [("waiting_area", (x0, y0)), ("waiting_area", (x1, y1))]
        for name, p in named:
            if not self.contains(p):
                raise ConfigError(f"{name} = {tuple(p)} lies outside the {self.width} x {self.height} domain")
        if not (x0 <= x1 and y0 <= y1):
            raise ConfigError("waiting_area must be given as x_min, y_min, x_max, y_max")

    def contains(self, p: Sequence[float]) -> bool:
        return 0.0 <= p[0] <= self.width and 0.0 <= p[1] <= self.height


@dataclass
class TerrainGrid:
    """Fuel and temperature per cell; arrays are indexed ``[iy, ix]``."""

    width: float
    height: float
    cell_size: float
    fuel: np.ndarray
    temperature: np.ndarray
    params: FireParams = field(default_factory=FireParams)

    @classmethod
    def homogeneous(cls, layout: ScenarioLayout, params: FireParams) -> "TerrainGrid":
        nx = int(round(layout.width / layout.cell_size))
        ny = int(round(layout.height / layout.cell_size))
        return cls(
            width=layout.width,
            height=layout.height,
            cell_size=layout.cell_size,
            fuel=np.full((ny, nx), params.fuel_per_cell),
            temperature=np.full((ny, nx), params.ambient_temperature),
            params=params,
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.temperature.shape

    def copy(self) -> "TerrainGrid":
        return TerrainGrid(self.width, self.height, self.cell_size, self.fuel.copy(), self.temperature.copy(), self.params)

    def cell_index(self, point: Sequence[float]) -> tuple[int, int]:
        x, y = float(point[0]), float(point[1])
        if not (0.0 <= x <= self.width and 0.0 <= y <= self.height):
            raise ValueError(f"point {(x, y)} lies outside the {self.width} x {self.height} domain")
        ny, nx = self.shape
        ix = min(int(x // self.cell_size), nx - 1)
        iy = min(int(y // self.cell_size), ny - 1)
        return iy, ix

    def cell_center(self, iy: int, ix: int) -> Point:
        return ((ix + 0.5) * self.cell_size, (iy + 0.5) * self.cell_size)

    def burning_mask(self) -> np.ndarray:
        return (self.temperature >= self.params.ignition_temperature) & (self.fuel > 0.0)


def ignite(grid: TerrainGrid, points: Sequence[Sequence[float]]) -> TerrainGrid:
    """Set fueled cells under ``points`` to the flame temperature."""
    out = grid.copy()
    for p in points:
        try:
            iy, ix = out.cell_index(p)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if out.fuel[iy, ix] > 0.0:
            out.temperature[iy, ix] = out.params.flame_temperature
    return out


def step_fire(grid: TerrainGrid, dt: float) -> TerrainGrid:
    """Advance the fire by ``dt`` seconds; every cell reads only the pre-step grid."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    prm = grid.params
    temp = grid.temperature
    fuel = grid.fuel
    burning = grid.burning_mask()
    if not burning.any() and not (temp > prm.ambient_temperature).any():
        return grid.copy()

    # heat received from burning 4-neighbours
    hot = np.where(burning, temp, 0.0)
    count = burning.astype(float)
    src_sum = np.zeros_like(temp)
    n_src = np.zeros_like(temp)
    src_sum[1:, :] += hot[:-1, :]
    n_src[1:, :] += count[:-1, :]
    src_sum[:-1, :] += hot[1:, :]
    n_src[:-1, :] += count[1:, :]
    src_sum[:, 1:] += hot[:, :-1]
    n_src[:, 1:] += count[:, :-1]
    src_sum[:, :-1] += hot[:, 1:]
    n_src[:, :-1] += count[:, 1:]
    gain = prm.diffusion_rate * dt * (src_sum - n_src * temp)

    heat = prm.heating_rate * dt * (prm.flame_temperature - temp)
    cool = -prm.cooling_rate * dt * (temp - prm.ambient_temperature)
    new_temp = temp + np.where(burning, heat, cool) + np.maximum(gain, 0.0)
    new_temp = np.clip(new_temp, prm.ambient_temperature, prm.flame_temperature)
    # a burning cell never jumps past the flame temperature; a cooling one never below ambient
    new_fuel = np.where(burning, np.maximum(fuel - prm.burn_rate * dt, 0.0), fuel)
    return TerrainGrid(grid.width, grid.height, grid.cell_size, new_fuel, new_temp, prm)


def pour_water(grid: TerrainGrid, position: Sequence[float], amount: float) -> TerrainGrid:
    """Quench the cell under ``position``; ``amount`` is a fraction of a full payload."""
    if not amount > 0:
        raise ValueError(f"amount must be > 0, got {amount}")
    out = grid.copy()
    iy, ix = out.cell_index(position)
    prm = out.params
    out.temperature[iy, ix] = max(prm.ambient_temperature, out.temperature[iy, ix] - prm.quench_per_unit * amount)
    return out


def hotspot_measurement(grid: TerrainGrid, position: Sequence[float]) -> float:
    iy, ix = grid.cell_index(position)
    return float(grid.temperature[iy, ix])


def all_fires_out(grid: TerrainGrid) -> bool:
    return not bool((grid.temperature >= grid.params.ignition_temperature).any())
