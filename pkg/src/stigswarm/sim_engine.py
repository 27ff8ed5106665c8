"""Tick-driven simulation of the firefighting swarm.

A single clock runs at the sampling frequency ``f``. Every tick executes, in
this order:

1. freeze the signal sources (positions of all airborne drones);
2. per drone: sample the field, build the repulsor, pick the attractor,
   blend, update the target and take a speed-limited step;
3. resource effects (pour, refill, recharge, battery drain);
4. advance the fire by ``1/f``;
5. sensing, knowledge sharing and phase updates;
6. collision detection on the post-move positions;
7. advance the clock.

Stages read frozen snapshots, so the drone iteration order inside a stage does
not influence the outcome. There is no randomness and no wall-clock access.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from . import collision_metrics as cm
from . import environment as env
from . import mission_control as mc
from .mission_control import MissionPhase
from .signal_field import repulsor, stencil_gradients
from .swarm_dynamics import ConfigError, PsoParams, acceleration_coefficient, apply_speed_limit, target_update

MISSION_COMPLETE = "mission complete"
TIME_BUDGET_EXCEEDED = "time budget exceeded"


@dataclass(frozen=True)
class SimConfig:
    pso: PsoParams = field(default_factory=PsoParams)
    layout: env.ScenarioLayout = field(default_factory=env.ScenarioLayout)
    fire: env.FireParams = field(default_factory=env.FireParams)
    mission: mc.MissionParams = field(default_factory=mc.MissionParams)
    drone_count: int = 100
    r_col: float = 0.6
    max_sim_time: float = 3600.0
    collision_mode: str = "event"
    random_free: bool = True

    def __post_init__(self) -> None:
        if self.drone_count < 1:
            raise ConfigError(f"drone_count = {self.drone_count} violates drone_count >= 1")
        if not self.r_col > 0:
            raise ConfigError(f"r_col = {self.r_col} violates r_col > 0")
        if not self.max_sim_time > 0:
            raise ConfigError(f"max_sim_time = {self.max_sim_time} violates max_sim_time > 0")
        if self.collision_mode not in cm.COLLISION_MODES:
            raise ConfigError(f"collision_mode = {self.collision_mode!r} violates collision_mode in {cm.COLLISION_MODES}")
        if not self.random_free:
            raise ConfigError("random_free = false is not supported; every run is deterministic")
        for slot in self.dock_slots():
            if not self.layout.contains(slot):
                raise ConfigError(
                    f"dock slot {slot} lies outside the domain; reduce drone_count or mission.dock_spacing"
                )

    def dock_slots(self) -> list[mc.Point]:
        return mc.grid_slots(self.layout.dock, self.drone_count, self.mission.dock_spacing)

    def hover_points(self) -> list[mc.Point]:
        return mc.grid_slots(self.layout.dock, self.drone_count, 0.0, bounds=self.layout.waiting_area)


@dataclass
class RunResult:
    metrics: cm.MetricsRecord
    termination_reason: str
    timeline: list[dict]
    final_grid: dict
    events: list[cm.CollisionEvent]
    firefighting_mean_pairwise_distance: float
    ticks: int

    def to_dict(self) -> dict:
        return {
            "metrics": self.metrics.as_dict(),
            "termination_reason": self.termination_reason,
            "ticks": self.ticks,
            "firefighting_mean_pairwise_distance": self.firefighting_mean_pairwise_distance,
            "final_grid": self.final_grid,
            "timeline": self.timeline,
            "events": [asdict(e) for e in self.events],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


@dataclass
class SimState:
    config: SimConfig
    grid: env.TerrainGrid
    drones: list[mc.AgentState]
    pos: np.ndarray
    prev: np.ndarray
    attractors: np.ndarray
    knowledge: mc.SwarmKnowledge
    search_waypoints: tuple[mc.Point, ...]
    tick: int = 0
    overlaps: set = field(default_factory=set)
    events: list = field(default_factory=list)
    fires_out_tick: Optional[int] = None
    believed_out: bool = False
    landed_tick: Optional[int] = None
    termination_reason: Optional[str] = None
    timeline: list = field(default_factory=list)
    diversity_sum: float = 0.0
    diversity_samples: int = 0
    tick_sink: Optional[Callable[[dict], None]] = None

    @property
    def time(self) -> float:
        return self.tick / self.config.pso.sampling_frequency

    @property
    def terminated(self) -> bool:
        return self.termination_reason is not None

    def phases(self) -> list[MissionPhase]:
        return [d.phase for d in self.drones]

    def airborne_mask(self) -> np.ndarray:
        return np.array([d.phase in mc.AIRBORNE_PHASES for d in self.drones], dtype=bool)


def _ticks_for(seconds: float, f: float) -> int:
    return int(math.ceil(seconds * f - 1e-9))


def init_simulation(config: SimConfig, tick_sink: Optional[Callable[[dict], None]] = None) -> SimState:
    """Drones docked on their slots with empty tanks and full batteries; fire ignited."""
    n = config.drone_count
    slots = config.dock_slots()
    hovers = config.hover_points()
    waypoints = tuple(
        mc.lawnmower_waypoints(config.layout.width, config.layout.height, 2.0 * config.mission.sensing_radius)
    )
    drones = [
        mc.AgentState(
            id=i,
            position=slots[i],
            dock_slot=slots[i],
            hover_point=hovers[i],
            resources=mc.DroneResources(water=0.0, battery=1.0),
            search_cursor=(i * len(waypoints)) // n,
        )
        for i in range(n)
    ]
    grid = env.TerrainGrid.homogeneous(config.layout, config.fire)
    grid = env.ignite(grid, config.layout.ignition_points)
    pos = np.array(slots, dtype=float)
    state = SimState(
        config=config,
        grid=grid,
        drones=drones,
        pos=pos,
        prev=pos.copy(),
        attractors=pos.copy(),
        knowledge=mc.SwarmKnowledge(),
        search_waypoints=waypoints,
        tick_sink=tick_sink,
    )
    _record_timeline(state)
    return state


def _record_timeline(state: SimState) -> None:
    counts = {p.label: 0 for p in MissionPhase}
    for d in state.drones:
        counts[d.phase.label] += 1
    state.timeline.append({"t": state.time, "phases": counts})


def _observe(state: SimState, air_idx: np.ndarray) -> dict[int, mc.Best]:
    """Hottest cell at or above ignition inside each airborne drone's sensing disk."""
    grid = state.grid
    hot = np.argwhere(grid.temperature >= grid.params.ignition_temperature)  # row-major -> deterministic ties
    if hot.size == 0 or air_idx.size == 0:
        return {}
    temps = grid.temperature[hot[:, 0], hot[:, 1]]
    centers = (hot[:, ::-1] + 0.5) * grid.cell_size
    diff = state.pos[air_idx][:, None, :] - centers[None, :, :]
    inside = np.einsum("ijk,ijk->ij", diff, diff) <= state.config.mission.sensing_radius ** 2
    masked = np.where(inside, temps, -np.inf)
    best = np.argmax(masked, axis=1)
    out = {}
    for row, k in enumerate(best):
        if inside[row, k]:
            out[int(air_idx[row])] = mc.Best((float(centers[k, 0]), float(centers[k, 1])), float(temps[k]))
    return out


def _is_stale(state: SimState, best: mc.Best, observer: np.ndarray) -> bool:
    sensing = state.config.mission.sensing_radius
    if math.hypot(best.position[0] - observer[0], best.position[1] - observer[1]) > sensing:
        return False
    return env.hotspot_measurement(state.grid, best.position) < state.grid.params.ignition_temperature


def step(state: SimState) -> SimState:
    """Advance one decision step (1/f seconds) in place and return the state."""
    if state.terminated:
        raise RuntimeError("simulation already terminated")
    cfg = state.config
    pso = cfg.pso
    mprm = cfg.mission
    layout = cfg.layout
    dt = pso.dt
    drones = state.drones

    # 1. frozen source snapshot
    air = state.airborne_mask()
    air_idx = np.flatnonzero(air)
    sources = state.pos[air].copy()

    # 2. sense, decide, move
    world = mc.WorldStatus(
        fires_believed_out=state.believed_out,
        water_source=layout.water_source,
        dock=layout.dock,
        params=mprm,
        search_waypoints=state.search_waypoints,
    )
    if air_idx.size:
        x = state.pos[air_idx]
        grads = stencil_gradients(sources, pso.r_ref, x, pso.stencil_spacing)
        q = repulsor(x, grads, pso.k_sigma)
        p = np.array([mc.select_attractor(drones[i], state.knowledge, world) for i in air_idx], dtype=float)
        p_star = (1.0 - pso.k_ca) * p + pso.k_ca * q
        target = target_update(x, state.prev[air_idx], p_star, pso, acceleration_coefficient(pso))
        moved = apply_speed_limit(x, target, pso.cruise_speed, dt)
        moved[:, 0] = np.clip(moved[:, 0], 0.0, layout.width)
        moved[:, 1] = np.clip(moved[:, 1], 0.0, layout.height)
        state.prev[air_idx] = x
        state.pos[air_idx] = moved
        state.attractors[air_idx] = p

    # 3. resources
    for i in air_idx.tolist():
        d = drones[i]
        res = d.resources
        res.battery = max(0.0, res.battery - dt / mprm.flight_time)
        here = state.pos[i]
        if d.phase is MissionPhase.FIREFIGHTING and res.water > 0.0:
            a = state.attractors[i]
            if math.hypot(here[0] - a[0], here[1] - a[1]) <= mprm.pour_radius:
                amount = min(mprm.pour_quantum, res.water)
                state.grid = env.pour_water(state.grid, here, amount)
                res.water = max(0.0, res.water - amount)
        elif d.phase is MissionPhase.WATER_COLLECTION:
            if math.hypot(here[0] - layout.water_source[0], here[1] - layout.water_source[1]) <= mprm.service_radius:
                res.water = 1.0
        elif d.phase is MissionPhase.RECHARGING:
            if math.hypot(here[0] - layout.dock[0], here[1] - layout.dock[1]) <= mprm.service_radius:
                res.battery = 1.0

    # 4. fire
    state.grid = env.step_fire(state.grid, dt)
    next_tick = state.tick + 1

    # 5. sensing, sharing, phases
    obs = _observe(state, air_idx)
    know = state.knowledge
    for i in air_idx.tolist():
        pb = know.personal_best(i)
        seen = obs.get(i)
        if pb is not None and _is_stale(state, pb, state.pos[i]):
            mc.forget_personal_best(know, i, seen)
        elif seen is not None:
            mc.record_and_share_best(know, i, seen.position, seen.temperature)
    if know.swarm is not None and air_idx.size:
        sb = np.asarray(know.swarm.position)
        d2 = np.sum((state.pos[air_idx] - sb) ** 2, axis=1)
        if (d2 <= mprm.sensing_radius ** 2).any() and env.hotspot_measurement(
            state.grid, know.swarm.position
        ) < state.grid.params.ignition_temperature:
            mc.reelect_swarm_best(know)

    if env.all_fires_out(state.grid):
        if state.fires_out_tick is None:
            state.fires_out_tick = next_tick
    else:
        state.fires_out_tick = None
    believed = (
        state.fires_out_tick is not None
        and next_tick - state.fires_out_tick >= _ticks_for(mprm.confirmation_window, pso.sampling_frequency)
    )
    if believed and not state.believed_out:
        know.reset()
    state.believed_out = believed

    reach2 = mprm.sensing_radius ** 2
    for i in air_idx.tolist():
        d = drones[i]
        here = state.pos[i]
        if d.phase is MissionPhase.CHECK and d.check_queue:
            wp = d.check_queue[0]
            if (here[0] - wp[0]) ** 2 + (here[1] - wp[1]) ** 2 <= reach2:
                d.check_queue.pop(0)
        elif d.phase is MissionPhase.FIREFIGHTING and state.search_waypoints:
            if know.swarm is None and know.personal_best(int(i)) is None:
                wp = state.search_waypoints[d.search_cursor % len(state.search_waypoints)]
                if (here[0] - wp[0]) ** 2 + (here[1] - wp[1]) ** 2 <= reach2:
                    d.search_cursor += 1

    selected: frozenset[int] = frozenset()
    if believed:
        for i in air_idx.tolist():
            drones[i].position = (float(state.pos[i, 0]), float(state.pos[i, 1]))
        free = mprm.landing_slots - sum(d.phase is MissionPhase.LANDING for d in drones)
        if free > 0:
            waiting = [
                d for d in drones
                if d.phase is MissionPhase.HOVERING or (d.phase is MissionPhase.CHECK and d.check_complete)
            ]
            if waiting:
                selected = frozenset(mc.landing_priority(waiting, layout.dock, free))
    world = mc.WorldStatus(
        fires_believed_out=believed,
        water_source=layout.water_source,
        dock=layout.dock,
        params=mprm,
        search_waypoints=state.search_waypoints,
        landing_selected=selected,
    )
    n = len(drones)
    for d in drones:
        if d.phase is MissionPhase.LANDED:
            continue
        d.position = (float(state.pos[d.id, 0]), float(state.pos[d.id, 1]))
        new_phase = mc.update_phase(d, d.resources, world)
        if new_phase is d.phase:
            continue
        if new_phase is MissionPhase.CHECK:
            d.check_queue = mc.check_assignment(state.search_waypoints, d.id, n)
        elif new_phase is MissionPhase.LANDED:
            state.pos[d.id] = d.dock_slot
            state.prev[d.id] = d.dock_slot
            d.position = d.dock_slot
        elif d.phase is MissionPhase.DOCKED:
            state.prev[d.id] = state.pos[d.id]
        d.phase = new_phase

    # 6. collisions among airborne drones
    air_now = np.flatnonzero(state.airborne_mask())
    t_next = next_tick / pso.sampling_frequency
    new_events, state.overlaps = cm.detect_collisions(
        air_now.tolist(), state.pos[air_now], cfg.r_col, state.overlaps, t_next, cfg.collision_mode
    )
    state.events.extend(new_events)

    ff = [d.id for d in drones if d.phase is MissionPhase.FIREFIGHTING]
    if len(ff) >= 2:
        state.diversity_sum += cm.mean_pairwise_distance(state.pos[ff])
        state.diversity_samples += 1

    # 7. clock and termination
    state.tick = next_tick
    f = pso.sampling_frequency
    if int(state.tick / f) != int((state.tick - 1) / f):
        _record_timeline(state)
    if all(d.phase is MissionPhase.LANDED for d in drones):
        if state.landed_tick is None:
            state.landed_tick = state.tick
        window_done = state.tick - state.landed_tick >= _ticks_for(mprm.post_landing_window, f)
        if window_done and env.all_fires_out(state.grid):
            state.termination_reason = MISSION_COMPLETE
    if state.termination_reason is None and state.tick >= _ticks_for(cfg.max_sim_time, f):
        state.termination_reason = TIME_BUDGET_EXCEEDED
    if state.tick_sink is not None:
        state.tick_sink(tick_record(state))
    return state


def tick_record(state: SimState) -> dict:
    grid = state.grid
    hot = np.argwhere(grid.temperature >= grid.params.ignition_temperature)
    return {
        "tick": state.tick,
        "t": state.time,
        "positions": state.pos.tolist(),
        "phases": [d.phase.label for d in state.drones],
        "hot_cells": [[int(ix), int(iy), float(grid.temperature[iy, ix])] for iy, ix in hot],
        "collisions": len(state.events),
    }


def final_grid_summary(grid: env.TerrainGrid) -> dict:
    fuel0 = grid.params.fuel_per_cell * grid.fuel.size
    return {
        "max_temperature": float(grid.temperature.max()),
        "burning_cells": int(grid.burning_mask().sum()),
        "burnt_out_cells": int((grid.fuel <= 0.0).sum()),
        "fuel_remaining_fraction": float(grid.fuel.sum() / fuel0) if fuel0 > 0 else 0.0,
    }


def result_of(state: SimState) -> RunResult:
    if state.tick == 0:
        raise ValueError("no step has been taken")
    if state.timeline[-1]["t"] != state.time:
        _record_timeline(state)
    mean_div = state.diversity_sum / state.diversity_samples if state.diversity_samples else 0.0
    return RunResult(
        metrics=cm.finalize_metrics(state.events, state.time, state.config.pso),
        termination_reason=state.termination_reason or TIME_BUDGET_EXCEEDED,
        timeline=state.timeline,
        final_grid=final_grid_summary(state.grid),
        events=list(state.events),
        firefighting_mean_pairwise_distance=mean_div,
        ticks=state.tick,
    )


def run(config: SimConfig, tick_sink: Optional[Callable[[dict], None]] = None) -> RunResult:
    state = init_simulation(config, tick_sink)
    while not state.terminated:
        step(state)
    return result_of(state)
