"""Mission phases of a firefighting drone and the attractor each phase uses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Optional, Sequence

from .swarm_dynamics import ConfigError

Point = tuple[float, float]


class MissionPhase(IntEnum):
    DOCKED = 0
    FIREFIGHTING = 1
    WATER_COLLECTION = 2
    RECHARGING = 3
    CHECK = 4
    HOVERING = 5
    LANDING = 6
    LANDED = 7

    @property
    def airborne(self) -> bool:
        return self not in (MissionPhase.DOCKED, MissionPhase.LANDED)

    @property
    def label(self) -> str:
        return self.name.lower()


AIRBORNE_PHASES = frozenset(p for p in MissionPhase if p.airborne)


@dataclass(frozen=True)
class MissionParams:
    water_threshold: float = 0.30
    battery_threshold: float = 0.20
    flight_time: float = 600.0  # s of airborne time on a full battery
    service_radius: float = 5.0
    pour_quantum: float = 0.05  # fraction of capacity per decision step
    pour_radius: float = 1.0  # distance to attractor that allows pouring
    confirmation_window: float = 5.0
    sensing_radius: float = 5.0
    landing_slots: int = 6
    landing_tolerance: float = 1.5
    dock_spacing: float = 5.0
    post_landing_window: float = 60.0

    def __post_init__(self) -> None:
        for name in ("water_threshold", "battery_threshold", "pour_quantum"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} = {value} violates 0 <= {name} <= 1")
        for name in ("flight_time", "service_radius", "pour_radius", "sensing_radius", "landing_tolerance", "dock_spacing"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} = {getattr(self, name)} violates {name} > 0")
        for name in ("confirmation_window", "post_landing_window"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"{name} = {getattr(self, name)} violates {name} >= 0")
        if self.landing_slots < 1:
            raise ConfigError(f"landing_slots = {self.landing_slots} violates landing_slots >= 1")


@dataclass
class DroneResources:
    water: float = 0.0
    battery: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.water <= 1.0 and 0.0 <= self.battery <= 1.0):
            raise ValueError(f"resources out of [0, 1]: water={self.water}, battery={self.battery}")


@dataclass
class AgentState:
    """Per-drone mission bookkeeping. Kinematics live in the engine's arrays;
    ``position`` is refreshed from them before each phase decision."""

    id: int
    position: Point
    dock_slot: Point
    hover_point: Point
    phase: MissionPhase = MissionPhase.DOCKED
    resources: DroneResources = field(default_factory=DroneResources)
    search_cursor: int = 0
    check_queue: list[Point] = field(default_factory=list)

    @property
    def check_complete(self) -> bool:
        return not self.check_queue


@dataclass(frozen=True)
class WorldStatus:
    fires_believed_out: bool
    water_source: Point
    dock: Point
    params: MissionParams
    search_waypoints: tuple[Point, ...] = ()
    landing_selected: frozenset[int] = frozenset()


@dataclass(frozen=True)
class Best:
    position: Point
    temperature: float


@dataclass
class SwarmKnowledge:
    personal: dict[int, Best] = field(default_factory=dict)
    swarm: Optional[Best] = None

    def personal_best(self, drone_id: int) -> Optional[Best]:
        return self.personal.get(drone_id)

    def reset(self) -> None:
        self.personal.clear()
        self.swarm = None

    def copy(self) -> "SwarmKnowledge":
        return SwarmKnowledge(dict(self.personal), self.swarm)


def _dist(a: Sequence[float], b: Sequence[float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def update_phase(drone: AgentState, resources: DroneResources, world: WorldStatus) -> MissionPhase:
    """Next mission phase for one drone; see the README for the rule table."""
    prm = world.params
    phase = drone.phase
    pos = drone.position
    if phase is MissionPhase.LANDED:
        return phase
    if phase is MissionPhase.LANDING:
        if _dist(pos, drone.dock_slot) <= prm.landing_tolerance:
            return MissionPhase.LANDED
        return phase

    if phase is MissionPhase.RECHARGING:
        served = resources.battery >= 1.0 and _dist(pos, world.dock) <= prm.service_radius
        if not served:
            return phase
    if resources.battery < prm.battery_threshold:
        return MissionPhase.RECHARGING

    if not world.fires_believed_out:
        if phase is MissionPhase.WATER_COLLECTION:
            served = resources.water >= 1.0 and _dist(pos, world.water_source) <= prm.service_radius
            if not served:
                return phase
        if resources.water < prm.water_threshold:
            return MissionPhase.WATER_COLLECTION
        return MissionPhase.FIREFIGHTING

    if phase in (MissionPhase.CHECK, MissionPhase.HOVERING) and drone.check_complete:
        if drone.id in world.landing_selected:
            return MissionPhase.LANDING
        return MissionPhase.HOVERING
    return MissionPhase.CHECK


def select_attractor(drone: AgentState, knowledge: SwarmKnowledge, world: WorldStatus) -> Point:
    phase = drone.phase
    if phase is MissionPhase.FIREFIGHTING:
        pb = knowledge.personal_best(drone.id)
        sb = knowledge.swarm
        if sb is None and pb is None:
            wps = world.search_waypoints
            return wps[drone.search_cursor % len(wps)] if wps else drone.position
        if pb is None:
            return sb.position
        if sb is None:
            return pb.position
        return (0.5 * (pb.position[0] + sb.position[0]), 0.5 * (pb.position[1] + sb.position[1]))
    if phase is MissionPhase.WATER_COLLECTION:
        return world.water_source
    if phase is MissionPhase.RECHARGING:
        return world.dock
    if phase is MissionPhase.CHECK:
        return drone.check_queue[0] if drone.check_queue else drone.hover_point
    if phase is MissionPhase.HOVERING:
        return drone.hover_point
    if phase is MissionPhase.LANDING:
        return drone.dock_slot
    return drone.position


def record_and_share_best(knowledge: SwarmKnowledge, drone_id: int, position: Point, temperature: float) -> SwarmKnowledge:
    """Update personal and swarm bests in place (strict improvement only) and return ``knowledge``."""
    if temperature < 0:
        raise ValueError(f"temperature must be >= 0 K, got {temperature}")
    new = Best((float(position[0]), float(position[1])), float(temperature))
    pb = knowledge.personal.get(drone_id)
    if pb is None or temperature > pb.temperature:
        knowledge.personal[drone_id] = new
    if knowledge.swarm is None or temperature > knowledge.swarm.temperature:
        knowledge.swarm = new
    return knowledge


def forget_personal_best(knowledge: SwarmKnowledge, drone_id: int, replacement: Optional[Best]) -> None:
    """Drop a personal best that the drone has re-observed as no longer burning."""
    if replacement is None:
        knowledge.personal.pop(drone_id, None)
    else:
        knowledge.personal[drone_id] = replacement


def reelect_swarm_best(knowledge: SwarmKnowledge) -> None:
    """Replace a stale swarm best with the hottest remaining personal best (lowest id on ties)."""
    best: Optional[Best] = None
    for drone_id in sorted(knowledge.personal):
        cand = knowledge.personal[drone_id]
        if best is None or cand.temperature > best.temperature:
            best = cand
    knowledge.swarm = best


def landing_priority(drones: Iterable[AgentState], dock: Point, slots: int) -> set[int]:
    """Ids of the ``slots`` airborne drones closest to the dock (ties: lower id)."""
    if slots < 1:
        raise ValueError(f"slots must be >= 1, got {slots}")
    ranked = sorted((_dist(d.position, dock), d.id) for d in drones if d.phase.airborne)
    return {drone_id for _, drone_id in ranked[:slots]}


def lawnmower_waypoints(width: float, height: float, spacing: float) -> list[Point]:
    """Boustrophedon grid of waypoints with ``spacing`` between rows and columns."""
    nx = max(1, int(round(width / spacing)))
    ny = max(1, int(round(height / spacing)))
    dx, dy = width / nx, height / ny
    points: list[Point] = []
    for row in range(ny):
        cols = range(nx) if row % 2 == 0 else range(nx - 1, -1, -1)
        points.extend(((c + 0.5) * dx, (row + 0.5) * dy) for c in cols)
    return points


def check_assignment(waypoints: Sequence[Point], drone_id: int, n_drones: int) -> list[Point]:
    """Waypoints one drone must visit during the Check sweep."""
    if not waypoints:
        return []
    if len(waypoints) >= n_drones:
        return [wp for k, wp in enumerate(waypoints) if k % n_drones == drone_id]
    return [waypoints[drone_id % len(waypoints)]]


def grid_slots(origin: Point, count: int, spacing: float, bounds: tuple[float, float, float, float] | None = None) -> list[Point]:
    """``count`` points on a square-ish lattice starting at ``origin``.

    With ``bounds`` (x_min, y_min, x_max, y_max) the lattice is stretched to
    fill the rectangle instead and ``spacing`` is ignored.
    """
    cols = max(1, math.ceil(math.sqrt(count)))
    rows = max(1, math.ceil(count / cols))
    if bounds is not None:
        x0, y0, x1, y1 = bounds
        sx = (x1 - x0) / (cols - 1) if cols > 1 else 0.0
        sy = (y1 - y0) / (rows - 1) if rows > 1 else 0.0
        return [(x0 + (k % cols) * sx, y0 + (k // cols) * sy) for k in range(count)]
    ox, oy = origin
    return [(ox + (k % cols) * spacing, oy + (k // cols) * spacing) for k in range(count)]
