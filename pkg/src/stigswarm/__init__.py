"""Stigmergic collision avoidance for a self-organising firefighting drone swarm.

Drones emit a virtual signal that decays with distance; each drone samples the
summed field on an eight-point stencil, turns its gradient into a repulsor and
blends it into a PSO-style attractor. A cellular fire, a mission state machine
and a collision counter turn this into a reproducible experiment.
"""

from .collision_metrics import CollisionEvent, MetricsRecord, detect_collisions, finalize_metrics
from .environment import FireParams, ScenarioLayout, TerrainGrid
from .mission_control import MissionParams, MissionPhase
from .sim_engine import MISSION_COMPLETE, TIME_BUDGET_EXCEEDED, RunResult, SimConfig, init_simulation, run, step
from .swarm_dynamics import ConfigError, PsoParams

__all__ = [
    "CollisionEvent",
    "ConfigError",
    "FireParams",
    "MISSION_COMPLETE",
    "MetricsRecord",
    "MissionParams",
    "MissionPhase",
    "PsoParams",
    "RunResult",
    "ScenarioLayout",
    "SimConfig",
    "TIME_BUDGET_EXCEEDED",
    "TerrainGrid",
    "detect_collisions",
    "finalize_metrics",
    "init_simulation",
    "run",
    "step",
]
