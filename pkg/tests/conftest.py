import dataclasses
from pathlib import Path

import pytest

from stigswarm import config as cfg
from stigswarm.environment import ScenarioLayout
from stigswarm.sim_engine import SimConfig

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def desk_config(**pso) -> SimConfig:
    """The desk-scale scenario file, with optional swarm overrides."""
    base = cfg.load(SCENARIOS / "desk_scale.ini")
    if pso:
        base = dataclasses.replace(base, pso=dataclasses.replace(base.pso, **pso))
    return base


def tiny_config(ignitions=(), drones=4, **kw) -> SimConfig:
    """A 20 m x 20 m arena that finishes in well under a second of wall time."""
    layout = ScenarioLayout(
        width=20.0,
        height=20.0,
        ignition_points=tuple(ignitions),
        water_source=(10.0, 18.0),
        dock=(2.5, 2.5),
        waiting_area=(12.0, 2.0, 18.0, 8.0),
    )
    return SimConfig(layout=layout, drone_count=drones, **kw)


@pytest.fixture
def tiny():
    return tiny_config
