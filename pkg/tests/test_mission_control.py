import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stigswarm.mission_control import (
    AIRBORNE_PHASES,
    AgentState,
    Best,
    DroneResources,
    MissionParams,
    MissionPhase,
    SwarmKnowledge,
    WorldStatus,
    check_assignment,
    forget_personal_best,
    grid_slots,
    landing_priority,
    lawnmower_waypoints,
    record_and_share_best,
    reelect_swarm_best,
    select_attractor,
    update_phase,
)

PARAMS = MissionParams()
DOCK = (5.0, 5.0)
WATER = (5.0, 95.0)


def world(out=False, selected=frozenset(), waypoints=((50.0, 50.0),)):
    return WorldStatus(out, WATER, DOCK, PARAMS, waypoints, selected)


def drone(phase=MissionPhase.FIREFIGHTING, pos=(50.0, 50.0), **kw):
    return AgentState(id=kw.pop("id", 0), position=pos, dock_slot=kw.pop("slot", DOCK), hover_point=(70.0, 10.0), phase=phase, **kw)


def test_low_water_goes_to_collection():
    assert update_phase(drone(), DroneResources(water=0.29), world()) is MissionPhase.WATER_COLLECTION


def test_threshold_water_keeps_firefighting():
    assert update_phase(drone(), DroneResources(water=0.30), world()) is MissionPhase.FIREFIGHTING


def test_low_battery_wins_over_water():
    assert update_phase(drone(), DroneResources(water=0.0, battery=0.1), world()) is MissionPhase.RECHARGING


def test_recharging_sticky_until_served():
    d = drone(MissionPhase.RECHARGING, pos=(30.0, 30.0))
    assert update_phase(d, DroneResources(water=1.0, battery=1.0), world()) is MissionPhase.RECHARGING
    d = drone(MissionPhase.RECHARGING, pos=(6.0, 5.0))
    assert update_phase(d, DroneResources(water=1.0, battery=1.0), world()) is MissionPhase.FIREFIGHTING


def test_water_collection_sticky_until_full_at_source():
    d = drone(MissionPhase.WATER_COLLECTION, pos=WATER)
    assert update_phase(d, DroneResources(water=0.5), world()) is MissionPhase.WATER_COLLECTION
    assert update_phase(d, DroneResources(water=1.0), world()) is MissionPhase.FIREFIGHTING


def test_fires_out_sends_to_check():
    assert update_phase(drone(), DroneResources(water=1.0), world(out=True)) is MissionPhase.CHECK


def test_selected_drone_lands_after_check():
    d = drone(MissionPhase.CHECK, id=3)
    assert update_phase(d, DroneResources(), world(out=True, selected=frozenset({3}))) is MissionPhase.LANDING
    assert update_phase(d, DroneResources(), world(out=True)) is MissionPhase.HOVERING


def test_landing_to_landed_at_slot():
    d = drone(MissionPhase.LANDING, pos=(5.5, 5.0))
    assert update_phase(d, DroneResources(), world(out=True)) is MissionPhase.LANDED


def test_landed_is_terminal():
    d = drone(MissionPhase.LANDED, pos=DOCK)
    assert update_phase(d, DroneResources(water=0.0, battery=0.0), world()) is MissionPhase.LANDED


def test_docked_drone_takes_off_for_water():
    d = drone(MissionPhase.DOCKED, pos=DOCK)
    assert update_phase(d, DroneResources(water=0.0), world()) is MissionPhase.WATER_COLLECTION


def test_transition_table_is_total():
    """Every (phase, resources, world) combination maps to exactly one valid phase."""
    levels = [0.0, 0.19, 0.29, 0.3, 1.0]
    positions = [DOCK, WATER, (50.0, 50.0)]
    for phase, water, battery, pos, out, sel, queue in itertools.product(
        MissionPhase, levels, levels, positions, [False, True], [False, True], [[], [(1.0, 1.0)]]
    ):
        d = drone(phase, pos=pos, id=1, check_queue=list(queue))
        res = DroneResources(water, battery)
        nxt = update_phase(d, res, world(out, frozenset({1}) if sel else frozenset()))
        assert isinstance(nxt, MissionPhase)
        if phase is MissionPhase.LANDED:
            assert nxt is MissionPhase.LANDED
        # resources are never touched by a transition
        assert (res.water, res.battery) == (water, battery)


def test_resources_validated():
    with pytest.raises(ValueError):
        DroneResources(water=1.5)


def test_airborne_phases():
    assert MissionPhase.DOCKED not in AIRBORNE_PHASES
    assert MissionPhase.LANDED not in AIRBORNE_PHASES
    assert MissionPhase.CHECK in AIRBORNE_PHASES


def test_attractor_recharging_is_dock():
    assert select_attractor(drone(MissionPhase.RECHARGING), SwarmKnowledge(), world()) == DOCK


def test_attractor_water_collection_is_source():
    assert select_attractor(drone(MissionPhase.WATER_COLLECTION), SwarmKnowledge(), world()) == WATER


def test_attractor_coincident_bests():
    k = SwarmKnowledge({0: Best((50.0, 50.0), 900.0)}, Best((50.0, 50.0), 900.0))
    assert select_attractor(drone(), k, world()) == (50.0, 50.0)


def test_attractor_midpoint_of_bests():
    k = SwarmKnowledge({0: Best((20.0, 0.0), 800.0)}, Best((40.0, 0.0), 900.0))
    assert select_attractor(drone(), k, world()) == (30.0, 0.0)


def test_attractor_without_knowledge_follows_search():
    k = SwarmKnowledge()
    wps = ((1.0, 2.0), (3.0, 4.0))
    assert select_attractor(drone(search_cursor=3), k, world(waypoints=wps)) == (3.0, 4.0)


def test_attractor_landing_is_slot():
    assert select_attractor(drone(MissionPhase.LANDING, slot=(10.0, 5.0)), SwarmKnowledge(), world()) == (10.0, 5.0)


def test_record_first_measurement():
    k = record_and_share_best(SwarmKnowledge(), 2, (1.0, 1.0), 700.0)
    assert k.personal[2] == Best((1.0, 1.0), 700.0)
    assert k.swarm == Best((1.0, 1.0), 700.0)


def test_record_lower_value_is_ignored():
    k = record_and_share_best(SwarmKnowledge(), 2, (1.0, 1.0), 700.0)
    before = k.copy()
    record_and_share_best(k, 2, (5.0, 5.0), 650.0)
    assert k.personal == before.personal and k.swarm == before.swarm


def test_record_two_measurements():
    k = SwarmKnowledge()
    record_and_share_best(k, 0, (1.0, 1.0), 800.0)
    record_and_share_best(k, 1, (9.0, 9.0), 900.0)
    assert k.swarm.position == (9.0, 9.0)


@given(st.lists(st.tuples(st.integers(0, 4), st.floats(0.0, 2000.0)), max_size=30))
def test_swarm_best_monotone_under_recording(readings):
    k = SwarmKnowledge()
    last = -1.0
    for i, (drone_id, temp) in enumerate(readings):
        record_and_share_best(k, drone_id, (float(i), 0.0), temp)
        assert k.swarm.temperature >= last
        last = k.swarm.temperature
        assert k.swarm.temperature == max(b.temperature for b in k.personal.values())


def test_record_rejects_negative_temperature():
    with pytest.raises(ValueError):
        record_and_share_best(SwarmKnowledge(), 0, (0.0, 0.0), -1.0)


def test_forget_and_reelect():
    k = SwarmKnowledge({0: Best((1.0, 1.0), 900.0), 1: Best((2.0, 2.0), 800.0), 2: Best((3.0, 3.0), 800.0)}, Best((1.0, 1.0), 900.0))
    forget_personal_best(k, 0, None)
    reelect_swarm_best(k)
    assert k.swarm == Best((2.0, 2.0), 800.0)  # tie: lower id


def test_landing_priority_fewer_than_slots():
    ds = [drone(id=i, pos=(10.0 * i, 0.0)) for i in range(3)]
    assert landing_priority(ds, (0.0, 0.0), 6) == {0, 1, 2}


def test_landing_priority_closest_six():
    ds = [drone(id=i, pos=(float(10 - i), 0.0)) for i in range(10)]
    assert landing_priority(ds, (0.0, 0.0), 6) == {4, 5, 6, 7, 8, 9}


def test_landing_priority_tie_lower_id():
    ds = [drone(id=5, pos=(3.0, 0.0)), drone(id=2, pos=(0.0, 3.0)), drone(id=1, pos=(1.0, 0.0))]
    assert landing_priority(ds, (0.0, 0.0), 2) == {1, 2}


def test_landing_priority_ignores_grounded():
    ds = [drone(MissionPhase.LANDED, id=0, pos=(0.0, 0.0)), drone(id=1, pos=(5.0, 0.0))]
    assert landing_priority(ds, (0.0, 0.0), 1) == {1}


def test_lawnmower_covers_domain_serpentine():
    wps = lawnmower_waypoints(100.0, 100.0, 10.0)
    assert len(wps) == 100
    assert wps[0] == (5.0, 5.0) and wps[9] == (95.0, 5.0) and wps[10] == (95.0, 15.0)


def test_check_assignment_partitions_waypoints():
    wps = lawnmower_waypoints(50.0, 50.0, 10.0)
    parts = [check_assignment(wps, i, 7) for i in range(7)]
    assert sorted(p for part in parts for p in part) == sorted(wps)


def test_check_assignment_more_drones_than_waypoints():
    wps = [(1.0, 1.0), (2.0, 2.0)]
    assert check_assignment(wps, 5, 10) == [(2.0, 2.0)]


def test_grid_slots():
    assert grid_slots((0.0, 0.0), 4, 5.0) == [(0.0, 0.0), (5.0, 0.0), (0.0, 5.0), (5.0, 5.0)]
    pts = grid_slots((0.0, 0.0), 4, 0.0, bounds=(10.0, 10.0, 20.0, 30.0))
    assert pts[-1] == (20.0, 30.0)


def test_mission_params_validation():
    with pytest.raises(Exception, match="water_threshold"):
        MissionParams(water_threshold=1.5)
