"""Collision detection among airborne drones and the run-level metrics.

Drones pass through each other unharmed; a collision is only counted. In
``event`` mode a pair counts once per contact (rising edge of the overlap), in
``per-tick`` mode every overlapping pair counts at every check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .swarm_dynamics import PsoParams

COLLISION_MODES = ("event", "per-tick")


@dataclass(frozen=True)
class CollisionEvent:
    pair: tuple[int, int]  # sorted ids
    time: float
    positions: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self) -> None:
        if self.pair[0] == self.pair[1]:
            raise ValueError("a collision needs two distinct drones")


@dataclass(frozen=True)
class MetricsRecord:
    C: int
    T: float
    v: float
    f: float

    @property
    def f_over_v(self) -> float:
        return self.f / self.v

    @property
    def C_over_T(self) -> float:
        return self.C / self.T

    def as_dict(self) -> dict:
        return {"C": self.C, "T": self.T, "v": self.v, "f": self.f, "f_over_v": self.f_over_v, "C_over_T": self.C_over_T}


def overlapping_pairs(ids: Sequence[int], positions: np.ndarray, r_col: float) -> list[tuple[int, int]]:
    """Sorted list of (i, j), i < j, whose centres are closer than ``r_col``."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    n = len(ids)
    if n < 2:
        return []
    order = np.argsort(np.asarray(ids), kind="stable")
    ids_sorted = np.asarray(ids)[order]
    pos = positions[order]
    diff = pos[:, None, :] - pos[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    ii, jj = np.nonzero(np.triu(d2 < r_col * r_col, k=1))
    return [(int(ids_sorted[a]), int(ids_sorted[b])) for a, b in zip(ii, jj)]


def detect_collisions(
    ids: Sequence[int],
    positions: np.ndarray,
    r_col: float,
    prev_overlaps: Iterable[tuple[int, int]],
    time: float,
    mode: str = "event",
) -> tuple[list[CollisionEvent], set[tuple[int, int]]]:
    """Return new events and the current overlap set.

    ``ids``/``positions`` must describe airborne drones only.
    """
    if not r_col > 0:
        raise ValueError(f"r_col must be > 0, got {r_col}")
    if mode not in COLLISION_MODES:
        raise ValueError(f"collision mode must be one of {COLLISION_MODES}, got {mode!r}")
    pairs = overlapping_pairs(ids, positions, r_col)
    prev = set(prev_overlaps)
    where = {int(i): (float(p[0]), float(p[1])) for i, p in zip(ids, np.asarray(positions).reshape(-1, 2))}
    events = [
        CollisionEvent(pair, time, (where[pair[0]], where[pair[1]]))
        for pair in pairs
        if mode == "per-tick" or pair not in prev
    ]
    return events, set(pairs)


def finalize_metrics(events: Sequence[CollisionEvent] | int, duration: float, params: PsoParams) -> MetricsRecord:
    """Collision count (list of events or a bare count) and duration, tagged with v and f."""
    if not duration > 0:
        raise ValueError(f"run duration must be > 0, got {duration}")
    count = events if isinstance(events, int) else len(events)
    return MetricsRecord(C=count, T=duration, v=params.cruise_speed, f=params.sampling_frequency)


def mean_pairwise_distance(positions: np.ndarray) -> float:
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    n = positions.shape[0]
    if n < 2:
        return 0.0
    diff = positions[:, None, :] - positions[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    return float(d[np.triu_indices(n, k=1)].mean())
