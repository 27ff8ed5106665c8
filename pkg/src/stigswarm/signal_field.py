"""Cumulative signal strength field emitted by the swarm.

Every airborne drone broadcasts a signal whose normalised intensity falls off
with the inverse square of distance and saturates at 1 inside a reference
radius. A drone never measures positions of other drones directly: it samples
the summed field at eight points around itself, estimates the local gradient
and steers away from it.

The scalar API (``SignalSource``, ``SignalSourceSet``, ``StencilSamples``)
mirrors the vectorised helpers used by the simulation loop
(``intensity_at``, ``stencil_gradients``); both go through the same kernels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

# Compass order used everywhere a stencil is laid out as an array.
STENCIL_DIRECTIONS = ("E", "W", "N", "S", "NE", "NW", "SE", "SW")
_UNIT_OFFSETS = np.array(
    [
        [1.0, 0.0],
        [-1.0, 0.0],
        [0.0, 1.0],
        [0.0, -1.0],
        [1.0, 1.0],
        [-1.0, 1.0],
        [1.0, -1.0],
        [-1.0, -1.0],
    ]
)


@dataclass(frozen=True)
class SignalSource:
    position: tuple[float, float]
    r_ref: float = 0.3

    def __post_init__(self) -> None:
        if not self.r_ref > 0:
            raise ValueError(f"r_ref must be > 0, got {self.r_ref}")


@dataclass(frozen=True)
class SignalSourceSet:
    sources: tuple[SignalSource, ...] = ()

    @classmethod
    def from_positions(cls, positions: Iterable[Sequence[float]], r_ref: float = 0.3) -> "SignalSourceSet":
        return cls(tuple(SignalSource((float(p[0]), float(p[1])), r_ref) for p in positions))

    def __len__(self) -> int:
        return len(self.sources)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Positions as a (N, 2) array and reference radii as (N,)."""
        if not self.sources:
            return np.zeros((0, 2)), np.zeros(0)
        pos = np.array([s.position for s in self.sources], dtype=float)
        rref = np.array([s.r_ref for s in self.sources], dtype=float)
        return pos, rref


@dataclass(frozen=True)
class StencilSamples:
    E: float
    W: float
    N: float
    S: float
    NE: float
    NW: float
    SE: float
    SW: float
    spacing: float = field(default=0.6)

    def __post_init__(self) -> None:
        if not self.spacing > 0:
            raise ValueError(f"stencil spacing must be > 0, got {self.spacing}")

    @classmethod
    def from_array(cls, values: Sequence[float], spacing: float) -> "StencilSamples":
        return cls(*(float(v) for v in values), spacing=spacing)

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, d) for d in STENCIL_DIRECTIONS])


# ---------------------------------------------------------------------------
# kernels


def _intensity_from_sq(r2: np.ndarray, rref2: np.ndarray) -> np.ndarray:
    # r_ref^2 / r^2 outside the emission disk, saturated at 1 inside it
    with np.errstate(divide="ignore"):
        outside = rref2 / r2
    return np.where(r2 > rref2, outside, 1.0)


def intensity_at(source_pos: np.ndarray, r_ref: np.ndarray | float, points: np.ndarray) -> np.ndarray:
    """Cumulative intensity of all sources at each query point.

    ``source_pos`` is (K, 2); ``points`` is (..., 2). Returns shape ``points.shape[:-1]``.
    """
    points = np.asarray(points, dtype=float)
    source_pos = np.asarray(source_pos, dtype=float).reshape(-1, 2)
    if source_pos.shape[0] == 0:
        return np.zeros(points.shape[:-1])
    rref2 = np.broadcast_to(np.asarray(r_ref, dtype=float) ** 2, (source_pos.shape[0],))
    diff = points[..., None, :] - source_pos
    r2 = diff[..., 0] ** 2 + diff[..., 1] ** 2
    return _intensity_from_sq(r2, rref2).sum(axis=-1)


def stencil_points(centers: np.ndarray, spacing: float) -> np.ndarray:
    """(M, 2) centers -> (M, 8, 2) sample locations in ``STENCIL_DIRECTIONS`` order."""
    centers = np.asarray(centers, dtype=float)
    return centers[..., None, :] + spacing * _UNIT_OFFSETS


def gradient_from_array(samples: np.ndarray, spacing: float) -> np.ndarray:
    """Eight-point gradient estimate; ``samples`` is (..., 8) in compass order.

    Uses half weight on the diagonals and a 1/(6*spacing) divisor. On an affine
    field this returns 2/3 of the true slope; callers fold that into k_sigma.
    """
    e, w, n, s, ne, nw, se, sw = np.moveaxis(np.asarray(samples, dtype=float), -1, 0)
    # diagonals grouped as mirror-pair differences so symmetric samples cancel exactly
    gx = (e - w + 0.5 * ((ne - nw) + (se - sw))) / (6.0 * spacing)
    gy = (n - s + 0.5 * ((ne - se) + (nw - sw))) / (6.0 * spacing)
    return np.stack([gx, gy], axis=-1)


def stencil_gradients(
    source_pos: np.ndarray, r_ref: np.ndarray | float, centers: np.ndarray, spacing: float
) -> np.ndarray:
    """Sampled field gradient at every center, shape (M, 2)."""
    samples = intensity_at(source_pos, r_ref, stencil_points(centers, spacing))
    return gradient_from_array(samples, spacing)


# ---------------------------------------------------------------------------
# scalar operations


def source_intensity(source: SignalSource, point: Sequence[float]) -> float:
    return float(intensity_at(np.array([source.position]), source.r_ref, np.asarray(point, dtype=float)))


def cumulative_intensity(sources: SignalSourceSet, point: Sequence[float]) -> float:
    pos, rref = sources.arrays()
    return float(intensity_at(pos, rref, np.asarray(point, dtype=float)))


def sample_stencil(sources: SignalSourceSet, center: Sequence[float], spacing: float) -> StencilSamples:
    if not spacing > 0:
        raise ValueError(f"stencil spacing must be > 0, got {spacing}")
    pos, rref = sources.arrays()
    values = intensity_at(pos, rref, stencil_points(np.asarray(center, dtype=float), spacing))
    return StencilSamples.from_array(values, spacing)


def gradient(samples: StencilSamples) -> np.ndarray:
    return gradient_from_array(samples.as_array(), samples.spacing)


def repulsor(agent_position: Sequence[float] | np.ndarray, grad: Sequence[float] | np.ndarray, k_sigma: float) -> np.ndarray:
    """Point displaced from the agent against the field gradient.

    Works row-wise on (M, 2) arrays as well as single points.
    """
    return np.asarray(agent_position, dtype=float) - k_sigma * np.asarray(grad, dtype=float)
