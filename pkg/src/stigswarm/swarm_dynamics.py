"""PSO-style trajectory update with a collision-avoidance corrected attractor.

Each decision step a drone computes

    target = x + omega * (x - x_prev) + phi * (p_star - x)
    p_star = (1 - k_ca) * p + k_ca * q

where ``p`` is the mission attractor and ``q`` the repulsor from the signal
field. The acceleration coefficient ``phi`` is fixed (no random draw) so a run
is fully deterministic. The commanded move is then clamped to the cruise speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ConfigError(ValueError):
    """A parameter violates one of its documented bounds."""


def phi_bounds(omega: float) -> tuple[float, float]:
    """Acceleration-coefficient interval giving oscillatory (complex-root) motion.

    Returns ((sqrt(w) - 1)**2, (sqrt(w) + 1)**2).
    """
    if not 0.0 < omega <= 1.0:
        raise ConfigError(f"omega must satisfy 0 < omega < 1, got {omega}")
    root = math.sqrt(omega)
    return (root - 1.0) ** 2, (root + 1.0) ** 2


@dataclass(frozen=True)
class PsoParams:
    omega: float = 0.7
    phi_fraction: float = 0.5
    k_ca: float = 0.7
    k_sigma: float = 1000.0
    cruise_speed: float = 5.0
    sampling_frequency: float = 30.0
    r_ref: float = 0.3
    stencil_spacing: float = 0.6

    def __post_init__(self) -> None:
        if not 0.0 < self.omega < 1.0:
            raise ConfigError(f"omega = {self.omega} violates 0 < omega < 1")
        if not 0.0 <= self.phi_fraction <= 1.0:
            raise ConfigError(f"phi_fraction = {self.phi_fraction} violates 0 <= phi_fraction <= 1")
        if not 0.0 <= self.k_ca < 1.0:
            raise ConfigError(f"k_ca = {self.k_ca} violates 0 <= k_ca < 1")
        if not self.k_sigma >= 0.0:
            raise ConfigError(f"k_sigma = {self.k_sigma} violates k_sigma >= 0")
        if not self.cruise_speed > 0.0:
            raise ConfigError(f"cruise_speed = {self.cruise_speed} violates v > 0")
        if not self.sampling_frequency > 0.0:
            raise ConfigError(f"sampling_frequency = {self.sampling_frequency} violates f > 0")
        if not self.r_ref > 0.0:
            raise ConfigError(f"r_ref = {self.r_ref} violates r_ref > 0")
        if not self.stencil_spacing > 0.0:
            raise ConfigError(f"stencil_spacing = {self.stencil_spacing} violates spacing > 0")

    @property
    def phi_min(self) -> float:
        return phi_bounds(self.omega)[0]

    @property
    def phi_max(self) -> float:
        return phi_bounds(self.omega)[1]

    @property
    def dt(self) -> float:
        return 1.0 / self.sampling_frequency

    @property
    def step_length(self) -> float:
        """Largest displacement allowed in one decision step."""
        return self.cruise_speed / self.sampling_frequency


def acceleration_coefficient(params: PsoParams) -> np.ndarray:
    lo, hi = phi_bounds(params.omega)
    c = lo + params.phi_fraction * (hi - lo)
    return np.array([c, c])


def blend_attractor(p: Sequence[float] | np.ndarray, q: Sequence[float] | np.ndarray, k_ca: float) -> np.ndarray:
    """Convex combination (1 - k_ca) * p + k_ca * q."""
    if not 0.0 <= k_ca < 1.0:
        raise ConfigError(f"k_ca = {k_ca} violates 0 <= k_ca < 1")
    return (1.0 - k_ca) * np.asarray(p, dtype=float) + k_ca * np.asarray(q, dtype=float)


def target_update(
    x_curr: np.ndarray,
    x_prev: np.ndarray,
    p_star: np.ndarray,
    params: PsoParams,
    phi: np.ndarray | None = None,
) -> np.ndarray:
    """Next target position; broadcasts over (N, 2) arrays."""
    if phi is None:
        phi = acceleration_coefficient(params)
    x_curr = np.asarray(x_curr, dtype=float)
    x_prev = np.asarray(x_prev, dtype=float)
    return x_curr + params.omega * (x_curr - x_prev) + phi * (np.asarray(p_star, dtype=float) - x_curr)


def apply_speed_limit(x_curr: np.ndarray, x_target: np.ndarray, v: float, dt: float) -> np.ndarray:
    """Move toward the target by at most ``v * dt``; row-wise on (N, 2) input."""
    x_curr = np.asarray(x_curr, dtype=float)
    x_target = np.asarray(x_target, dtype=float)
    reach = v * dt
    delta = x_target - x_curr
    dist = np.sqrt(np.sum(delta * delta, axis=-1, keepdims=True))
    with np.errstate(invalid="ignore", divide="ignore"):
        clamped = x_curr + reach * (delta / dist)
    return np.where(dist <= reach, x_target, clamped)


def oscillation_discriminant(omega: float, phi: float) -> float:
    """Discriminant of the 1-D recurrence's characteristic polynomial.

    x' = (1 + omega - phi) x - omega x_prev + phi p has roots of
    z^2 - (1 + omega - phi) z + omega; negative means complex (oscillatory).
    """
    return (omega + 1.0 - phi) ** 2 - 4.0 * omega
