"""Single-cell geometry, large-scale fading, and Rayleigh small-scale channels.

Users are placed uniformly over a hexagonal cell with a minimum distance
from the base station at the center.  Large-scale gains combine a power-law
path loss referenced to the minimum distance with log-normal shadowing.
The composite channel is G = H D^{1/2} with H i.i.d. unit-variance
circularly-symmetric complex Gaussian and D = diag(betas).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SQRT3 = np.sqrt(3.0)


@dataclass
class CellConfig:
    """Hexagonal cell geometry and propagation constants.

    radius_m is the hexagon circumradius (center to vertex).  Path loss is
    (r / min_dist_m)^{-pathloss_exp}, so a user at the minimum distance with
    no shadowing has unit gain.
    """

    radius_m: float = 1000.0
    min_dist_m: float = 100.0
    pathloss_exp: float = 3.8
    shadow_std_db: float = 8.0

    def __post_init__(self):
        if not 0.0 < self.min_dist_m < self.radius_m:
            raise ValueError("require 0 < min_dist_m < radius_m")
        if self.pathloss_exp <= 0.0:
            raise ValueError("pathloss_exp must be positive")
        if self.shadow_std_db < 0.0:
            raise ValueError("shadow_std_db must be nonnegative")


@dataclass
class LargeScaleProfile:
    """Large-scale power gains beta_k of the K users; D = diag(betas)."""

    betas: np.ndarray

    def __post_init__(self):
        self.betas = np.asarray(self.betas, dtype=float)
        if self.betas.ndim != 1 or self.betas.size == 0:
            raise ValueError("betas must be a nonempty vector")
        if np.any(self.betas <= 0.0):
            raise ValueError("all large-scale gains must be positive")

    @property
    def num_users(self) -> int:
        return self.betas.size

    @property
    def trace_d(self) -> float:
        return float(self.betas.sum())


@dataclass
class ChannelRealization:
    """One small-scale realization H and the composite G = H D^{1/2}."""

    profile: LargeScaleProfile
    H: np.ndarray
    G: np.ndarray


def _inside_hexagon(x: float, y: float, radius: float) -> bool:
    # flat-top hexagon with circumradius `radius`, centered at the origin
    return abs(y) <= SQRT3 / 2.0 * radius and SQRT3 * abs(x) + abs(y) <= SQRT3 * radius


def draw_position(cell: CellConfig, rng: np.random.Generator) -> tuple[float, float]:
    """Uniform point on the hexagonal cell, at least min_dist_m from the center.

    Rejection sampling from the circumscribed disk keeps the distribution
    exactly uniform over the admissible region.
    """
    while True:
        r = cell.radius_m * np.sqrt(rng.uniform())
        phi = rng.uniform(0.0, 2.0 * np.pi)
        x, y = r * np.cos(phi), r * np.sin(phi)
        if _inside_hexagon(x, y, cell.radius_m) and np.hypot(x, y) >= cell.min_dist_m:
            return x, y


def generate_large_scale(cell: CellConfig, K: int, rng: np.random.Generator) -> LargeScaleProfile:
    """Drop K users in the cell and return their large-scale gains.

    Parameters
    ----------
    cell : CellConfig
        Geometry and propagation constants.
    K : int
        Number of users, at least 1.
    rng : np.random.Generator
        Source of randomness; a fixed state gives a fixed drop.

    Returns
    -------
    LargeScaleProfile
        beta_k = s_k (r_k / min_dist)^{-v} with s_k log-normal shadowing
        of standard deviation shadow_std_db in the dB domain.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    betas = np.empty(K)
    for k in range(K):
        x, y = draw_position(cell, rng)
        r_k = np.hypot(x, y)
        shadow = 10.0 ** (cell.shadow_std_db * rng.standard_normal() / 10.0)
        betas[k] = shadow * (r_k / cell.min_dist_m) ** (-cell.pathloss_exp)
    return LargeScaleProfile(betas=betas)


def draw_channel(profile: LargeScaleProfile, M: int, rng: np.random.Generator) -> ChannelRealization:
    """Draw H with i.i.d. CN(0,1) entries and compose G = H D^{1/2}.

    CN(0,1) means variance 1/2 per real component, unit total variance.
    """
    if M < 1:
        raise ValueError("M must be at least 1")
    K = profile.num_users
    H = (rng.standard_normal((M, K)) + 1j * rng.standard_normal((M, K))) / np.sqrt(2.0)
    G = H * np.sqrt(profile.betas)[None, :]
    return ChannelRealization(profile=profile, H=H, G=G)
