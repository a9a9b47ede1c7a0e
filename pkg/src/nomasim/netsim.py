"""Monte Carlo cellular deployment: Poisson-placed base stations and users
on a square region, log-distance path loss with shadowing and block
fading, max-SINR association.

Cell selection ranks base stations by the fading-averaged received SINR
(path loss plus shadowing), the way real selection averages out fast
fading; the block-fading draw then applies to the serving and interfering
links when rates are computed.

Every drop's random stream is derived from (seed, drop index) alone, so
drops are reproducible individually and in parallel.  Cell statistics are
collected only for base stations inside the centered half-area square, to
blunt edge effects without wrap-around.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .clustering import UserPool

__all__ = [
    "RadioConfig",
    "Deployment",
    "PATHLOSS_MODELS",
    "FADING_MODELS",
    "generate_drop",
    "compute_sinr",
    "select_pool",
    "dump_gains",
]

# high-and-odd stream labels keep the pool-selection and drop streams apart
_POOL_STREAM = 0x706F6F6C


def _uma_nlos_db(dist_km: np.ndarray, carrier_ghz: float) -> np.ndarray:
    # log-distance with urban-macro NLOS coefficients; the 23.5 m
    # BS-to-user height difference doubles as the close-in floor
    d3d_m = np.sqrt((dist_km * 1e3) ** 2 + 23.5**2)
    return 13.54 + 39.08 * np.log10(d3d_m) + 20.0 * np.log10(carrier_ghz)


PATHLOSS_MODELS = {"uma-nlos": _uma_nlos_db}

# unit-mean power gains, drawn once per link per drop (block fading);
# nakagami-2 (Gamma(2, 1/2) power) models Rayleigh with second-order
# diversity across the wideband resource
FADING_MODELS = {
    "rayleigh": lambda rng, shape: rng.exponential(1.0, shape),
    "nakagami-2": lambda rng, shape: rng.gamma(2.0, 0.5, shape),
    "none": lambda rng, shape: np.ones(shape),
}


@dataclass
class RadioConfig:
    """Deployment and propagation parameters (the urban-macro defaults).

    noise_dbm is the total noise power over the system bandwidth; the
    default is thermal noise over 20 MHz plus a 7 dB noise figure.
    """

    bs_density: float = 25.0
    user_density: float = 2000.0
    region_km: float = 1.0
    tx_power_dbm: float = 44.0
    noise_dbm: float = -93.99
    carrier_ghz: float = 3.5
    pathloss_model: str = "uma-nlos"
    shadowing_sigma_db: float = 6.0
    fading: str = "nakagami-2"
    users_per_cell: int = 64
    seed: int = 1

    def __post_init__(self) -> None:
        if self.bs_density <= 0.0 or self.user_density <= 0.0:
            raise ValueError("densities must be > 0")
        if self.region_km <= 0.0:
            raise ValueError("region side must be > 0")
        if self.bs_density * self.region_km**2 < 1.0:
            raise ValueError("region too small: expected BS count below 1")
        if self.users_per_cell < 1:
            raise ValueError("users per cell must be >= 1")
        if self.pathloss_model not in PATHLOSS_MODELS:
            raise ValueError(f"unknown path loss model {self.pathloss_model!r}")
        if self.fading not in FADING_MODELS:
            raise ValueError(f"unknown fading model {self.fading!r}")
        if self.carrier_ghz <= 0.0:
            raise ValueError("carrier frequency must be > 0")
        if self.shadowing_sigma_db < 0.0:
            raise ValueError("shadowing sigma must be >= 0")
        self.seed = int(self.seed)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class Deployment:
    """One drop: positions, per-link gains, association and serving SINRs.

    mean_gains is the link budget before fast fading (what cell selection
    ranks on); gains carries the block-fading draw used for rates.
    """

    config: RadioConfig
    drop_index: int
    bs_xy: np.ndarray
    user_xy: np.ndarray
    mean_gains: np.ndarray
    gains: np.ndarray
    serving: np.ndarray
    sinr: np.ndarray
    measured: np.ndarray = field(repr=False)
    regenerated: int = 0

    @property
    def n_bs(self) -> int:
        return int(self.bs_xy.shape[0])

    @property
    def n_users(self) -> int:
        return int(self.user_xy.shape[0])


def _associate(config: RadioConfig, mean_gains: np.ndarray) -> np.ndarray:
    # cell selection on the fading-averaged link budget, as in practice;
    # equivalently argmax of the average received SINR
    p_mw = 10.0 ** (config.tx_power_dbm / 10.0)
    n_mw = 10.0 ** (config.noise_dbm / 10.0)
    rx = p_mw * mean_gains
    total = rx.sum(axis=1, keepdims=True)
    return np.argmax(rx / (n_mw + total - rx), axis=1)


def _serving_sinr(
    config: RadioConfig, gains: np.ndarray, serving: np.ndarray
) -> np.ndarray:
    p_mw = 10.0 ** (config.tx_power_dbm / 10.0)
    n_mw = 10.0 ** (config.noise_dbm / 10.0)
    rx = p_mw * gains
    wanted = rx[np.arange(rx.shape[0]), serving]
    interference = rx.sum(axis=1) - wanted
    return wanted / (n_mw + interference)


def generate_drop(config: RadioConfig, drop_index: int) -> Deployment:
    """Draw one deployment, reproducibly from (seed, drop_index).

    A degenerate draw with zero base stations is redrawn from a derived
    sub-stream; the number of redraws is recorded on the deployment.
    """
    area = config.region_km**2
    attempt = 0
    while True:
        rng = np.random.default_rng([config.seed, drop_index, attempt])
        n_bs = int(rng.poisson(config.bs_density * area))
        if n_bs > 0:
            break
        attempt += 1
    n_users = int(rng.poisson(config.user_density * area))
    bs_xy = rng.uniform(0.0, config.region_km, (n_bs, 2))
    user_xy = rng.uniform(0.0, config.region_km, (n_users, 2))

    dist = np.hypot(
        user_xy[:, 0:1] - bs_xy[None, :, 0], user_xy[:, 1:2] - bs_xy[None, :, 1]
    )
    loss_db = PATHLOSS_MODELS[config.pathloss_model](dist, config.carrier_ghz)
    loss_db += rng.normal(0.0, config.shadowing_sigma_db, dist.shape)
    fading = FADING_MODELS[config.fading](rng, dist.shape)
    # an exact-zero fading draw would make a gain vanish; clamp at the
    # smallest positive normal instead
    mean_gains = 10.0 ** (-loss_db / 10.0)
    gains = mean_gains * np.maximum(fading, np.finfo(np.float64).tiny)

    serving = _associate(config, mean_gains)
    sinr = _serving_sinr(config, gains, serving)
    half = config.region_km / (2.0 * math.sqrt(2.0))
    centered = np.abs(bs_xy - config.region_km / 2.0) <= half
    return Deployment(
        config=config,
        drop_index=drop_index,
        bs_xy=bs_xy,
        user_xy=user_xy,
        mean_gains=mean_gains,
        gains=gains,
        serving=serving,
        sinr=sinr,
        measured=centered.all(axis=1),
        regenerated=attempt,
    )


def compute_sinr(deployment: Deployment, user: int) -> float:
    """Serving SINR of one user, recomputed from the stored link gains."""
    if not 0 <= user < deployment.n_users:
        raise IndexError(f"user index {user} out of range")
    config = deployment.config
    p_mw = 10.0 ** (config.tx_power_dbm / 10.0)
    n_mw = 10.0 ** (config.noise_dbm / 10.0)
    rx = p_mw * deployment.gains[user]
    serving = int(deployment.serving[user])
    interference = rx.sum() - rx[serving]
    return float(rx[serving] / (n_mw + interference))


def select_pool(deployment: Deployment, bs: int, n: int) -> UserPool | None:
    """Uniformly pick n users served by the given base station, or None
    (to be counted by the caller) when fewer than n are associated."""
    members = np.flatnonzero(deployment.serving == bs)
    if members.size < n:
        return None
    rng = np.random.default_rng(
        [deployment.config.seed, deployment.drop_index, _POOL_STREAM, bs]
    )
    chosen = np.sort(rng.choice(members, size=n, replace=False))
    return UserPool(ids=chosen, gammas=deployment.sinr[chosen])


def dump_gains(deployment: Deployment, path) -> None:
    """Write the per-link gain table (dB) for external verification."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["drop", "user", "bs", "gain_db", "serving"])
        gains_db = 10.0 * np.log10(deployment.gains)
        for u in range(deployment.n_users):
            for b in range(deployment.n_bs):
                writer.writerow(
                    [
                        deployment.drop_index,
                        u,
                        b,
                        repr(float(gains_db[u, b])),
                        int(deployment.serving[u] == b),
                    ]
                )
