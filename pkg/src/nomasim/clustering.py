"""Near-far cluster layout and the scheduling policies built on it.

The layout sorts users by SINR, fills a grid column by column, flips the
second half of the columns and reads clusters off the rows, which pairs
the strongest users with the weakest.  Policies: plain orthogonal sharing
(OMA), all-or-nothing clustering (MUP) and recursive-split clustering
(AMUP).  Rates are normalized to each original cluster's resource: a NOMA
sub-group of size g descending from a size-G cluster holds g/G of that
resource, an OMA user holds 1/G.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .core import Cluster, InfeasibleClusterError, _check_beta

__all__ = [
    "UserPool",
    "ClusterLayout",
    "SchedulingOutcome",
    "RateSummary",
    "layout_clusters",
    "split_cluster",
    "run_oma",
    "run_mup",
    "run_amup",
    "evaluate_rates",
]


@dataclass
class UserPool:
    """Users associated with one serving cell, in no particular order."""

    ids: np.ndarray
    gammas: np.ndarray

    def __post_init__(self) -> None:
        self.ids = np.asarray(self.ids, dtype=np.int64)
        self.gammas = np.asarray(self.gammas, dtype=np.float64)
        if self.ids.ndim != 1 or self.ids.shape != self.gammas.shape:
            raise ValueError("ids and gammas must be 1-D arrays of equal length")
        if self.size < 1:
            raise ValueError("pool must contain at least one user")
        if len(np.unique(self.ids)) != self.size:
            raise ValueError("user ids must be unique")
        if not np.all(np.isfinite(self.gammas)) or np.any(self.gammas <= 0.0):
            raise ValueError("all SINRs must be finite and > 0")

    @property
    def size(self) -> int:
        return int(self.ids.shape[0])


@dataclass
class ClusterLayout:
    """Row-per-cluster grids of user ids and SINRs, rows sorted descending."""

    ids: np.ndarray
    gammas: np.ndarray

    @property
    def size(self) -> int:
        return int(self.gammas.shape[1])

    @property
    def n_clusters(self) -> int:
        return int(self.gammas.shape[0])

    @property
    def n_users(self) -> int:
        return int(self.gammas.size)

    def cluster(self, row: int, beta: float = 0.0) -> Cluster:
        return Cluster(self.ids[row].copy(), self.gammas[row].copy(), beta)


def _check_cluster_size(size: int) -> None:
    if size < 1 or size & (size - 1):
        raise ValueError(f"cluster size must be a power of two, got {size}")


def _grid(order: np.ndarray, size: int) -> np.ndarray:
    # column-by-column fill of an (N/size, size) grid, then a vertical flip
    # of the second half of the columns
    rows = order.shape[0] // size
    cols = order.reshape(size, rows).copy()
    flip_from = (size + 1) // 2
    cols[flip_from:] = cols[flip_from:, ::-1]
    return cols.T


def layout_clusters(pool: UserPool, size: int) -> ClusterLayout:
    """Partition the pool into N/size clusters of the given size."""
    _check_cluster_size(size)
    if pool.size % size:
        raise ValueError(f"pool of {pool.size} users not divisible by size {size}")
    order = np.argsort(-pool.gammas, kind="stable")
    grid = _grid(order, size)
    gammas = pool.gammas[grid]
    # the grid construction leaves rows descending, but re-sort to keep the
    # ordering a hard guarantee (stable, so ties stay deterministic)
    reorder = np.argsort(-gammas, axis=1, kind="stable")
    return ClusterLayout(
        ids=np.take_along_axis(pool.ids[grid], reorder, axis=1),
        gammas=np.take_along_axis(gammas, reorder, axis=1),
    )


def split_cluster(cluster: Cluster) -> tuple[Cluster, Cluster]:
    """Split a cluster into two halves using the same sort/reshape/flip
    procedure as the top-level layout, so the halves match what a direct
    half-size layout of the same users would produce."""
    if cluster.size % 2 or cluster.size < 2:
        raise ValueError(f"can only split even-sized clusters, got {cluster.size}")
    pool = UserPool(cluster.ids.copy(), cluster.gammas.copy())
    half = layout_clusters(pool, cluster.size // 2)
    return half.cluster(0, cluster.beta), half.cluster(1, cluster.beta)


@lru_cache(maxsize=None)
def _split_indices(size: int) -> tuple[np.ndarray, np.ndarray]:
    # index templates: applying them to a descending-sorted row yields the
    # two half-size children of the sort/reshape/flip split, still sorted
    half = size // 2
    first = np.empty(half, dtype=np.int64)
    second = np.empty(half, dtype=np.int64)
    for c in range(half):
        if 2 * c < half:
            first[c], second[c] = 2 * c, 2 * c + 1
        else:
            first[c], second[c] = 2 * c + 1, 2 * c
    return first, second


@dataclass
class SchedulingOutcome:
    """Per-user scheduling decisions and achieved rates for one pool.

    Users carry the label of the effective group they ended up in (OMA
    users form singleton groups), the share of their original cluster's
    resource that group holds, and for NOMA users their power fraction.
    pair_checks counts adjacent-pair feasibility evaluations, for
    complexity accounting.
    """

    user_ids: np.ndarray
    gammas: np.ndarray
    is_noma: np.ndarray
    group_id: np.ndarray
    group_size: np.ndarray
    cluster_index: np.ndarray
    resource_fraction: np.ndarray
    alpha: np.ndarray
    achieved_rate: np.ndarray
    size: int
    beta: float
    pair_checks: int


@dataclass
class RateSummary:
    rates: np.ndarray
    cell_spectral_efficiency: float


def evaluate_rates(outcome: SchedulingOutcome) -> RateSummary:
    """Cell spectral efficiency: mean per-user achieved rate."""
    rates = outcome.achieved_rate.copy()
    return RateSummary(rates, float(rates.mean()))


class _OutcomeBuilder:
    def __init__(self, size: int, beta: float):
        self.size = size
        self.beta = beta
        self.parts: list[tuple] = []
        self.next_group = 0
        self.pair_checks = 0

    def add_noma(self, ids, gammas, rows, alphas, rates, group_size):
        n, g = ids.shape
        groups = self.next_group + np.arange(n)
        self.next_group += n
        frac = group_size / self.size
        self.parts.append(
            (
                ids.ravel(),
                gammas.ravel(),
                np.ones(n * g, dtype=bool),
                np.repeat(groups, g),
                np.full(n * g, group_size, dtype=np.int64),
                np.repeat(rows, g),
                np.full(n * g, frac),
                alphas.ravel(),
                (rates * frac).ravel(),
            )
        )

    def add_oma(self, ids, gammas, rows):
        n, g = ids.shape
        count = n * g
        groups = self.next_group + np.arange(count)
        self.next_group += count
        self.parts.append(
            (
                ids.ravel(),
                gammas.ravel(),
                np.zeros(count, dtype=bool),
                groups,
                np.ones(count, dtype=np.int64),
                np.repeat(rows, g),
                np.full(count, 1.0 / self.size),
                np.full(count, np.nan),
                np.log2(1.0 + gammas.ravel()) / self.size,
            )
        )

    def build(self) -> SchedulingOutcome:
        cols = [np.concatenate(c) for c in zip(*self.parts)]
        return SchedulingOutcome(
            user_ids=cols[0],
            gammas=cols[1],
            is_noma=cols[2],
            group_id=cols[3],
            group_size=cols[4],
            cluster_index=cols[5],
            resource_fraction=cols[6],
            alpha=cols[7],
            achieved_rate=cols[8],
            size=self.size,
            beta=self.beta,
            pair_checks=self.pair_checks,
        )


def run_oma(layout: ClusterLayout) -> SchedulingOutcome:
    """Orthogonal baseline: every user gets a 1/G share of its cluster."""
    out = _OutcomeBuilder(layout.size, 0.0)
    out.add_oma(layout.ids, layout.gammas, np.arange(layout.n_clusters))
    return out.build()


def run_mup(layout: ClusterLayout, beta: float) -> SchedulingOutcome:
    """All-or-nothing clustering: a cluster that passes every adjacent-pair
    check is scheduled NOMA on its whole resource, otherwise all of its
    members fall back to OMA."""
    _check_beta(beta)
    g = layout.size
    n = layout.n_clusters
    betas = np.full(n, beta)
    passed, _, _, _ = kernels.feasibility_batch(layout.gammas, betas)
    out = _OutcomeBuilder(g, beta)
    out.pair_checks = n * (g - 1)
    rows = np.arange(n)
    if passed.any():
        sub = layout.gammas[passed]
        alphas, _, feasible = kernels.allocate_batch(sub, np.zeros(sub.shape[0]))
        if not feasible.all():
            raise InfeasibleClusterError(
                "power budget exceeded for a cluster that passed the gate"
            )
        rates = kernels.noma_rates_batch(sub, alphas, np.full(sub.shape[0], beta))
        out.add_noma(layout.ids[passed], sub, rows[passed], alphas, rates, g)
    failed = ~passed
    if failed.any():
        out.add_oma(layout.ids[failed], layout.gammas[failed], rows[failed])
    return out.build()


def run_amup(layout: ClusterLayout, beta: float) -> SchedulingOutcome:
    """Recursive-split clustering: infeasible clusters are halved (with the
    same near-far layout) and re-checked until a feasible sub-cluster or a
    single user remains; each split halves the resource share."""
    _check_beta(beta)
    top = layout.size
    out = _OutcomeBuilder(top, beta)
    ids = layout.ids
    gammas = layout.gammas
    rows = np.arange(layout.n_clusters)
    g = top
    while ids.shape[0]:
        if g == 1:
            out.add_oma(ids, gammas, rows)
            break
        betas = np.full(ids.shape[0], beta)
        passed, _, _, _ = kernels.feasibility_batch(gammas, betas)
        out.pair_checks += ids.shape[0] * (g - 1)
        if passed.any():
            sub = gammas[passed]
            alphas, _, feasible = kernels.allocate_batch(sub, np.zeros(sub.shape[0]))
            if not feasible.all():
                raise InfeasibleClusterError(
                    "power budget exceeded for a cluster that passed the gate"
                )
            rates = kernels.noma_rates_batch(sub, alphas, np.full(sub.shape[0], beta))
            out.add_noma(ids[passed], sub, rows[passed], alphas, rates, g)
        failed = ~passed
        first, second = _split_indices(g)
        ids = np.concatenate([ids[failed][:, first], ids[failed][:, second]])
        gammas = np.concatenate([gammas[failed][:, first], gammas[failed][:, second]])
        rows = np.concatenate([rows[failed], rows[failed]])
        g //= 2
    return out.build()
