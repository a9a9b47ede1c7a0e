"""Pure-numpy backend for the batch cluster kernels.

Every function takes a C-contiguous (n_clusters, size) float64 array of
descending-sorted linear SINRs; per-cluster SIC imperfections come in as a
length-n vector so mixed-beta batches work.  Semantics match the scalar
routines in core.py exactly.
"""

from __future__ import annotations

import numpy as np

from .core import SERIES_GAMMA


def power_factor_batch(gammas: np.ndarray, size: int) -> np.ndarray:
    """Elementwise power factor ((1+g)^(1/G)-1)/(g(1+g)^(1/G))."""
    g = np.asarray(gammas, dtype=np.float64)
    root = (1.0 + g) ** (1.0 / size)
    small = g < SERIES_GAMMA
    safe = np.where(small, 1.0, g)
    main = (root - 1.0) / (safe * root)
    series = (1.0 - (size + 1.0) / (2.0 * size) * g) / size
    return np.where(small, series, main)


def feasibility_batch(gammas: np.ndarray, betas: np.ndarray):
    """Adjacent-pair checks for every cluster in the batch.

    Returns (cluster_pass (n,), pair_pass (n,G-1), min_gap (n,G-1),
    sic_bound (n,G-1)); sic_bound is NaN where the closed form is
    undefined.  Size-1 clusters have no pairs and fail by definition.
    """
    gammas = np.asarray(gammas, dtype=np.float64)
    n, size = gammas.shape
    if size < 2:
        return (
            np.zeros(n, dtype=bool),
            np.zeros((n, 0), dtype=bool),
            np.empty((n, 0)),
            np.empty((n, 0)),
        )
    betas = np.asarray(betas, dtype=np.float64).reshape(n, 1)
    gp = gammas[:, :-1]
    gc = gammas[:, 1:]
    pos = np.arange(2, size + 1, dtype=np.float64)
    fp = power_factor_batch(gp, size)
    fc = power_factor_batch(gc, size)
    ratio = (1.0 + gp) * fp / ((1.0 + gc) * fc)
    tail_curr = (size - pos) * gc * fc
    tail_prev = (size - pos + 1.0) * gp * fp
    min_gap = (ratio * tail_curr + ratio - 1.0) / ((size - pos + 1.0) * fp) - gc
    gap_ok = (gp - gc) > min_gap
    sic_ok = 1.0 - (betas - 1.0) * tail_prev > ratio * (1.0 - (betas - 1.0) * tail_curr)
    denom = tail_prev - ratio * tail_curr
    defined = denom > 0.0
    sic_bound = np.where(
        defined, (1.0 - ratio) / np.where(defined, denom, 1.0) + 1.0, np.nan
    )
    pair_pass = gap_ok & sic_ok
    return pair_pass.all(axis=1), pair_pass, min_gap, sic_bound


def allocate_batch(gammas: np.ndarray, beta_alloc: np.ndarray):
    """Minimum-then-shared power fractions for every cluster in the batch.

    Returns (alphas (n,G), pre_sum (n,), feasible (n,)).  Rows whose
    minimum fractions already reach the budget are flagged infeasible and
    keep their unshared minimums; callers must not use them.  Size-1
    clusters take the whole budget and are always feasible.
    """
    gammas = np.asarray(gammas, dtype=np.float64)
    n, size = gammas.shape
    if size == 1:
        return np.ones((n, 1)), np.ones(n), np.ones(n, dtype=bool)
    beta_alloc = np.asarray(beta_alloc, dtype=np.float64)
    factors = power_factor_batch(gammas, size)
    alphas = np.empty_like(gammas)
    tail = np.zeros(n)
    for pos in range(size - 1, -1, -1):
        alphas[:, pos] = (
            1.0 + (1.0 + (beta_alloc - 1.0) * tail) * gammas[:, pos]
        ) * factors[:, pos]
        tail = tail + alphas[:, pos]
    feasible = tail < 1.0
    share = np.where(feasible, (1.0 - tail) / size, 0.0)
    return alphas + share[:, None], tail, feasible


def noma_rates_batch(
    gammas: np.ndarray, alphas: np.ndarray, betas: np.ndarray
) -> np.ndarray:
    """Per-user rates when each cluster's members share its full resource."""
    gammas = np.asarray(gammas, dtype=np.float64)
    alphas = np.asarray(alphas, dtype=np.float64)
    n = gammas.shape[0]
    betas = np.asarray(betas, dtype=np.float64).reshape(n, 1)
    csum = np.cumsum(alphas, axis=1)
    stronger = csum - alphas
    weaker = csum[:, -1:] - csum
    denom = 1.0 + stronger * gammas + betas * weaker * gammas
    return np.log2(1.0 + alphas * gammas / denom)
