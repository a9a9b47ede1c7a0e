"""Numba backend for the batch cluster kernels.

Same signatures and semantics as _kernels_np; the loops compile to tight
machine code, which is what makes large Monte Carlo sweeps cheap.
"""

from __future__ import annotations

import numpy as np
from numba import njit

SERIES_GAMMA = 1e-6


@njit(cache=True)
def _pf(gamma, size):
    if gamma < SERIES_GAMMA:
        return (1.0 - (size + 1.0) / (2.0 * size) * gamma) / size
    root = (1.0 + gamma) ** (1.0 / size)
    return (root - 1.0) / (gamma * root)


@njit(cache=True)
def power_factor_batch(gammas, size):
    out = np.empty_like(gammas)
    flat_in = gammas.ravel()
    flat_out = out.ravel()
    for k in range(flat_in.shape[0]):
        flat_out[k] = _pf(flat_in[k], size)
    return out


@njit(cache=True)
def feasibility_batch(gammas, betas):
    n, size = gammas.shape
    cluster_pass = np.zeros(n, dtype=np.bool_)
    pair_pass = np.zeros((n, size - 1), dtype=np.bool_)
    min_gap = np.empty((n, size - 1))
    sic_bound = np.empty((n, size - 1))
    if size < 2:
        return cluster_pass, pair_pass, min_gap, sic_bound
    for r in range(n):
        beta = betas[r]
        all_ok = True
        for i in range(2, size + 1):
            gp = gammas[r, i - 2]
            gc = gammas[r, i - 1]
            fp = _pf(gp, size)
            fc = _pf(gc, size)
            ratio = (1.0 + gp) * fp / ((1.0 + gc) * fc)
            tail_curr = (size - i) * gc * fc
            tail_prev = (size - i + 1.0) * gp * fp
            need = (ratio * tail_curr + ratio - 1.0) / ((size - i + 1.0) * fp) - gc
            gap_ok = (gp - gc) > need
            sic_ok = 1.0 - (beta - 1.0) * tail_prev > ratio * (
                1.0 - (beta - 1.0) * tail_curr
            )
            denom = tail_prev - ratio * tail_curr
            if denom > 0.0:
                sic_bound[r, i - 2] = (1.0 - ratio) / denom + 1.0
            else:
                sic_bound[r, i - 2] = np.nan
            min_gap[r, i - 2] = need
            ok = gap_ok and sic_ok
            pair_pass[r, i - 2] = ok
            all_ok = all_ok and ok
        cluster_pass[r] = all_ok
    return cluster_pass, pair_pass, min_gap, sic_bound


@njit(cache=True)
def allocate_batch(gammas, beta_alloc):
    n, size = gammas.shape
    alphas = np.empty_like(gammas)
    pre_sum = np.empty(n)
    feasible = np.empty(n, dtype=np.bool_)
    if size == 1:
        for r in range(n):
            alphas[r, 0] = 1.0
            pre_sum[r] = 1.0
            feasible[r] = True
        return alphas, pre_sum, feasible
    for r in range(n):
        tail = 0.0
        for pos in range(size - 1, -1, -1):
            a = (1.0 + (1.0 + (beta_alloc[r] - 1.0) * tail) * gammas[r, pos]) * _pf(
                gammas[r, pos], size
            )
            alphas[r, pos] = a
            tail += a
        pre_sum[r] = tail
        feasible[r] = tail < 1.0
        if feasible[r]:
            share = (1.0 - tail) / size
            for pos in range(size):
                alphas[r, pos] += share
    return alphas, pre_sum, feasible


@njit(cache=True)
def noma_rates_batch(gammas, alphas, betas):
    n, size = gammas.shape
    rates = np.empty_like(gammas)
    for r in range(n):
        total = 0.0
        for pos in range(size):
            total += alphas[r, pos]
        stronger = 0.0
        for pos in range(size):
            g = gammas[r, pos]
            weaker = total - stronger - alphas[r, pos]
            denom = 1.0 + stronger * g + betas[r] * weaker * g
            rates[r, pos] = np.log2(1.0 + alphas[r, pos] * g / denom)
            stronger += alphas[r, pos]
    return rates
