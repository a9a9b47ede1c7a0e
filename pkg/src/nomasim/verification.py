"""Randomized property sweeps over the numeric core, runnable from the
command line (`nomasim verify`) and reused by the test suite.

Each check returns a CheckResult; details carry the tested sample counts
and the worst observed margins so failures are diagnosable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (
    Cluster,
    allocate_powers,
    cluster_feasibility,
    min_power_fraction,
    min_power_fraction_strict,
    noma_rate,
    oma_rate,
    power_factor,
    sic_check,
    sic_tolerance_bound,
)

__all__ = ["CheckResult", "sample_sorted_gammas", "guarantee_sweep", "run_all"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def sample_sorted_gammas(
    rng: np.random.Generator,
    count: int,
    size: int,
    db_range: tuple[float, float] = (0.0, 30.0),
) -> np.ndarray:
    """(count, size) linear SINRs, log-uniform over db_range, rows sorted
    descending."""
    db = rng.uniform(db_range[0], db_range[1], (count, size))
    return -np.sort(-(10.0 ** (db / 10.0)), axis=1)


@dataclass
class GuaranteeStats:
    tested: int = 0
    violations: int = 0
    alloc_failures: int = 0
    ordering_breaks: int = 0
    worst_margin: float = np.inf


def guarantee_sweep(
    rng: np.random.Generator,
    min_clusters: int = 10_000,
    sizes: tuple[int, ...] = (2, 4, 8),
    beta_range: tuple[float, float] = (0.0, 0.05),
    rtol: float = 1e-9,
    beta_aware: bool = True,
    batch: int = 2048,
    max_batches: int = 1_000,
) -> GuaranteeStats:
    """Push random clusters through gate -> allocation -> rates and compare
    every user against its orthogonal rate.

    With beta_aware=True the allocation provisions for the cluster's own
    residual interference (budget overruns drop the cluster, counted); with
    False it is the perfect-SIC pseudo-code form, only guaranteed at
    beta = 0.  Feasible means: gate passed and allocation fits the budget.
    """
    stats = GuaranteeStats()
    for round_idx in range(max_batches):
        size = sizes[round_idx % len(sizes)]
        gammas = sample_sorted_gammas(rng, batch, size)
        betas = rng.uniform(beta_range[0], beta_range[1], batch)
        passed, _, _, _ = kernels.feasibility_batch(gammas, betas)
        if not passed.any():
            continue
        gam = gammas[passed]
        bet = betas[passed]
        alloc_betas = bet if beta_aware else np.zeros_like(bet)
        alphas, _, feasible = kernels.allocate_batch(gam, alloc_betas)
        stats.alloc_failures += int((~feasible).sum())
        if not feasible.any():
            continue
        gam, bet, alphas = gam[feasible], bet[feasible], alphas[feasible]
        stats.ordering_breaks += int((np.diff(alphas, axis=1) <= 0.0).any(axis=1).sum())
        noma = kernels.noma_rates_batch(gam, alphas, bet)
        oma = np.log2(1.0 + gam) / size
        margin = noma - oma
        stats.worst_margin = min(stats.worst_margin, float(margin.min()))
        stats.violations += int((noma < oma - rtol * np.abs(oma)).sum())
        stats.tested += gam.shape[0]
        if stats.tested >= min_clusters and round_idx % len(sizes) == len(sizes) - 1:
            break
    return stats


def check_rate_guarantee(seed: int = 20_240_901, min_clusters: int = 10_000) -> CheckResult:
    rng = np.random.default_rng(seed)
    stats = guarantee_sweep(rng, min_clusters=min_clusters, beta_range=(0.0, 0.1))
    ok = stats.violations == 0 and stats.tested >= min_clusters
    return CheckResult(
        "rate-guarantee",
        ok,
        f"{stats.tested} feasible clusters, {stats.violations} violations, "
        f"worst margin {stats.worst_margin:.3e}, "
        f"{stats.alloc_failures} allocation overruns dropped",
    )


def check_allocation_ordering(seed: int = 7, min_clusters: int = 4_000) -> CheckResult:
    rng = np.random.default_rng(seed)
    stats = guarantee_sweep(rng, min_clusters=min_clusters, beta_range=(0.0, 0.1))
    ok = stats.ordering_breaks == 0
    return CheckResult(
        "allocation-ordering",
        ok,
        f"{stats.tested} feasible clusters, {stats.ordering_breaks} ordering breaks",
    )


def check_presharing_sum(seed: int = 11, min_clusters: int = 4_000) -> CheckResult:
    # pseudo-code allocation on gate-passing clusters: the minimums must
    # leave headroom to share
    rng = np.random.default_rng(seed)
    stats = guarantee_sweep(
        rng, min_clusters=min_clusters, beta_range=(0.0, 0.0), beta_aware=False
    )
    ok = stats.alloc_failures == 0
    return CheckResult(
        "pre-sharing-sum",
        ok,
        f"{stats.tested} feasible clusters, {stats.alloc_failures} budget overruns",
    )


def check_bound_consistency(seed: int = 13, trials: int = 4_000) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = np.inf
    tested = 0
    for _ in range(trials):
        size = int(rng.choice([2, 4, 8, 16]))
        i = int(rng.integers(1, size + 1))
        gamma = float(10.0 ** (rng.uniform(0.0, 3.0)))
        beta = float(rng.uniform(0.0, 1.0))
        strict = min_power_fraction_strict(gamma, size, i, beta)
        floor = (size - i) * strict
        if floor >= 1.0:
            continue
        tail = float(rng.uniform(floor, 1.0))
        gap = strict - min_power_fraction(gamma, size, i, beta, tail)
        worst = min(worst, gap)
        tested += 1
    ok = worst >= -1e-12
    return CheckResult(
        "bound-consistency",
        ok,
        f"{tested} (gamma, size, position, beta, tail) draws, worst gap {worst:.3e}",
    )


def check_tolerance_equivalence() -> CheckResult:
    gammas_db = np.arange(-10.0, 31.0, 2.5)
    betas = np.arange(0.0, 1.0001, 0.01)
    tested = 0
    mismatches = 0
    for size in (2, 4, 8):
        for i in (2, size):
            for gp_db in gammas_db:
                for gc_db in gammas_db:
                    gp, gc = 10.0 ** (gp_db / 10.0), 10.0 ** (gc_db / 10.0)
                    bound = sic_tolerance_bound(gp, gc, size, i)
                    if bound is None:
                        continue
                    for beta in betas:
                        if abs(beta - bound) < 1e-9:
                            continue
                        tested += 1
                        if sic_check(gp, gc, size, i, float(beta)) != (beta < bound):
                            mismatches += 1
    return CheckResult(
        "tolerance-bound-equivalence",
        mismatches == 0,
        f"{tested} (pair, beta) points, {mismatches} mismatches",
    )


def check_power_factor_monotone() -> CheckResult:
    gammas = 10.0 ** (np.arange(-20.0, 31.0, 0.5) / 10.0)
    bad = 0
    for gamma in gammas:
        values = [power_factor(float(gamma), size) for size in range(1, 33)]
        if np.any(np.diff(values) >= 0.0):
            bad += 1
    return CheckResult(
        "power-factor-monotone",
        bad == 0,
        f"{gammas.size} SINR points x sizes 1..32, {bad} non-decreasing",
    )


def check_power_factor_limit() -> CheckResult:
    worst = 0.0
    for size in range(1, 33):
        worst = max(worst, abs(power_factor(1e-8, size) - 1.0 / size))
    return CheckResult(
        "power-factor-limit",
        worst < 1e-6,
        f"max |F(1e-8, G) - 1/G| = {worst:.3e} over G = 1..32",
    )


def check_single_user() -> CheckResult:
    bad = 0
    for gamma_db in np.arange(-10.0, 31.0, 1.0):
        gamma = float(10.0 ** (gamma_db / 10.0))
        cluster = Cluster(np.array([0]), np.array([gamma]), beta=0.3)
        alloc = allocate_powers(cluster)
        if alloc.alphas[0] != 1.0:
            bad += 1
        elif noma_rate(cluster, alloc, 1) != oma_rate(gamma, 1):
            bad += 1
        elif cluster_feasibility(cluster).cluster_pass:
            bad += 1
    return CheckResult(
        "single-user-boundary",
        bad == 0,
        f"41 SINR points, {bad} exactness failures (full power, rate parity, OMA designation)",
    )


def run_all(quick: bool = False) -> list[CheckResult]:
    scale = 10 if quick else 1
    return [
        check_rate_guarantee(min_clusters=10_000 // scale),
        check_allocation_ordering(min_clusters=4_000 // scale),
        check_presharing_sum(min_clusters=4_000 // scale),
        check_bound_consistency(trials=4_000 // scale),
        check_tolerance_equivalence(),
        check_power_factor_monotone(),
        check_power_factor_limit(),
        check_single_user(),
    ]
