"""Rate equations, power-allocation bounds and feasibility checks for
downlink NOMA clusters under imperfect SIC.

Users in a cluster are kept sorted by descending OMA SINR; position 1 is
the strongest user.  Power fractions run the other way: the weakest user
receives the largest share.  All SINRs are linear (not dB) and all rates
are normalized spectral efficiencies in bits/s/Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SERIES_GAMMA",
    "SUM_TOL",
    "InfeasibleClusterError",
    "Cluster",
    "PowerAllocation",
    "PairCheck",
    "FeasibilityReport",
    "oma_rate",
    "power_factor",
    "min_power_fraction",
    "min_power_fraction_strict",
    "pair_bound_terms",
    "sic_tolerance_bound",
    "sic_check",
    "min_sinr_gap",
    "cluster_feasibility",
    "allocate_powers",
    "noma_sinr",
    "noma_rate",
]

# Below this SINR the power factor is evaluated by series expansion to avoid
# the 0/0 form at gamma = 0; the expansion is exact to O(gamma^2).
SERIES_GAMMA = 1e-6

# Post-sharing power fractions must sum to 1 within this tolerance.
SUM_TOL = 1e-12


class InfeasibleClusterError(ValueError):
    """Power allocation would need more than the total power budget.

    Raised when the pre-sharing fractions sum to >= 1, which means the
    cluster slipped past the feasibility gate.  Never silently clamped.
    """


def _check_gamma(gamma: float) -> None:
    if not math.isfinite(gamma) or gamma <= 0.0:
        raise ValueError(f"linear SINR must be finite and > 0, got {gamma!r}")


def _check_size(size: int) -> None:
    if size < 1:
        raise ValueError(f"cluster size must be >= 1, got {size}")


def _check_position(size: int, i: int, lowest: int = 1) -> None:
    if not lowest <= i <= size:
        raise ValueError(f"user position must be in [{lowest}, {size}], got {i}")


def _check_beta(beta: float) -> None:
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"SIC imperfection must be in [0, 1], got {beta!r}")


@dataclass
class Cluster:
    """An ordered NOMA cluster: users sorted by descending OMA SINR.

    beta is the SIC imperfection (fraction of a cancelled signal's power
    that survives as residual interference); 0 means perfect SIC.
    """

    ids: np.ndarray
    gammas: np.ndarray
    beta: float = 0.0

    def __post_init__(self) -> None:
        self.ids = np.asarray(self.ids, dtype=np.int64)
        self.gammas = np.asarray(self.gammas, dtype=np.float64)
        if self.ids.ndim != 1 or self.ids.shape != self.gammas.shape:
            raise ValueError("ids and gammas must be 1-D arrays of equal length")
        if self.size < 1:
            raise ValueError("cluster must contain at least one user")
        if not np.all(np.isfinite(self.gammas)) or np.any(self.gammas <= 0.0):
            raise ValueError("all SINRs must be finite and > 0")
        if np.any(np.diff(self.gammas) > 0.0):
            raise ValueError("users must be sorted by descending SINR")
        _check_beta(self.beta)

    @property
    def size(self) -> int:
        return int(self.gammas.shape[0])


@dataclass
class PowerAllocation:
    """Per-user power fractions, position 0 = strongest user.

    Fractions are strictly increasing toward the weakest user and sum to at
    most 1 (exactly 1 after residual sharing).  The single-user case holds
    the full budget, so the open upper bound relaxes to (0, 1].
    """

    alphas: np.ndarray

    def __post_init__(self) -> None:
        self.alphas = np.asarray(self.alphas, dtype=np.float64)
        if self.alphas.ndim != 1 or self.alphas.size < 1:
            raise ValueError("alphas must be a non-empty 1-D array")
        if np.any(self.alphas <= 0.0) or np.any(self.alphas > 1.0):
            raise ValueError("power fractions must lie in (0, 1]")
        if np.any(np.diff(self.alphas) <= 0.0):
            raise ValueError("power fractions must increase toward weaker users")
        if float(self.alphas.sum()) > 1.0 + SUM_TOL:
            raise ValueError("power fractions must sum to at most 1")

    @property
    def total(self) -> float:
        return float(self.alphas.sum())


def oma_rate(gamma: float, size: int) -> float:
    """Rate of a user that gets a 1/G share of the resource."""
    _check_gamma(gamma)
    _check_size(size)
    return math.log2(1.0 + gamma) / size


def power_factor(gamma: float, size: int) -> float:
    """Common factor of the power lower bounds:
    ((1+g)^(1/G) - 1) / (g * (1+g)^(1/G)).

    Continuous at gamma -> 0 with limit 1/G; evaluated through a two-term
    series below SERIES_GAMMA to dodge the 0/0 form for deep-fade users.
    """
    _check_size(size)
    _check_gamma(gamma)
    if gamma < SERIES_GAMMA:
        return (1.0 - (size + 1.0) / (2.0 * size) * gamma) / size
    root = (1.0 + gamma) ** (1.0 / size)
    return (root - 1.0) / (gamma * root)


def min_power_fraction(
    gamma: float, size: int, i: int, beta: float, tail_sum: float
) -> float:
    """Strict lower bound on the power fraction at position i given the
    total fraction tail_sum already committed to weaker users.

    The position enters only through the caller's tail_sum; it is accepted
    for interface symmetry and validated.
    """
    _check_position(size, i)
    _check_beta(beta)
    if not 0.0 <= tail_sum < 1.0:
        raise ValueError(f"tail_sum must lie in [0, 1), got {tail_sum!r}")
    return (1.0 + (1.0 + (beta - 1.0) * tail_sum) * gamma) * power_factor(gamma, size)


def min_power_fraction_strict(gamma: float, size: int, i: int, beta: float) -> float:
    """Tail-independent (stricter) lower bound on the fraction at position i."""
    _check_position(size, i)
    _check_beta(beta)
    gf = gamma * power_factor(gamma, size)
    denom = 1.0 - (beta - 1.0) * (size - i) * gf
    # beta <= 1 keeps the denominator >= 1
    assert denom > 0.0
    return (1.0 + gamma) * power_factor(gamma, size) / denom


def pair_bound_terms(
    gamma_prev: float, gamma_curr: float, size: int, i: int
) -> tuple[float, float, float]:
    """Terms shared by the adjacent-pair checks for positions (i-1, i).

    Returns (ratio, tail_curr, tail_prev): the ratio of the two users'
    solo power bounds, and the weighted-tail terms of the current and
    previous positions.  Meaningful for sorted pairs; computed regardless.
    """
    _check_position(size, i, lowest=2)
    fp = power_factor(gamma_prev, size)
    fc = power_factor(gamma_curr, size)
    ratio = (1.0 + gamma_prev) * fp / ((1.0 + gamma_curr) * fc)
    tail_curr = (size - i) * gamma_curr * fc
    tail_prev = (size - i + 1) * gamma_prev * fp
    return ratio, tail_curr, tail_prev


def sic_tolerance_bound(
    gamma_prev: float, gamma_curr: float, size: int, i: int
) -> float | None:
    """Largest SIC imperfection the pair (i-1, i) tolerates, or None.

    None means the divisor changes sign and the closed form is undefined;
    callers must fall back to sic_check, which evaluates the pre-division
    inequality directly.
    """
    ratio, tail_curr, tail_prev = pair_bound_terms(gamma_prev, gamma_curr, size, i)
    denom = tail_prev - ratio * tail_curr
    if denom <= 0.0:
        return None
    return (1.0 - ratio) / denom + 1.0


def sic_check(
    gamma_prev: float, gamma_curr: float, size: int, i: int, beta: float
) -> bool:
    """Sign-safe form of the pair's SIC-imperfection constraint.

    Equivalent to beta < sic_tolerance_bound wherever that bound is
    defined, but avoids the sign-sensitive division.
    """
    _check_beta(beta)
    ratio, tail_curr, tail_prev = pair_bound_terms(gamma_prev, gamma_curr, size, i)
    return 1.0 - (beta - 1.0) * tail_prev > ratio * (1.0 - (beta - 1.0) * tail_curr)


def min_sinr_gap(gamma_prev: float, gamma_curr: float, size: int, i: int) -> float:
    """Minimum SINR lead user i-1 must hold over user i (may be negative)."""
    ratio, tail_curr, _ = pair_bound_terms(gamma_prev, gamma_curr, size, i)
    fp = power_factor(gamma_prev, size)
    return (ratio * tail_curr + ratio - 1.0) / ((size - i + 1) * fp) - gamma_curr


@dataclass
class PairCheck:
    """Feasibility record for the adjacent pair at positions (i-1, i)."""

    position: int
    sinr_gap: float
    min_gap: float
    sic_bound: float | None
    gap_ok: bool
    sic_ok: bool

    @property
    def passed(self) -> bool:
        return self.gap_ok and self.sic_ok


@dataclass
class FeasibilityReport:
    """Per-pair checks plus the all-pairs verdict for one cluster.

    Singletons have no pairs and are defined to fail: they are OMA users.
    """

    pairs: list[PairCheck] = field(default_factory=list)
    cluster_pass: bool = False


def cluster_feasibility(cluster: Cluster) -> FeasibilityReport:
    """Evaluate the SINR-gap and SIC-imperfection checks for every adjacent
    pair.  All pairs are always evaluated (no short-circuit) so the report
    is complete and check counts are exact.
    """
    g = cluster.size
    if g < 2:
        return FeasibilityReport(pairs=[], cluster_pass=False)
    pairs = []
    for i in range(2, g + 1):
        gp = float(cluster.gammas[i - 2])
        gc = float(cluster.gammas[i - 1])
        gap = gp - gc
        need = min_sinr_gap(gp, gc, g, i)
        sic_ok = sic_check(gp, gc, g, i, cluster.beta)
        pairs.append(
            PairCheck(
                position=i,
                sinr_gap=gap,
                min_gap=need,
                sic_bound=sic_tolerance_bound(gp, gc, g, i),
                gap_ok=gap > need,
                sic_ok=sic_ok,
            )
        )
    return FeasibilityReport(pairs=pairs, cluster_pass=all(p.passed for p in pairs))


def allocate_powers(cluster: Cluster, beta_alloc: float = 0.0) -> PowerAllocation:
    """Allocate minimum power fractions from the weakest user up, then share
    the unused remainder equally.

    beta_alloc = 0 reproduces the pseudo-code allocation; passing the
    cluster's actual SIC imperfection gives the conservative variant that
    provisions for residual interference.  The caller is responsible for
    gating on cluster_feasibility first.
    """
    _check_beta(beta_alloc)
    g = cluster.size
    if g == 1:
        # bound is exactly the whole budget; no residual to share
        return PowerAllocation(np.array([1.0]))
    alphas = np.empty(g)
    tail = 0.0
    for pos in range(g, 0, -1):
        if tail >= 1.0:
            raise InfeasibleClusterError(
                f"committed fraction reached {tail} before position {pos}"
            )
        alphas[pos - 1] = min_power_fraction(
            float(cluster.gammas[pos - 1]), g, pos, beta_alloc, tail
        )
        tail += alphas[pos - 1]
    if tail >= 1.0:
        raise InfeasibleClusterError(
            f"minimum fractions sum to {tail}; cluster escaped the feasibility gate"
        )
    alphas += (1.0 - tail) / g
    return PowerAllocation(alphas)


def noma_sinr(cluster: Cluster, alloc: PowerAllocation, i: int) -> float:
    """SINR of the user at position i when all cluster members share the
    resource: full interference from stronger users, beta-residual from
    the (imperfectly) cancelled weaker ones.
    """
    g = cluster.size
    _check_position(g, i)
    if alloc.alphas.shape[0] != g:
        raise ValueError("allocation length does not match cluster size")
    gamma = float(cluster.gammas[i - 1])
    stronger = float(np.sum(alloc.alphas[: i - 1]))
    weaker = float(np.sum(alloc.alphas[i:]))
    denom = 1.0 + stronger * gamma + cluster.beta * weaker * gamma
    return float(alloc.alphas[i - 1]) * gamma / denom


def noma_rate(cluster: Cluster, alloc: PowerAllocation, i: int) -> float:
    """Rate of the user at position i on the cluster's full resource."""
    return math.log2(1.0 + noma_sinr(cluster, alloc, i))
