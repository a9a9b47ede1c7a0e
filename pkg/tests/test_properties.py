"""Randomized invariant sweeps over the numeric core (the same suites the
`verify` CLI subcommand runs), plus a couple of direct property checks."""

import numpy as np
import pytest

from nomasim.core import (
    Cluster,
    allocate_powers,
    cluster_feasibility,
    noma_rate,
    oma_rate,
)
from nomasim import verification as ver


class TestVerificationSuites:
    def test_rate_guarantee(self):
        result = ver.check_rate_guarantee()
        assert result.passed, result.detail

    def test_allocation_ordering(self):
        result = ver.check_allocation_ordering()
        assert result.passed, result.detail

    def test_presharing_sum(self):
        result = ver.check_presharing_sum()
        assert result.passed, result.detail

    def test_bound_consistency(self):
        result = ver.check_bound_consistency()
        assert result.passed, result.detail

    def test_tolerance_bound_equivalence(self):
        result = ver.check_tolerance_equivalence()
        assert result.passed, result.detail

    def test_power_factor_monotone_in_size(self):
        result = ver.check_power_factor_monotone()
        assert result.passed, result.detail

    def test_power_factor_small_sinr_limit(self):
        result = ver.check_power_factor_limit()
        assert result.passed, result.detail

    def test_single_user_boundary(self):
        result = ver.check_single_user()
        assert result.passed, result.detail


class TestScalarPath:
    """The batched sweeps above exercise the kernels; spot-check the same
    guarantees through the scalar functions."""

    def test_gate_then_allocate_beats_oma_at_perfect_sic(self):
        rng = np.random.default_rng(404)
        checked = 0
        while checked < 300:
            size = int(rng.choice([2, 4, 8]))
            gammas = np.sort(10.0 ** rng.uniform(0.0, 3.0, size))[::-1]
            cluster = Cluster(np.arange(size), gammas)
            if not cluster_feasibility(cluster).cluster_pass:
                continue
            alloc = allocate_powers(cluster)
            assert alloc.total == pytest.approx(1.0, abs=1e-12)
            assert (np.diff(alloc.alphas) > 0.0).all()
            for i in range(1, size + 1):
                got = noma_rate(cluster, alloc, i)
                want = oma_rate(float(gammas[i - 1]), size)
                assert got >= want * (1.0 - 1e-9)
            checked += 1

    def test_presharing_total_below_budget(self):
        from nomasim.core import min_power_fraction

        rng = np.random.default_rng(405)
        checked = 0
        while checked < 200:
            size = int(rng.choice([2, 4, 8]))
            gammas = np.sort(10.0 ** rng.uniform(0.0, 3.0, size))[::-1]
            cluster = Cluster(np.arange(size), gammas)
            if not cluster_feasibility(cluster).cluster_pass:
                continue
            tail = 0.0
            for pos in range(size, 0, -1):
                tail += min_power_fraction(float(gammas[pos - 1]), size, pos, 0.0, tail)
            assert tail < 1.0
            checked += 1
