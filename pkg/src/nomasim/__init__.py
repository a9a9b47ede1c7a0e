"""Downlink NOMA multi-user clustering, power allocation and system-level
evaluation under imperfect successive interference cancellation."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    Cluster,
    FeasibilityReport,
    InfeasibleClusterError,
    PairCheck,
    PowerAllocation,
    allocate_powers,
    cluster_feasibility,
    min_power_fraction,
    min_power_fraction_strict,
    min_sinr_gap,
    noma_rate,
    noma_sinr,
    oma_rate,
    pair_bound_terms,
    power_factor,
    sic_check,
    sic_tolerance_bound,
)
from .clustering import (  # noqa: F401
    ClusterLayout,
    SchedulingOutcome,
    UserPool,
    evaluate_rates,
    layout_clusters,
    run_amup,
    run_mup,
    run_oma,
    split_cluster,
)
from .netsim import (  # noqa: F401
    Deployment,
    RadioConfig,
    compute_sinr,
    dump_gains,
    generate_drop,
    select_pool,
)
from .harness import (  # noqa: F401
    ExperimentConfig,
    MetricsTable,
    baseline_aup2,
    baseline_near_far,
    emit_outputs,
    run_experiment,
)
