"""Cooperative cognitive-radio queueing toolkit.

A primary (licensed) transmitter and a secondary (opportunistic) one share a
collision channel in discrete time.  The secondary node can relay primary
packets that failed over the direct link, spending some of its own
transmission opportunities in exchange for the idle slots that a faster
primary departure process creates.  This package provides the closed-form
queue model for that protocol, optimizers for the relay policy under a
primary delay bound, a slot-level Monte Carlo simulator, and canned
parameter sweeps with CSV output.
"""

from .model import (
    DEN_EPS,
    DelayBound,
    DerivedRates,
    ModelError,
    NearSingularError,
    NetworkParams,
    Policy,
    PrimaryUnstableError,
    QueueMetrics,
    UnstableQueueError,
    config_warnings,
    derived_rates,
    pu_delay_gap,
    pu_service_rate,
    queue_metrics,
    stability,
    su_delay_slope,
)
from .optimize import (
    OptResult,
    SearchConfig,
    best_pick_own,
    solve_max_throughput,
    solve_min_delay,
    solve_unconstrained,
)
from .sim import QueueSim, SimConfig, SimReport, run
from .sweeps import (
    CSV_COLUMNS,
    FIGURES,
    SimAttach,
    SweepPlan,
    SweepRow,
    delay_tradeoff_pu,
    delay_tradeoff_su,
    figure_rows,
    frange,
    pu_delay_check,
    rows_to_csv,
    run_sweep,
    throughput_region,
    write_rows,
)

__version__ = "0.1.0"

__all__ = [
    "DEN_EPS",
    "DelayBound",
    "DerivedRates",
    "ModelError",
    "NearSingularError",
    "NetworkParams",
    "Policy",
    "PrimaryUnstableError",
    "QueueMetrics",
    "UnstableQueueError",
    "config_warnings",
    "derived_rates",
    "pu_delay_gap",
    "pu_service_rate",
    "queue_metrics",
    "stability",
    "su_delay_slope",
    "OptResult",
    "SearchConfig",
    "best_pick_own",
    "solve_max_throughput",
    "solve_min_delay",
    "solve_unconstrained",
    "QueueSim",
    "SimConfig",
    "SimReport",
    "run",
    "CSV_COLUMNS",
    "FIGURES",
    "SimAttach",
    "SweepPlan",
    "SweepRow",
    "delay_tradeoff_pu",
    "delay_tradeoff_su",
    "figure_rows",
    "frange",
    "pu_delay_check",
    "rows_to_csv",
    "run_sweep",
    "throughput_region",
    "write_rows",
    "__version__",
]
