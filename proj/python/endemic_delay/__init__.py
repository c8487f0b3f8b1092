"""Endemic SLIRD model with distributed delays and its discrete-lag approximation."""

from ._core import (
    Compartment,
    ConvergenceReport,
    DiracComb,
    HistoryData,
    KernelDensity,
    ModelParams,
    NodeRule,
    ReferenceKind,
    SolverError,
    SweepEntry,
    Trajectory,
    __version__,
    convergence_sweep,
    derive_mu,
    discretize,
    initial_conditions,
    mean_delay,
    observed_order,
    solve_chain_oracle,
    solve_discrete,
    solve_reference,
    sup_norm_error,
    truncation_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
