"""Tandem GE/GE/c/N router queue simulator.

The heavy lifting lives in the C++ extension; this package re-exports its
public surface.
"""

from ._core import (
    ArmSpec,
    CsvRow,
    Discipline,
    GEParams,
    MarkovQueueResult,
    MetricCell,
    MetricsReport,
    Rng,
    ScenarioSpec,
    SecurityMode,
    __version__,
    builtin_scenario,
    builtin_scenarios,
    canonical_config,
    csv_string,
    derive_seed,
    emit_chart,
    emit_csv,
    erlang_b,
    exp_sample,
    ge_sample,
    ge_samples,
    ge_tau,
    littles_residual,
    mm1n_solve,
    mmcn_solve,
    parse_config,
    run_scenario,
)

__all__ = [
    "ArmSpec",
    "CsvRow",
    "Discipline",
    "GEParams",
    "MarkovQueueResult",
    "MetricCell",
    "MetricsReport",
    "Rng",
    "ScenarioSpec",
    "SecurityMode",
    "__version__",
    "builtin_scenario",
    "builtin_scenarios",
    "canonical_config",
    "csv_string",
    "derive_seed",
    "emit_chart",
    "emit_csv",
    "erlang_b",
    "exp_sample",
    "ge_sample",
    "ge_samples",
    "ge_tau",
    "littles_residual",
    "mm1n_solve",
    "mmcn_solve",
    "parse_config",
    "run_scenario",
]
