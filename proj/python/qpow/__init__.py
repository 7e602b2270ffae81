"""Stochastic power iteration eigensolver toolkit."""

from qpow._core import (
    ColumnOracle,
    ConfigError,
    CounterRng,
    DenseMatrix,
    FileMatrix,
    HubbardMomentum,
    IterationMatrix,
    PopulationCollapse,
    PowerIterationResult,
    SparseVector,
    assumption_suite,
    autocorrelation_time,
    compress,
    dense_eig_smallest,
    dense_from_oracle,
    dot,
    exact_matvec,
    exact_power_iteration,
    fri_step,
    make_sparse,
    norm1,
    norm2,
    parse_config,
    predict_theory,
    projected_energy,
    round_stochastic,
    run_experiment,
    tan_angle,
)

__all__ = [
    "ColumnOracle",
    "ConfigError",
    "CounterRng",
    "DenseMatrix",
    "FileMatrix",
    "HubbardMomentum",
    "IterationMatrix",
    "PopulationCollapse",
    "PowerIterationResult",
    "SparseVector",
    "assumption_suite",
    "autocorrelation_time",
    "compress",
    "dense_eig_smallest",
    "dense_from_oracle",
    "dot",
    "exact_matvec",
    "exact_power_iteration",
    "fri_step",
    "make_sparse",
    "norm1",
    "norm2",
    "parse_config",
    "predict_theory",
    "projected_energy",
    "round_stochastic",
    "run_experiment",
    "tan_angle",
]

__version__ = "0.1.0"
