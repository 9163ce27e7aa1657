"""Quantum hypothesis-testing exponents: divergences, optimal tests and cutoff rates."""

from ._qht import (
    BinnedDensity,
    ClassicalPair,
    ConvergenceReport,
    ExponentRecord,
    HoeffdingResult,
    PinchingSpec,
    QhtError,
    StatePair,
    bin_density,
    binning_gaps,
    convergence_sweep,
    cp_index_check,
    cutoff_rate,
    finite_n_exponent,
    fixture,
    fixture_names,
    hoeffding,
    log_q_star,
    max_relative,
    np_classical,
    np_dense,
    petz_renyi,
    sandwiched_renyi,
    umegaki,
)

__all__ = [
    "BinnedDensity",
    "ClassicalPair",
    "ConvergenceReport",
    "ExponentRecord",
    "HoeffdingResult",
    "PinchingSpec",
    "QhtError",
    "StatePair",
    "bin_density",
    "binning_gaps",
    "convergence_sweep",
    "cp_index_check",
    "cutoff_rate",
    "finite_n_exponent",
    "fixture",
    "fixture_names",
    "hoeffding",
    "log_q_star",
    "max_relative",
    "np_classical",
    "np_dense",
    "petz_renyi",
    "sandwiched_renyi",
    "umegaki",
]
