"""Gauge-sector spectra and relaxation gaps of the dissipative two-layer
Dirac-matrix model. All heavy operations live in the C++ extension."""

from ._ddk import (
    GAConfig,
    Lattice,
    SAConfig,
    defect_limited_search,
    exhaustive_sweep,
    fiducial_sector,
    fit_asymptotics,
    genetic_algorithm,
    is_stationary_sector,
    large_gamma_rates,
    min_nonzero_s,
    pooled_curve,
    sector_defects,
    sector_gap,
    sector_spectrum,
    simulated_annealing,
    single_flip_rate,
    uniform_master_spectrum,
)

__all__ = [
    "GAConfig",
    "Lattice",
    "SAConfig",
    "defect_limited_search",
    "exhaustive_sweep",
    "fiducial_sector",
    "fit_asymptotics",
    "genetic_algorithm",
    "is_stationary_sector",
    "large_gamma_rates",
    "min_nonzero_s",
    "pooled_curve",
    "sector_defects",
    "sector_gap",
    "sector_spectrum",
    "simulated_annealing",
    "single_flip_rate",
    "uniform_master_spectrum",
]
