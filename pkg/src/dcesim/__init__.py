"""Simulation toolkit for multi-photon photon generation in a modulated
cavity coupled to a strongly detuned two- or three-level atom."""

from .hilbert import AtomKind, BasisSpec, OperatorSet, build_operators
from .model import ChiMode, HamiltonianModel, SystemParams
from .spectrum import (DressedSpectrum, LabelingError, RateTable, SweepConfig,
                       dressed_spectrum, matrix_element_A, matrix_element_C,
                       resonant_modulation_frequency, sweep,
                       transition_rate_theta, write_rate_table_csv)
from .dynamics import (DissipationParams, EffectiveModelSpec, PositivityError,
                       Trajectory, TruncationError, bare_state,
                       evolve_effective, evolve_lindblad, evolve_schrodinger,
                       mandel_q, mean_n, write_trajectory_csv)

__version__ = "0.1.0"

__all__ = [
    "AtomKind", "BasisSpec", "OperatorSet", "build_operators",
    "ChiMode", "HamiltonianModel", "SystemParams",
    "DressedSpectrum", "LabelingError", "RateTable", "SweepConfig",
    "dressed_spectrum", "matrix_element_A", "matrix_element_C",
    "resonant_modulation_frequency", "sweep", "transition_rate_theta",
    "write_rate_table_csv",
    "DissipationParams", "EffectiveModelSpec", "PositivityError",
    "Trajectory", "TruncationError", "bare_state", "evolve_effective",
    "evolve_lindblad", "evolve_schrodinger", "mandel_q", "mean_n",
    "write_trajectory_csv",
    "__version__",
]
