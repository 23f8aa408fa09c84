"""Entanglement dynamics of three two-level atoms coupled to a cavity mode.

Builds excitation-sector Hamiltonians, evolves states spectrally, traces out
the oscillator, and quantifies the reduced three-qubit state by purity and
multipartite concurrence (exact for pure states, quasi-pure lower bound and
convex-roof upper bound for mixed ones).  The scan layer reproduces CP-plane
trajectories and (J, t) density grids; the ``cavity-tangle`` CLI writes them
as CSV.
"""

from .errors import (CavityTangleError, NoFeatureError, ParameterError,
                     ResourceError, StateError)
from .model import (BINARY_INDEX, InitialStateSpec, MAX_FULL_SPACE_LEVELS,
                    ModelParams, PAIRS, QUBIT_STRINGS, SectorVector, W_ALPHA,
                    build_full_hamiltonian, build_hamiltonian,
                    build_initial_state, build_number_operator,
                    build_rotation_operator, build_sector_basis,
                    build_symmetry_projectors, homogeneous_params,
                    quasi_homogeneous_params, sector_dimension,
                    sector_embedding_indices)
from .dynamics import (Propagator, check_density, diagonalize, evolve,
                       evolve_many, partial_trace_oscillator, purity)
from .entanglement import (a_expectation, concurrence_family_phi,
                           concurrence_family_psi, concurrence_pure,
                           concurrence_quasipure, concurrence_upper_bound,
                           proper_subsets, quasipure_exchange_matrix,
                           subset_purity, swap_expectation)
from .scan import (EnvelopeReport, PathDeviationReport, ScanGrid,
                   TrajectoryPoint, cp_trajectory, critical_extent,
                   critical_j, critical_statistic, density_scan,
                   envelope_check, purity_path_deviation, red_curve)

__version__ = "0.1.0"

__all__ = [
    "CavityTangleError", "NoFeatureError", "ParameterError", "ResourceError",
    "StateError",
    "BINARY_INDEX", "InitialStateSpec", "MAX_FULL_SPACE_LEVELS", "ModelParams",
    "PAIRS", "QUBIT_STRINGS", "SectorVector", "W_ALPHA",
    "build_full_hamiltonian", "build_hamiltonian", "build_initial_state",
    "build_number_operator", "build_rotation_operator", "build_sector_basis",
    "build_symmetry_projectors", "homogeneous_params",
    "quasi_homogeneous_params", "sector_dimension", "sector_embedding_indices",
    "Propagator", "check_density", "diagonalize", "evolve", "evolve_many",
    "partial_trace_oscillator", "purity",
    "a_expectation", "concurrence_family_phi", "concurrence_family_psi",
    "concurrence_pure", "concurrence_quasipure", "concurrence_upper_bound",
    "proper_subsets", "quasipure_exchange_matrix", "subset_purity",
    "swap_expectation",
    "EnvelopeReport", "PathDeviationReport", "ScanGrid", "TrajectoryPoint",
    "cp_trajectory", "critical_extent", "critical_j", "critical_statistic",
    "density_scan", "envelope_check", "purity_path_deviation", "red_curve",
]
