"""Constrained PST design: the analytic four-site chain and power-law wires."""
from .nn4 import (
    Nn4Amplitudes,
    Nn4Spectrum,
    Nn4Verdict,
    check_overlap,
    classify_4site_permutation,
    nn4_hamiltonian,
    nn4_parameters,
    printed_closed_forms,
    solve_nn4,
    nn_commutant_connects,
)
from .powerlaw import (
    TABLE_I,
    SolverOptions,
    WireDesign,
    power_law_matrix,
    sector_eigenvalues,
    solve_power_law,
    table_design,
)

__all__ = [
    "Nn4Amplitudes",
    "Nn4Spectrum",
    "Nn4Verdict",
    "SolverOptions",
    "TABLE_I",
    "WireDesign",
    "check_overlap",
    "classify_4site_permutation",
    "nn4_hamiltonian",
    "nn4_parameters",
    "power_law_matrix",
    "printed_closed_forms",
    "sector_eigenvalues",
    "solve_nn4",
    "solve_power_law",
    "nn_commutant_connects",
    "table_design",
]
