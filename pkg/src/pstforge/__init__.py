"""Perfect-state-transfer Hamiltonians built from permutation eigenstructure."""

__version__ = "0.1.0"

from .errors import BrokenNetworkError, InvalidInputError, NoSolutionError
from .permutation import (
    Cycle,
    SitePermutation,
    antidiagonal_permutation,
    count_transfer_permutations,
    cycle_decompose,
    enumerate_transfer_permutations,
    make_transfer_permutation,
    one_cycle_permutation,
    recompose,
)
from .spectral import (
    CycleEigenpair,
    Eigensystem,
    SpectralAssignment,
    assemble_eigensystem,
    cycle_spectrum,
    degeneracy_table,
)
from .hamiltonian import (
    NoGoCertificate,
    PstHamiltonian,
    VerificationReport,
    build_hamiltonian,
    evolution_operator,
    extract_energies_couplings,
    is_nearest_neighbour,
    no_go_certificate,
    verify_pst,
)
from .dynamics import (
    DynamicsTrace,
    concurrence,
    evolve,
    occupation_trace,
    preset_assignment,
    preset_hamiltonian,
    total_tangle,
)
