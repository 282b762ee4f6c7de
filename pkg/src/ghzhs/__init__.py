"""GHZ states in the Pauli (Hilbert-Schmidt) basis, the three-arm interferometer,
and executable checks that local unitaries only move blocks that involve the
acted party."""

from .errors import AddressingError, NormalizationError, ParameterError, ValidationError
from .hsdecomp import (
    CoefficientTensor,
    PauliString,
    RotationMatrix,
    decompose,
    pauli_string_matrix,
    reconstruct,
    rotate_frame,
    su2_to_so3,
    transform_under_local_unitary,
)
from .interferometer import (
    OutcomeDistribution,
    PhaseSettings,
    beam_splitter_unitary,
    correlation,
    evolve_ghz,
    ghsz_contradiction_report,
    sample_outcomes,
)
from .locality import LocalityReport, locality_sweep, verify_locality
from .qstate import (
    DensityMatrix,
    LocalUnitary,
    PureState,
    apply_local_unitary,
    ghz_density,
    ghz_pure,
    partial_trace,
    pure_to_density,
    random_density,
)

__version__ = "0.1.0"
