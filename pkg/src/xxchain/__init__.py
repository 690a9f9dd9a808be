"""XX spin chain: exact ground-state family, quantum phase transitions and
Schmidt-rank entanglement classification."""

from .entanglement import (
    Bipartition,
    BlockMatrix,
    RankReport,
    build_block,
    numerical_rank,
    row_recurrence_check,
    schmidt_rank,
    slocc_verdict,
)
from .errors import (
    BasisMismatchError,
    CapacityError,
    DegenerateFieldError,
    UnreliableRankError,
    ValidationError,
    XXChainError,
)
from .groundstate import SectorState, amplitude, build_state, dense_vector
from .oracle import (
    build_block_hamiltonian,
    dense_bipartition_rank,
    ground_of_block,
    overlap,
)
from .spectrum import (
    ChainParams,
    PhaseDiagram,
    critical_field,
    critical_fields,
    d_coefficient,
    dispersion,
    ground_sector,
    phase_diagram,
    sector_energy,
)

__version__ = "0.1.0"
