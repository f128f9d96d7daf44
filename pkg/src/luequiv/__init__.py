"""Local-unitary equivalence and local distinguishability of multipartite
pure states.

Quick start::

    >>> from luequiv import ghz_state, random_local_tuple, apply_tuple, decide_lu_equivalence
    >>> ghz = ghz_state((2, 2, 2))
    >>> rotated = apply_tuple(ghz, random_local_tuple((2, 2, 2), seed=1))
    >>> decide_lu_equivalence(ghz, rotated).kind
    'Equivalent'
"""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigInvalid,
    DimensionMismatch,
    EigensolverFailure,
    InconsistentRanks,
    LUError,
    NonUnitaryWitness,
    NotGeneric,
    NumericalError,
    PartyOutOfRange,
    ShapeMismatch,
    StateFileError,
    ZeroState,
)
from .state import (  # noqa: E402
    LocalUnitaryTuple,
    PureState,
    apply_tuple,
    basis_state,
    ghz_state,
    identity_tuple,
    inner,
    local_unitary_tuple,
    make_state,
    product_state,
    projective_equal,
    random_haar_state,
    random_local_tuple,
    random_local_unitary,
    random_product_state,
    w_state,
)
from .spectra import (  # noqa: E402
    CanonicalForm,
    SpectralData,
    canonicalize,
    locally_indistinguishable,
    moment_image,
    reduced_matrix,
    spectra_match,
    spectral_data,
)
from .stabilizer import (  # noqa: E402
    BlockStructure,
    MatchResult,
    OptimizerConfig,
    block_overlap_maximize,
    block_structure,
    generic_phase_match,
    is_generic,
    verify_witness,
)
from .geometry import (  # noqa: E402
    AlgebraBasis,
    DimensionsReport,
    algebra_basis,
    dimensions_report,
    kernel_dimension,
    moment_pairing,
    moment_stabilizer_dim,
    orbit_dimension,
    projective_stabilizer_dim,
    symplectic_form,
)
from .pipeline import (  # noqa: E402
    Config,
    Verdict,
    decide_distinguishability,
    decide_lu_equivalence,
)
