"""qfock: indeterminate-length quantum strings, codes, and complexity.

The package models normalized superpositions of classical bitstrings of
different lengths, the variable-length quantum codes built on them, and
finite describer-machine stand-ins for quantum program complexity,
together with the entropy machinery (exact Hermitian eigensolver,
partial traces, inequality checks) needed to reproduce the associated
coding theorems numerically.
"""

__version__ = "0.1.0"

from .errors import (
    QFockError,
    EmptyStateError,
    NotNormalizedError,
    DuplicateKeyError,
    LengthCapExceededError,
    ProbabilitiesDontSumError,
    NotHermitianError,
    ConvergenceFailureError,
    InvalidDistributionError,
    DimensionCapExceededError,
    DimensionMismatchError,
    NotPrefixFreeError,
    MissingCodewordError,
    NotOrthonormalError,
    ArityMismatchError,
    OutOfSpanError,
    NotOrthogonalError,
    InvalidDeltaError,
    NoDescriberError,
    NoOverlapError,
    CapExceededError,
    InvalidAmplitudeError,
    BlockTooLargeForCatalogError,
    DimOutOfRangeError,
    FormatError,
)
from .fock import (
    EPS_TOKEN,
    LENGTH_CAP,
    QString,
    make_qstring,
    basis_state,
    average_length,
    base_length,
    inner_product,
    delimit_bits,
    self_delimit,
    pair_encode,
    pair_decode,
    sequence_encode,
    sequence_decode,
    dump_qstring,
    load_qstring,
    read_qstring_file,
    write_qstring_file,
)
from .codes import (
    PrefixCode,
    ceil_neg_log2,
    kraft_sum,
    kraft_sum_exact,
    canonical_prefix_code,
    shannon_code,
    expected_length,
    code_table_text,
)
from .linalg import (
    Ensemble,
    DensityOperator,
    SpectralDecomposition,
    density_from_ensemble,
    eig_hermitian,
    von_neumann_entropy,
    shannon_entropy,
    entropy_of_spectrum,
    tensor_product,
    partial_trace,
    subsystem_labels,
    load_ensemble,
    dump_ensemble,
    read_ensemble_file,
    write_ensemble_file,
)
from .qcode import (
    CondensableCode,
    CompressionReport,
    LossyReport,
    build_condensable_code,
    encode_qstring,
    sw_lossless_code,
    compression_report,
    sw_report,
    kraft_condensable_check,
    lossy_typical_projection,
)
from .complexity import (
    DescriberMachine,
    MachineCatalog,
    ComplexityEstimate,
    index_cost,
    machine_complexity,
    base_length_complexity,
    universal_complexity,
    min_description_length,
    fidelity_penalized_complexity,
    identity_machine,
    self_delimit_machine,
    machine_from_code,
    all_bitstrings,
    load_machine,
    dump_machine,
    read_machine_file,
    write_machine_file,
)
from .experiments import (
    StateComplexity,
    IncompressibilityReport,
    MultiCopyReport,
    NonadditivityReport,
    MemberComplexity,
    SandwichReport,
    InequalitySpec,
    random_density,
    incompressibility_report,
    multicopy_report,
    multicopy_kraft,
    nonadditivity_search,
    entropy_sandwich_report,
    inequality_check,
    product_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
