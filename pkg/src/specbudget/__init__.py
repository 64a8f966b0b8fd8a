"""Content-adaptive token budgets from the singular value energy of feature matrices."""

from .config import BudgetConfig, SketchConfig
from .errors import (
    BadDimsError,
    BadMagicError,
    BadProfileError,
    BadVersionError,
    ConvergenceFailure,
    EmptyInputError,
    MisalignedInputError,
    NonFiniteError,
    OutOfRangeError,
    ParseError,
    RankCollapseError,
    SpecBudgetError,
    TruncatedPayloadError,
    ZeroEnergyError,
)
from .matrix_io import read_matrix, write_matrix
from .pruning import (
    PolicyComparison,
    calibrate_static_budget,
    clamp_ratio,
    compare_policies,
    truncate_top_k,
)
from .rsvd import (
    RangeBasis,
    approximate_spectrum,
    budget_randomized,
    frobenius_energy,
    sketch_range,
)
from .spectral import (
    BudgetResult,
    SingularSpectrum,
    budget,
    budget_exact,
    compute_singular_values,
    cumulative_energy_ratio,
    finalize_budget,
    select_raw_rank,
)
from .synthesis import (
    SpectrumProfile,
    generate_spectrum,
    make_ensemble,
    matrix_from_spectrum,
    mixed_profiles,
)

__version__ = "0.1.0"
