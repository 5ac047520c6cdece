"""striplab: deterministic sensing-matrix families, statistical RIP / SINC
verification, sufficient-condition checkers, and Basis Pursuit benchmarks."""

__version__ = "0.1.0"

from .frames import (  # noqa: F401
    CoherenceProfile,
    SensingMatrix,
    SubsetEvaluation,
    coherence_profile,
    column_sum_statistic,
    evaluate_subset,
    hollow_gram,
    normalize_columns,
    restricted_gram_norm,
    sinc_statistic,
    spectral_norm,
)
from .constructions import (  # noqa: F401
    FamilySpec,
    build,
    build_chirp,
    build_delsarte_goethals,
    build_gaussian,
    build_random_harmonic,
    build_reed_muller,
    build_simplex_etf,
    build_sub_fourier,
    code_to_matrix,
    validate_etf,
)
from .verify import (  # noqa: F401
    TailEstimate,
    TailQuery,
    clopper_pearson,
    estimate_tail,
    mc_vs_exhaustive_check,
    strip_profile,
)
from .conditions import (  # noqa: F401
    ConditionInputs,
    TheoremWitness,
    check_corollary1,
    check_theorem1,
    check_theorem2,
    regime_report,
    required_sinc_level,
    theorem2_scan,
)
from .recovery import (  # noqa: F401
    GenericSignal,
    RecoveryTrial,
    SolverConfig,
    assemble_signal,
    basis_pursuit,
    recovery_experiment,
    recovery_metrics,
    sample_generic_signal,
)
from .frameio import load_frame, save_frame  # noqa: F401
