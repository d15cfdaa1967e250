"""Rank correlation coefficients with calibrated independence tests.

The package computes five rank-based dependence coefficients, supplies
their asymptotic, Monte Carlo, and permutation null distributions, and
ships a seeded harness for local-alternative power studies plus a
command-line front end (``rankdep``).
"""

from .alternatives import (
    GENERALIZED_ROTATION,
    MIXTURE,
    PRESET_NAMES,
    ROTATION,
    AlternativeModel,
    LocalSchedule,
    gaussian_margin,
    preset,
    sample_generalized_rotation,
    sample_mixture,
    sample_rotation,
    uniform_margin,
)
from .coefficients import (
    CoefficientEstimate,
    d_n_brute,
    d_n_fast,
    r_n,
    r_n_brute,
    taustar_n,
    taustar_n_brute,
    xi_n,
    xi_star_n,
    zeta_n,
)
from .errors import (
    DegenerateMarginal,
    EnvelopeViolation,
    InsufficientData,
    InvalidDelta,
    InvalidDrawCount,
    InvalidGrid,
    InvalidTruncation,
    KindMismatch,
    NullMismatch,
    RankDepError,
    TiesRequireBruteForce,
    TiesUnsupported,
    TooLargeForBruteForce,
    UnknownPreset,
)
from .independence import (
    TestResult,
    mu_test,
    permutation_test,
    xi_star_test,
    xi_test,
)
from .kernels import (
    KernelSpec,
    default_bandwidth,
    default_grid_resolution,
    simpson2d,
    simpson_weights,
    triweight_cdf,
    triweight_density,
    triweight_kernel,
)
from .nulls import (
    XI_LIMIT_VARIANCE,
    EigenGrid,
    NullModel,
    load_bank,
    monte_carlo_null,
    normal_xi_null,
    permutation_null,
    save_bank,
    weighted_chisq_null,
    xi_projection_diagnostic,
    xi_star_null,
)
from .power import (
    ALL_COEFFICIENTS,
    CellResult,
    PowerStudyConfig,
    ResultTable,
    run_power_study,
    weighted_bank,
    xi_star_bank,
)
from .ranks import PairedSample, RankArtifacts, compute_rank_artifacts, midranks

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # data and ranks
    "PairedSample",
    "RankArtifacts",
    "compute_rank_artifacts",
    "midranks",
    # coefficients
    "CoefficientEstimate",
    "xi_n",
    "zeta_n",
    "xi_star_n",
    "d_n_fast",
    "d_n_brute",
    "r_n",
    "r_n_brute",
    "taustar_n",
    "taustar_n_brute",
    # kernels and quadrature
    "KernelSpec",
    "triweight_kernel",
    "triweight_density",
    "triweight_cdf",
    "default_bandwidth",
    "default_grid_resolution",
    "simpson_weights",
    "simpson2d",
    # null distributions
    "XI_LIMIT_VARIANCE",
    "EigenGrid",
    "NullModel",
    "normal_xi_null",
    "weighted_chisq_null",
    "monte_carlo_null",
    "permutation_null",
    "xi_star_null",
    "xi_projection_diagnostic",
    "save_bank",
    "load_bank",
    # tests
    "TestResult",
    "xi_test",
    "mu_test",
    "xi_star_test",
    "permutation_test",
    # alternatives
    "ROTATION",
    "MIXTURE",
    "GENERALIZED_ROTATION",
    "PRESET_NAMES",
    "AlternativeModel",
    "LocalSchedule",
    "gaussian_margin",
    "uniform_margin",
    "sample_rotation",
    "sample_mixture",
    "sample_generalized_rotation",
    "preset",
    # power harness
    "ALL_COEFFICIENTS",
    "PowerStudyConfig",
    "CellResult",
    "ResultTable",
    "run_power_study",
    "weighted_bank",
    "xi_star_bank",
    # errors
    "RankDepError",
    "InsufficientData",
    "DegenerateMarginal",
    "TiesUnsupported",
    "TiesRequireBruteForce",
    "TooLargeForBruteForce",
    "InvalidGrid",
    "KindMismatch",
    "NullMismatch",
    "InvalidDelta",
    "EnvelopeViolation",
    "UnknownPreset",
    "InvalidTruncation",
    "InvalidDrawCount",
]
