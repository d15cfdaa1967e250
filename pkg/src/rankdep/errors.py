"""Exception types raised by the estimators, null models, and samplers."""


class RankDepError(Exception):
    """Base class for all library errors."""


class InsufficientData(RankDepError):
    """Sample is too small for the requested operation."""


class DegenerateMarginal(RankDepError):
    """A marginal is constant, so the coefficient is undefined."""


class TiesUnsupported(RankDepError):
    """The requested path requires tie-free data in the relevant coordinate."""


class TiesRequireBruteForce(RankDepError):
    """Tied data is only supported through the small-n direct evaluation."""


class TooLargeForBruteForce(RankDepError):
    """Sample exceeds the size cap of a direct U-statistic evaluation."""


class InvalidGrid(RankDepError):
    """Quadrature grid resolution is not an even integer >= 4."""


class KindMismatch(RankDepError):
    """Null model was built for a different coefficient kind."""


class NullMismatch(RankDepError):
    """Null model settings do not match the test being run."""


class InvalidDelta(RankDepError):
    """Dependence parameter is outside the family's admissible range."""


class EnvelopeViolation(RankDepError):
    """Rejection-sampling envelope constant is too small for the target."""


class UnknownPreset(RankDepError):
    """Requested alternative preset name is not defined."""


class InvalidTruncation(RankDepError):
    """Eigenvalue truncation order must be a positive integer."""


class InvalidDrawCount(RankDepError):
    """Monte Carlo draw count must be a positive integer."""
