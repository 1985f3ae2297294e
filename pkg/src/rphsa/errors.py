"""Exception types shared across the package."""


class RphsaError(Exception):
    """Base class for all package-specific errors."""


class SingularMatrix(RphsaError):
    """A pivot fell below the singularity threshold during LU factorization."""


class RankDeficient(RphsaError):
    """Row set is numerically rank deficient; orthonormalization failed."""


class DimensionMismatch(RphsaError):
    """Operand dimensions are incompatible."""


class InvalidDims(RphsaError):
    """Requested subspace dimension exceeds the ambient dimension."""


class InvalidBounds(RphsaError):
    """A lower bound is not strictly below its upper bound."""


class DegenerateTrainingSet(RphsaError):
    """Fewer than two distinct samples remain after deduplication."""


class SingularGram(RphsaError):
    """RBF Gram matrix stayed singular even after the jitter retry."""


class DegenerateInput(RphsaError):
    """Input contains duplicate points where distinct ones are required."""


class PopulationTooSmall(RphsaError):
    """Differential evolution needs at least four individuals."""


class UnknownProblem(RphsaError):
    """Benchmark identifier is not one of F1..F6."""


class ArchiveExhausted(RphsaError):
    """Every candidate was rejected as a duplicate for too many iterations."""


class EmptyInput(RphsaError):
    """No usable data rows were supplied."""
