"""
Exceptions raised by polyscar.

Every exception carries a machine-readable :code:`code` and the process exit
code the command line front end returns for it.  All of them are
:code:`ValueError` subclasses so plain argument-checking callers keep working.
"""


class PolyscarError(ValueError):
    """
    Base class of all polyscar errors.

    :meta private:
    """

    code = "error"
    exit_code = 1


class ConfigurationError(PolyscarError):
    """Malformed billiard config, unknown constant tag or bad option."""

    code = "config"
    exit_code = 2


class DomainError(PolyscarError):
    """Argument outside the domain of an operation (zero divisor, empty list, point outside the billiard)."""

    code = "domain"
    exit_code = 2


class ResourceError(PolyscarError):
    """
    A requested precision cannot be reached within the integer or precision limits.

    :param message: human readable message
    :param best: best tolerance that was achieved
    """

    code = "resource"
    exit_code = 4

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ConsistencyError(PolyscarError):
    """Internal consistency check failed, e.g. a non-integer genus."""

    code = "consistency"
    exit_code = 4


class UnsupportedBoundaryError(PolyscarError):
    """The requested boundary conditions cannot be realised by any sign assignment on the EPP."""

    code = "unsupported-boundary"
    exit_code = 2


class NeedsApproximationError(PolyscarError):
    """An irrational period relation was met without a rational approximation."""

    code = "needs-approximation"
    exit_code = 2


class PeriodicSkeletonRequiredError(PolyscarError):
    """Quantum numbers that only make sense on a periodic skeleton."""

    code = "periodic-skeleton-required"
    exit_code = 2


class KindError(PolyscarError):
    """Operation requested on the wrong kind of object, e.g. POCs of an aperiodic direction."""

    code = "kind"
    exit_code = 2


class CompatibilityError(PolyscarError):
    """
    Billiard sizes do not allow quantization on the requested periodic skeleton.

    :param message: human readable message
    :param report: the :class:`quantization.CompatibilityReport` that failed
    """

    code = "compatibility"
    exit_code = 3

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class RemappingError(PolyscarError):
    """Quantum numbers that cannot be mapped between skeletons."""

    code = "remapping"
    exit_code = 2


class UnsupportedError(PolyscarError):
    """Requested check is not available for this mode."""

    code = "unsupported"
    exit_code = 2
