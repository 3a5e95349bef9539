"""Exception hierarchy shared across the package."""


class SemgError(Exception):
    """Base class for every error raised by semgact."""


# ingest
class FormatError(SemgError, ValueError):
    pass


class ParseError(SemgError, ValueError):
    pass


class TooShortError(SemgError, ValueError):
    pass


class DegenerateSpecError(SemgError, ValueError):
    pass


class IoError(SemgError, OSError):
    pass


# signal processing / features
class NonFiniteError(SemgError, ValueError):
    pass


class ZeroEnergyError(SemgError, ValueError):
    pass


class ConstantSignalError(SemgError, ValueError):
    pass


class OrderError(SemgError, ValueError):
    pass


class ConfigError(SemgError, ValueError):
    pass


# pipeline
class InsufficientDataError(SemgError, ValueError):
    pass


class DimError(SemgError, ValueError):
    pass


class EmptySelectionError(SemgError, ValueError):
    pass


# classifiers
class EmptyModelError(SemgError, ValueError):
    pass


class DegenerateLabelsError(SemgError, ValueError):
    pass


class ConvergenceError(SemgError, RuntimeError):
    """SMO did not reach the KKT tolerance.

    ``diagnostics`` carries the iteration count and the last violation gap.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


# evaluation
class StratificationError(SemgError, ValueError):
    pass


class EmptyMatrixError(SemgError, ValueError):
    pass


class FeatureWarning(UserWarning):
    """Emitted when an extractor hits a degenerate input and zero-fills."""
