"""Exception hierarchy shared across the toolkit."""


class DataComplexityError(Exception):
    """Base class for all toolkit errors."""


class ParseError(DataComplexityError):
    """Malformed input file or malformed observable string."""


class EmptyDataset(DataComplexityError):
    """Input table contains no rows."""


class InsufficientSamples(DataComplexityError):
    """Operation requires more rows than the dataset has."""


class NotStandardized(DataComplexityError):
    """Operation requires a standardized dataset."""


class InvalidConfig(DataComplexityError):
    """Configuration value out of its legal range."""


class InvalidIndexSet(DataComplexityError):
    """Column/qubit index set is malformed (repeats, out of range, too small)."""


class OrderTooHigh(DataComplexityError):
    """Cumulant/correlator order above the supported cap."""


class DegenerateSpectrum(DataComplexityError):
    """All eigenvalues are zero."""


class DegenerateCollection(DataComplexityError):
    """Benchmark collection has no positive entry to normalize against."""


class NumericalError(DataComplexityError):
    """Non-finite values produced where finite ones are required."""


class TooManyPoints(DataComplexityError):
    """Point cloud exceeds the configured Rips cap."""


class ArityError(DataComplexityError):
    """Parameter-vector or qubit-count mismatch."""


class ZeroVector(DataComplexityError):
    """Amplitude encoding of an all-zero vector."""


class CapacityError(DataComplexityError):
    """Feature vector does not fit the requested encoding."""


class InvalidSubset(DataComplexityError):
    """Qubit subset is empty, overlapping, or otherwise illegal."""


class InvalidState(DataComplexityError):
    """Density matrix violates positivity/trace tolerances."""


class EnsembleError(DataComplexityError):
    """Ensemble members are inconsistent with each other."""


class MissingMetric(DataComplexityError):
    """Composite score requested without all required components."""


class FitError(DataComplexityError):
    """Regression has too few or invalid points."""
