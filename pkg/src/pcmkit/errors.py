"""Exception types shared across the package."""


class PcmkitError(Exception):
    """Base class for domain errors raised by this package."""


class DegenerateDataError(PcmkitError):
    """Raised when the data cannot support the requested operation,
    e.g. all points identical with more than one cluster requested, or a
    cluster whose weighted second moment is zero."""


class TotalEliminationError(PcmkitError):
    """Raised when every cluster has been eliminated during a run."""


class DataFormatError(PcmkitError):
    """Raised for malformed point files (bad rows, inconsistent columns,
    empty input)."""
