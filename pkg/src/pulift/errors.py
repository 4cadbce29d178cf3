"""Exception types shared across the toolkit."""


class PuliftError(Exception):
    """Base class for all toolkit errors."""


class DataError(PuliftError):
    """Raised when a dataset file or dataset invariant is invalid."""


class ModelFormatError(PuliftError):
    """Raised when a serialized model cannot be read back."""


class DegenerateRoundError(PuliftError):
    """Raised when a tagging round produces a single-class training set."""
