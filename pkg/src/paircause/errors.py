"""Exception types shared across the package."""


class PaircauseError(Exception):
    """Base class for every error raised by this package."""


class PairFormatError(PaircauseError):
    """A pair or metadata file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        loc = str(path) if path is not None else ""
        if line is not None:
            loc += f":{line}"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = path
        self.line = line


class DimensionError(PaircauseError):
    """Mismatched grid sizes or out-of-range column indexes."""


class DegenerateDataError(PaircauseError):
    """A coordinate with zero range; the pair cannot be classified."""


class ParameterError(PaircauseError):
    """Invalid or missing hyperparameter or argument."""


class ConfigError(PaircauseError):
    """Invalid configuration file, flag combination, or rule set."""


class ScoringError(PaircauseError):
    """Benchmark scoring is impossible (missing truth, one-class AUC, ...)."""


class CoverageError(PaircauseError):
    """A sweep does not cover the requested full factorial exactly once."""
