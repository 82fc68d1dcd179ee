class NotASolutionError(ValueError):
    """The supplied tuple does not satisfy x**p + y**p == z**p."""


class InternalConsistencyError(RuntimeError):
    """A state that exact arithmetic says is unreachable was reached."""


class ConfigError(ValueError):
    """Invalid search or pipeline configuration."""


class SearchAborted(RuntimeError):
    """Raised when a sweep stops early; carries the partial report."""

    def __init__(self, message, partial_report):
        super().__init__(message)
        self.partial_report = partial_report
