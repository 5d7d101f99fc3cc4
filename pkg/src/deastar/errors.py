class UsageError(ValueError):
    """A precondition of a public operation was violated."""


class MapParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class GenerationError(RuntimeError):
    pass


class ConfigError(ValueError):
    pass


class RunawayError(RuntimeError):
    """The real-time step budget ran out; ``trace`` holds the partial run."""

    def __init__(self, message: str, trace):
        super().__init__(message)
        self.trace = trace
